#pragma once

#include <string>

#include <json.hpp>

#include "moduli/graph.hpp"

namespace moduli {

GraphKind parse_graph_kind(const std::string& name);
Color parse_color(const std::string& name);

nlohmann::json to_json(const MarkedGraph& graph);

/// Throws Error(ParseError) on malformed input; does not validate invariants.
MarkedGraph graph_from_json(const nlohmann::json& j);

/// Graphviz rendering: vertices shaded by color, legs as labelled half-edges.
std::string to_dot(const MarkedGraph& graph, const std::string& name = "G");

}  // namespace moduli

#include "moduli/graph_io.hpp"

#include <sstream>

#include "moduli/error.hpp"

namespace moduli {

using nlohmann::json;

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "modular") return GraphKind::Modular;
  if (name == "rooted_forest") return GraphKind::RootedForest;
  if (name == "colored_tree") return GraphKind::ColoredTree;
  if (name == "rooted_colored_tree") return GraphKind::RootedColoredTree;
  throw Error(ErrorCode::ParseError, "unknown graph kind '" + name + "'");
}

Color parse_color(const std::string& name) {
  if (name == "zero") return Color::Zero;
  if (name == "colored") return Color::Colored;
  if (name == "infinity") return Color::Infinity;
  throw Error(ErrorCode::ParseError, "unknown color '" + name + "'");
}

json to_json(const MarkedGraph& g) {
  json j;
  j["kind"] = to_string(g.kind);
  j["vertices"] = json::array();
  for (const auto& v : g.vertices) {
    json jv{{"id", v.id}};
    if (g.kind == GraphKind::Modular) jv["genus"] = v.genus;
    if (is_colored_kind(g.kind)) jv["color"] = to_string(v.color);
    j["vertices"].push_back(jv);
  }
  j["edges"] = json::array();
  for (const auto& e : g.edges) j["edges"].push_back({e.u, e.v});
  j["legs"] = json::object();
  for (const auto& [label, v] : g.legs) j["legs"][std::to_string(label)] = v;
  if (g.root) j["root"] = *g.root;
  return j;
}

MarkedGraph graph_from_json(const json& j) {
  try {
    MarkedGraph g;
    g.kind = parse_graph_kind(j.at("kind").get<std::string>());
    for (const auto& jv : j.at("vertices")) {
      Vertex v;
      v.id = jv.at("id").get<int>();
      if (jv.contains("genus")) v.genus = jv["genus"].get<int>();
      if (jv.contains("color")) v.color = parse_color(jv["color"].get<std::string>());
      g.vertices.push_back(v);
    }
    for (const auto& je : j.at("edges")) {
      if (!je.is_array() || je.size() != 2) throw Error(ErrorCode::ParseError, "edge must be a pair");
      g.edges.push_back({je[0].get<int>(), je[1].get<int>()});
    }
    for (const auto& [label, v] : j.at("legs").items()) {
      std::size_t pos = 0;
      int l = std::stoi(label, &pos);
      if (pos != label.size()) throw Error(ErrorCode::ParseError, "bad leg label '" + label + "'");
      g.legs[l] = v.get<int>();
    }
    if (j.contains("root") && !j["root"].is_null()) g.root = j["root"].get<int>();
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string to_dot(const MarkedGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  os << "  node [style=filled, shape=circle, fontsize=10];\n";
  for (const auto& v : g.vertices) {
    const char* fill = "#f0f0f0";
    const char* font = "black";
    if (is_colored_kind(g.kind)) {
      if (v.color == Color::Colored) fill = "#a0a0a0";
      if (v.color == Color::Infinity) {
        fill = "#303030";
        font = "white";
      }
    }
    std::string label = g.kind == GraphKind::Modular ? std::to_string(v.genus) : "";
    bool is_root = g.root && *g.root == v.id;
    os << "  v" << v.id << " [label=\"" << label << "\", fillcolor=\"" << fill
       << "\", fontcolor=\"" << font << "\"" << (is_root ? ", peripheries=2" : "") << "];\n";
  }
  for (const auto& e : g.edges) os << "  v" << e.u << " -- v" << e.v << ";\n";
  for (const auto& [label, v] : g.legs) {
    os << "  leg" << label << " [shape=plaintext, style=\"\", label=\"" << label << "\"];\n";
    os << "  v" << v << " -- leg" << label << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace moduli

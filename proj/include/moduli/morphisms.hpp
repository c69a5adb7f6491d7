#pragma once

// Morphisms of combinatorial types: collapsing, cutting and forgetting.
// All functions are pure and require a valid input graph.

#include <map>
#include <utility>
#include <vector>

#include "moduli/graph.hpp"

namespace moduli {

/// Contracts one finite edge. Loops (Modular only) raise the genus by one.
/// Colored kinds may not contract an edge joining a Colored vertex to an
/// Infinity vertex.
MarkedGraph collapse_edge(const MarkedGraph& graph, int edge);

/// Merges the Infinity vertex `center` with all its Colored children into one
/// Colored vertex. Every child of `center` must be Colored.
MarkedGraph collapse_with_relations(const MarkedGraph& graph, int center);

/// Replaces a finite edge by two legs. `labels.first` is attached to the
/// endpoint nearer the root (tree kinds) or to `edge.u` (Modular).
MarkedGraph cut_edge(const MarkedGraph& graph, int edge, std::pair<int, int> labels);

/// Cuts a full transversal of the edges between the Colored level and the
/// root. `labels[i]` is used for `edges[i]` as in cut_edge.
MarkedGraph cut_edges_with_relations(const MarkedGraph& graph, const std::vector<int>& edges,
                                     const std::vector<std::pair<int, int>>& labels);

/// Reattaches legs `a` and `b` by a new finite edge (inverse of cut_edge).
MarkedGraph glue_legs(const MarkedGraph& graph, int a, int b);

/// Removes a leg and restabilizes. Surviving labels are not renumbered.
MarkedGraph forget_tail(const MarkedGraph& graph, int leg);

/// Applies a label map (labels absent from the map are kept).
MarkedGraph relabel(const MarkedGraph& graph, const std::map<int, int>& mapping);

/// Renumbers the non-root legs to 1..n preserving their order.
MarkedGraph compact_labels(const MarkedGraph& graph);

/// Edges of a colored-kind tree whose lower endpoint is Colored or Infinity,
/// i.e. the edges between the Colored level and the root.
std::vector<int> root_path_edges(const MarkedGraph& graph);

}  // namespace moduli

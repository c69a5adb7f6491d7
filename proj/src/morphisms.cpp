#include "moduli/morphisms.hpp"

#include <algorithm>
#include <set>

#include "moduli/error.hpp"

namespace moduli {

namespace {

void check_edge(const MarkedGraph& g, int edge) {
  if (edge < 0 || edge >= static_cast<int>(g.edges.size())) {
    throw Error(ErrorCode::NoSuchEdge, "edge " + std::to_string(edge));
  }
}

// Replaces every reference to `drop` by `keep` and deletes `drop`.
void merge_vertex(MarkedGraph& g, int keep, int drop) {
  for (auto& e : g.edges) {
    if (e.u == drop) e.u = keep;
    if (e.v == drop) e.v = keep;
  }
  for (auto& [label, v] : g.legs) {
    if (v == drop) v = keep;
  }
  if (g.root && *g.root == drop) g.root = keep;
  g.vertices.erase(std::find_if(g.vertices.begin(), g.vertices.end(),
                                [drop](const Vertex& v) { return v.id == drop; }));
}

void erase_vertex(MarkedGraph& g, int id) {
  g.vertices.erase(std::find_if(g.vertices.begin(), g.vertices.end(),
                                [id](const Vertex& v) { return v.id == id; }));
}

// Orientation of the component containing `vertex`, hung from the designated
// root when it lies in that component and from its smallest-labelled leg
// otherwise.
TreeOrientation orient_component(const MarkedGraph& g, int vertex) {
  auto root = g.root_vertex();
  if (root) {
    TreeOrientation t = orient(g, *root);
    if (t.depth.count(vertex)) return t;
  }
  TreeOrientation local = orient(g, vertex);
  for (const auto& [label, v] : g.legs) {
    if (local.depth.count(v)) return orient(g, v);
  }
  return local;
}

bool is_unstable(const MarkedGraph& g, const Vertex& v) {
  int val = g.valence(v.id);
  switch (g.kind) {
    case GraphKind::Modular:
      return (v.genus == 0 && val < 3) || (v.genus == 1 && val < 1);
    case GraphKind::RootedForest:
      return v.id != *g.root && val < 3;
    case GraphKind::ColoredTree:
    case GraphKind::RootedColoredTree:
      if (g.root && v.id == *g.root) return false;
      return v.color == Color::Colored ? val < 2 : val < 3;
  }
  return false;
}

// Removes one unstable vertex following the restabilization rules. Returns
// false if the vertex cannot be absorbed.
bool stabilize_vertex(MarkedGraph& g, int id) {
  auto inc = g.incident_edges(id);
  auto legs = g.legs_at(id);
  int val = g.valence(id);
  if (val == 1 && inc.size() == 1 && !g.edges[inc[0]].is_loop()) {
    // A leaf vertex hanging by its only edge (a Colored vertex left without
    // markings, or a genus-0 component reduced to one node).
    g.edges.erase(g.edges.begin() + inc[0]);
    erase_vertex(g, id);
    return true;
  }
  if (val != 2) return false;
  if (inc.size() == 2) {
    const Edge a = g.edges[inc[0]];
    const Edge b = g.edges[inc[1]];
    int x = a.other(id), y = b.other(id);
    g.edges.erase(g.edges.begin() + std::max(inc[0], inc[1]));
    g.edges.erase(g.edges.begin() + std::min(inc[0], inc[1]));
    g.edges.push_back({x, y});
    erase_vertex(g, id);
    return true;
  }
  if (inc.size() == 1 && legs.size() == 1 && !g.edges[inc[0]].is_loop()) {
    int neighbor = g.edges[inc[0]].other(id);
    g.legs[legs[0]] = neighbor;
    g.edges.erase(g.edges.begin() + inc[0]);
    erase_vertex(g, id);
    return true;
  }
  return false;
}

}  // namespace

MarkedGraph collapse_edge(const MarkedGraph& graph, int edge) {
  check_edge(graph, edge);
  require_valid(graph);
  MarkedGraph g = graph;
  const Edge e = g.edges[edge];
  if (e.is_loop()) {
    g.edges.erase(g.edges.begin() + edge);
    g.vertex(e.u).genus += 1;
    return g;
  }
  int keep = e.u, drop = e.v;
  if (is_tree_kind(g.kind)) {
    TreeOrientation t = orient_component(g, e.u);
    if (t.depth.at(e.v) < t.depth.at(e.u)) std::swap(keep, drop);
  }
  if (is_colored_kind(g.kind)) {
    Color a = g.vertex(keep).color, b = g.vertex(drop).color;
    bool finite = a != Color::Infinity && b != Color::Infinity;
    bool infinite = a == Color::Infinity && b == Color::Infinity;
    if (!finite && !infinite) {
      throw Error(ErrorCode::ForbiddenCollapse,
                  "edge " + std::to_string(edge) + " joins a colored and an infinity vertex");
    }
    if (finite && (a == Color::Colored || b == Color::Colored)) g.vertex(keep).color = Color::Colored;
  }
  g.vertex(keep).genus += g.vertex(drop).genus;
  g.edges.erase(g.edges.begin() + edge);
  merge_vertex(g, keep, drop);
  return g;
}

MarkedGraph collapse_with_relations(const MarkedGraph& graph, int center) {
  if (!is_colored_kind(graph.kind)) {
    throw Error(ErrorCode::KindMismatch, "collapse with relations needs a colored kind");
  }
  require_valid(graph);
  if (!graph.has_vertex(center) || graph.vertex(center).color != Color::Infinity) {
    throw Error(ErrorCode::NotInfinityVertex, "vertex " + std::to_string(center));
  }
  MarkedGraph g = graph;
  TreeOrientation t = orient_component(g, center);
  const auto& kids = t.children.at(center);
  if (kids.empty()) {
    // The Infinity root of the point stratum of SCALED(0) becomes the open stratum.
    bool bare_root = g.kind == GraphKind::RootedColoredTree && g.root && *g.root == center &&
                     g.edges.empty() && g.legs.empty();
    if (!bare_root) throw Error(ErrorCode::NothingToCollapse, "vertex " + std::to_string(center));
    g.vertex(center).color = Color::Colored;
    return g;
  }
  for (int k : kids) {
    if (g.vertex(k).color != Color::Colored) {
      throw Error(ErrorCode::NothingToCollapse,
                  "child " + std::to_string(k) + " of vertex " + std::to_string(center) +
                      " is not colored");
    }
  }
  std::vector<int> edge_ids;
  for (int k : kids) edge_ids.push_back(t.parent_edge.at(k));
  std::sort(edge_ids.rbegin(), edge_ids.rend());
  for (int ei : edge_ids) g.edges.erase(g.edges.begin() + ei);
  for (int k : kids) merge_vertex(g, center, k);
  g.vertex(center).color = Color::Colored;
  return g;
}

std::vector<int> root_path_edges(const MarkedGraph& g) {
  std::vector<int> out;
  auto root = g.root_vertex();
  if (!is_colored_kind(g.kind) || !root) return out;
  TreeOrientation t = orient(g, *root);
  for (const auto& [child, ei] : t.parent_edge) {
    if (g.vertex(child).color != Color::Zero) out.push_back(ei);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void check_new_labels(const MarkedGraph& g, std::pair<int, int> labels, std::set<int>& used) {
  for (int l : {labels.first, labels.second}) {
    if (l <= 0) throw Error(ErrorCode::DuplicateLegLabel, "label " + std::to_string(l) + " is reserved");
    if (g.legs.count(l) || !used.insert(l).second) {
      throw Error(ErrorCode::DuplicateLegLabel, "label " + std::to_string(l));
    }
  }
}

// Endpoint order (upper, lower) of an edge.
std::pair<int, int> edge_ends(const MarkedGraph& g, int edge) {
  const Edge& e = g.edges[edge];
  if (!is_tree_kind(g.kind)) return {e.u, e.v};
  TreeOrientation t = orient_component(g, e.u);
  if (t.depth.at(e.u) <= t.depth.at(e.v)) return {e.u, e.v};
  return {e.v, e.u};
}

}  // namespace

MarkedGraph cut_edge(const MarkedGraph& graph, int edge, std::pair<int, int> labels) {
  check_edge(graph, edge);
  require_valid(graph);
  std::set<int> used;
  check_new_labels(graph, labels, used);
  if (is_colored_kind(graph.kind)) {
    auto forbidden = root_path_edges(graph);
    if (std::find(forbidden.begin(), forbidden.end(), edge) != forbidden.end()) {
      throw Error(ErrorCode::ForbiddenCut,
                  "edge " + std::to_string(edge) + " lies between the colored level and the root");
    }
  }
  MarkedGraph g = graph;
  auto [upper, lower] = edge_ends(g, edge);
  g.edges.erase(g.edges.begin() + edge);
  g.legs[labels.first] = upper;
  g.legs[labels.second] = lower;
  return g;
}

MarkedGraph cut_edges_with_relations(const MarkedGraph& graph, const std::vector<int>& edges,
                                     const std::vector<std::pair<int, int>>& labels) {
  if (!is_colored_kind(graph.kind)) {
    throw Error(ErrorCode::KindMismatch, "cutting with relations needs a colored kind");
  }
  if (edges.size() != labels.size()) {
    throw Error(ErrorCode::ForbiddenCut, "one label pair per edge required");
  }
  for (int e : edges) check_edge(graph, e);
  require_valid(graph);
  std::set<int> used;
  for (auto p : labels) check_new_labels(graph, p, used);
  std::set<int> chosen(edges.begin(), edges.end());
  if (chosen.size() != edges.size()) throw Error(ErrorCode::ForbiddenCut, "repeated edge");
  auto allowed = root_path_edges(graph);
  for (int e : edges) {
    if (std::find(allowed.begin(), allowed.end(), e) == allowed.end()) {
      throw Error(ErrorCode::ForbiddenCut, "edge " + std::to_string(e) + " is not on a root path");
    }
  }
  // Every Colored vertex must reach the root through exactly one chosen edge.
  TreeOrientation t = orient(graph, *graph.root_vertex());
  for (const auto& v : graph.vertices) {
    if (v.color != Color::Colored) continue;
    int hits = 0;
    auto path = t.path_to_root(v.id);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) hits += chosen.count(t.parent_edge.at(path[i]));
    if (hits != 1) {
      throw Error(ErrorCode::ForbiddenCut,
                  "colored vertex " + std::to_string(v.id) + " crosses " + std::to_string(hits) +
                      " cut edges (partial transversals are not supported)");
    }
  }
  MarkedGraph g = graph;
  std::vector<std::pair<int, std::pair<int, int>>> order;
  for (std::size_t i = 0; i < edges.size(); ++i) order.push_back({edges[i], labels[i]});
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [e, lab] : order) {
    auto [upper, lower] = edge_ends(graph, e);
    g.edges.erase(g.edges.begin() + e);
    g.legs[lab.first] = upper;
    g.legs[lab.second] = lower;
  }
  return g;
}

MarkedGraph glue_legs(const MarkedGraph& graph, int a, int b) {
  if (!graph.legs.count(a)) throw Error(ErrorCode::NoSuchLeg, "leg " + std::to_string(a));
  if (!graph.legs.count(b)) throw Error(ErrorCode::NoSuchLeg, "leg " + std::to_string(b));
  MarkedGraph g = graph;
  g.edges.push_back({g.legs.at(a), g.legs.at(b)});
  g.legs.erase(a);
  g.legs.erase(b);
  return g;
}

MarkedGraph forget_tail(const MarkedGraph& graph, int leg) {
  if (!graph.legs.count(leg)) throw Error(ErrorCode::NoSuchLeg, "leg " + std::to_string(leg));
  if (graph.kind == GraphKind::ColoredTree && leg == 0) {
    throw Error(ErrorCode::CannotForgetRoot, "leg 0 is the root leg");
  }
  require_valid(graph);
  int remaining = graph.n() - 1;
  if (graph.kind == GraphKind::Modular && remaining < 3) {
    throw Error(ErrorCode::MinimumMarkings, "genus-zero types need at least 3 markings");
  }
  if (graph.kind == GraphKind::ColoredTree && remaining < 1) {
    throw Error(ErrorCode::MinimumMarkings, "scaled affine types need at least 1 marking");
  }
  MarkedGraph g = graph;
  g.legs.erase(leg);

  // Worklist: always absorb the unstable vertex farthest from the root.
  for (;;) {
    std::optional<int> anchor = g.root_vertex();
    if (!anchor && !g.legs.empty()) anchor = g.legs.begin()->second;
    TreeOrientation t = anchor ? orient(g, *anchor) : TreeOrientation{};
    int best = -1, best_depth = -1;
    for (const auto& v : g.vertices) {
      if (!is_unstable(g, v)) continue;
      int d = t.depth.count(v.id) ? t.depth.at(v.id) : 0;
      if (d > best_depth) {
        best_depth = d;
        best = v.id;
      }
    }
    if (best < 0) break;
    if (!stabilize_vertex(g, best)) {
      throw Error(ErrorCode::MinimumMarkings,
                  "vertex " + std::to_string(best) + " cannot be stabilized");
    }
  }
  return g;
}

MarkedGraph relabel(const MarkedGraph& graph, const std::map<int, int>& mapping) {
  MarkedGraph g = graph;
  g.legs.clear();
  for (const auto& [label, v] : graph.legs) {
    auto it = mapping.find(label);
    int target = it == mapping.end() ? label : it->second;
    if (g.legs.count(target)) throw Error(ErrorCode::DuplicateLegLabel, "label " + std::to_string(target));
    g.legs[target] = v;
  }
  return g;
}

MarkedGraph compact_labels(const MarkedGraph& graph) {
  std::map<int, int> mapping;
  int next = 1;
  for (const auto& [label, v] : graph.legs) {
    if (graph.kind == GraphKind::ColoredTree && label == 0) continue;
    mapping[label] = next++;
  }
  return relabel(graph, mapping);
}

}  // namespace moduli

#pragma once

// Combinatorial types of strata: modular graphs, rooted forests, colored trees
// and rooted colored trees, with validation, stability and canonical forms.

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moduli {

enum class GraphKind { Modular, RootedForest, ColoredTree, RootedColoredTree };

/// Scaling class of a vertex in the colored kinds.
enum class Color { Zero, Colored, Infinity };

std::string to_string(GraphKind kind);
std::string to_string(Color color);

inline bool is_colored_kind(GraphKind k) {
  return k == GraphKind::ColoredTree || k == GraphKind::RootedColoredTree;
}
inline bool is_rooted_kind(GraphKind k) {
  return k == GraphKind::RootedForest || k == GraphKind::RootedColoredTree;
}
inline bool is_tree_kind(GraphKind k) { return k != GraphKind::Modular; }

struct Vertex {
  int id = 0;
  int genus = 0;
  Color color = Color::Zero;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Finite edge between two vertex ids; u == v is a loop (Modular only).
struct Edge {
  int u = 0;
  int v = 0;

  bool is_loop() const { return u == v; }
  int other(int w) const { return w == u ? v : u; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A marked graph of one of the four kinds. Edge ids are positions in `edges`;
/// vertex ids are arbitrary and carry no structure.
struct MarkedGraph {
  GraphKind kind = GraphKind::Modular;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::map<int, int> legs;  // leg label -> vertex id
  std::optional<int> root;  // rooted kinds only

  /// Number of non-root legs (every leg except label 0 of a ColoredTree).
  int n() const;
  bool has_vertex(int id) const;
  const Vertex& vertex(int id) const;
  Vertex& vertex(int id);
  int valence(int id) const;
  std::vector<int> legs_at(int id) const;
  std::vector<int> incident_edges(int id) const;
  std::vector<int> leg_labels() const;
  int count_color(Color c) const;
  int next_vertex_id() const;
  /// Vertex carrying leg 0 (ColoredTree) or the root vertex (rooted kinds).
  std::optional<int> root_vertex() const;

  friend bool operator==(const MarkedGraph&, const MarkedGraph&) = default;
};

class GraphBuilder {
 public:
  explicit GraphBuilder(GraphKind kind) { g_.kind = kind; }

  GraphBuilder& vertex(int id, Color color = Color::Zero, int genus = 0) {
    g_.vertices.push_back({id, genus, color});
    return *this;
  }
  GraphBuilder& edge(int u, int v) {
    g_.edges.push_back({u, v});
    return *this;
  }
  GraphBuilder& leg(int label, int vertex) {
    g_.legs[label] = vertex;
    return *this;
  }
  GraphBuilder& legs(std::initializer_list<int> labels, int vertex) {
    for (int l : labels) g_.legs[l] = vertex;
    return *this;
  }
  GraphBuilder& root(int vertex) {
    g_.root = vertex;
    return *this;
  }
  MarkedGraph build() const { return g_; }

 private:
  MarkedGraph g_;
};

struct Violation {
  std::string invariant;
  std::string where;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate(const MarkedGraph& graph);

/// Throws Error(InvalidGraph) with the report summary when validation fails.
void require_valid(const MarkedGraph& graph);

bool is_stable(const MarkedGraph& graph);

/// Complete isomorphism invariant (label-, color-, genus- and root-preserving).
std::string canonical_key(const MarkedGraph& graph);

bool is_isomorphic(const MarkedGraph& a, const MarkedGraph& b);

/// Vertex ids of each connected component, components ordered by smallest id.
std::vector<std::vector<int>> connected_components(const MarkedGraph& graph);

/// Parent structure of a tree-kind component hung from `root`.
struct TreeOrientation {
  int root = 0;
  std::map<int, int> parent;       // vertex -> parent vertex (absent for root)
  std::map<int, int> parent_edge;  // vertex -> edge id to parent
  std::map<int, std::vector<int>> children;
  std::map<int, int> depth;
  std::vector<int> order;  // BFS order from the root

  /// Vertices from `v` up to the root, inclusive.
  std::vector<int> path_to_root(int v) const;
};

TreeOrientation orient(const MarkedGraph& graph, int root);

/// Renumbers vertex ids to 0..V-1 in order of appearance.
MarkedGraph normalize_vertex_ids(const MarkedGraph& graph);

}  // namespace moduli

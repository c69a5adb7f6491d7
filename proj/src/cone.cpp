#include "moduli/cone.hpp"

#include <algorithm>
#include <set>

#include "moduli/error.hpp"

namespace moduli {

RelationLattice relation_lattice(const MarkedGraph& g) {
  if (!is_colored_kind(g.kind)) {
    throw Error(ErrorCode::KindMismatch, "relation lattice needs a colored kind");
  }
  require_valid(g);
  if (connected_components(g).size() != 1) throw Error(ErrorCode::Disconnected, "graph is a forest");
  RelationLattice lat;
  for (const auto& v : g.vertices) {
    if (v.color == Color::Colored) lat.colored.push_back(v.id);
  }
  if (lat.colored.empty()) throw Error(ErrorCode::NoColoredVertex, "no colored vertex");
  const std::size_t E = g.edges.size();
  for (std::size_t e = 0; e < E; ++e) lat.edges.push_back(static_cast<int>(e));

  TreeOrientation t = orient(g, *g.root_vertex());
  const int base = lat.colored.front();
  auto up_base = t.path_to_root(base);
  for (std::size_t k = 1; k < lat.colored.size(); ++k) {
    auto up_w = t.path_to_root(lat.colored[k]);
    std::set<int> on_w(up_w.begin(), up_w.end());
    IntVector row(E, 0);
    int lca = base;
    for (int v : up_base) {
      if (on_w.count(v)) {
        lca = v;
        break;
      }
      row[t.parent_edge.at(v)] += 1;
    }
    for (int v : up_w) {
      if (v == lca) break;
      row[t.parent_edge.at(v)] -= 1;
    }
    lat.matrix.push_back(row);
  }
  lat.rank = matrix_rank(lat.matrix, E);
  return lat;
}

ConeData classify_relations(const IntMatrix& relations, std::size_t E) {
  ConeData cone;
  SmithForm snf = smith_normal_form(relations, E);
  const std::size_t r = snf.rank;
  cone.ambient_rank = static_cast<int>(E - r);
  for (const auto& d : snf.diagonal) {
    if (d > 1) cone.torsion.push_back(d);
  }
  for (std::size_t i = 0; i < E; ++i) {
    IntVector img(snf.V[i].begin() + r, snf.V[i].end());
    cone.edge_images.push_back(img);
  }
  std::vector<IntVector> candidates;
  for (const auto& img : cone.edge_images) {
    IntVector p = primitive(img);
    if (std::all_of(p.begin(), p.end(), [](const Integer& x) { return x == 0; })) continue;
    if (std::find(candidates.begin(), candidates.end(), p) == candidates.end()) candidates.push_back(p);
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<RatVector> others;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (j != i) others.push_back(to_rational(candidates[j]));
    }
    if (!in_rational_cone(others, to_rational(candidates[i]))) cone.rays.push_back(candidates[i]);
  }
  std::sort(cone.rays.begin(), cone.rays.end());
  cone.simplicial = static_cast<int>(cone.rays.size()) == cone.ambient_rank;
  cone.smooth = cone.simplicial && abs(determinant(cone.rays)) == 1;
  return cone;
}

ConeData classify_cone(const MarkedGraph& g) {
  RelationLattice lat = relation_lattice(g);
  return classify_relations(lat.matrix, lat.edges.size());
}

std::vector<IntVector> cone_rays(const MarkedGraph& g) { return classify_cone(g).rays; }

}  // namespace moduli

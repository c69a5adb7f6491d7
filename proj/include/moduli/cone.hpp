#pragma once

// Balanced-labelling relations of a colored tree and the toric cone of its
// gluing-parameter space.

#include <vector>

#include "moduli/graph.hpp"
#include "moduli/lattice.hpp"

namespace moduli {

struct RelationLattice {
  std::vector<int> edges;  // column order (edge ids)
  IntMatrix matrix;        // one row per non-base Colored vertex
  int rank = 0;
  std::vector<int> colored;  // base Colored vertex first
};

/// Rows run from the base Colored vertex to every other Colored vertex: +1 on
/// edges climbing toward the root, -1 on edges descending away from it.
RelationLattice relation_lattice(const MarkedGraph& graph);

struct ConeData {
  int ambient_rank = 0;
  std::vector<IntVector> rays;         // primitive extremal generators
  std::vector<IntVector> edge_images;  // image of each edge basis vector
  IntVector torsion;                   // invariant factors > 1 of the relation lattice
  bool simplicial = true;
  bool smooth = true;
};

/// Extremal rays of the image of the positive orthant in Z^E / sat(R).
std::vector<IntVector> cone_rays(const MarkedGraph& graph);
ConeData classify_cone(const MarkedGraph& graph);

/// Same computation from a bare relation matrix with `cols` columns.
ConeData classify_relations(const IntMatrix& relations, std::size_t cols);

}  // namespace moduli

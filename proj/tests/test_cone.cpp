#include <doctest.h>

#include <random>

#include "moduli/acceptance.hpp"
#include "moduli/cone.hpp"
#include "moduli/error.hpp"
#include "moduli/oracle/iso_oracle.hpp"
#include "moduli/strata.hpp"

using namespace moduli;

namespace {

IntMatrix ints(std::initializer_list<std::initializer_list<long>> rows) {
  IntMatrix m;
  for (const auto& r : rows) {
    IntVector v;
    for (long x : r) v.push_back(Integer(x));
    m.push_back(v);
  }
  return m;
}

bool same_row_space(const IntMatrix& a, const IntMatrix& b, std::size_t cols) {
  IntMatrix both = a;
  both.insert(both.end(), b.begin(), b.end());
  int r = matrix_rank(both, cols);
  return r == matrix_rank(a, cols) && r == matrix_rank(b, cols);
}

// Relation matrix re-indexed so column i is edge id i.
IntMatrix by_edge_id(const RelationLattice& r, std::size_t edges) {
  IntMatrix out;
  for (const auto& row : r.matrix) {
    IntVector v(edges, Integer(0));
    for (std::size_t c = 0; c < r.edges.size(); ++c) v[r.edges[c]] = row[c];
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST_CASE("Smith normal form") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 5;
    IntMatrix a(rows, IntVector(cols));
    for (auto& r : a)
      for (auto& x : r) x = static_cast<long>(rng() % 9) - 4;
    SmithForm f = smith_normal_form(a, cols);
    CHECK(multiply(multiply(f.U, a), f.V) == f.D);
    CHECK(abs(determinant(f.U)) == 1);
    CHECK(abs(determinant(f.V)) == 1);
    CHECK(f.rank == matrix_rank(a, cols));
    for (std::size_t i = 0; i + 1 < f.diagonal.size(); ++i) {
      CHECK(f.diagonal[i] > 0);
      CHECK(f.diagonal[i + 1] % f.diagonal[i] == 0);
    }
  }
  auto f = smith_normal_form(ints({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}), 3);
  CHECK(f.diagonal == IntVector{2, 6, 12});  // classical textbook example
}

TEST_CASE("cone membership and half-space witnesses") {
  std::vector<RatVector> gens{{1, 0}, {1, 2}};
  CHECK(in_rational_cone(gens, {2, 1}));
  CHECK_FALSE(in_rational_cone(gens, {0, 1}));
  CHECK(in_rational_cone({}, {0, 0}));
  CHECK_FALSE(in_rational_cone({}, {1, 0}));
  auto eta = half_space_witness({{1, 0}, {1, 2}, {1, -3}}, 2);
  REQUIRE(eta);
  CHECK((*eta)[0] >= 1);
  CHECK_FALSE(half_space_witness({{1}, {-1}}, 1));
  CHECK(primitive({Integer(4), Integer(-6)}) == IntVector{2, -3});
}

TEST_CASE("singular cone example") {
  MarkedGraph g = singular_cone_tree();
  REQUIRE(validate(g).ok());
  REQUIRE(is_stable(g));
  RelationLattice r = relation_lattice(g);
  CHECK(r.rank == 3);
  // g3 = g4, g1 g3 = g2 g5, g5 = g6 with edge ids 0..5 for g1..g6.
  auto expected = ints({{0, 0, 1, -1, 0, 0}, {1, -1, 1, 0, -1, 0}, {0, 0, 0, 0, 1, -1}});
  CHECK(same_row_space(by_edge_id(r, 6), expected, 6));
  ConeData c = classify_cone(g);
  CHECK(c.ambient_rank == 3);
  CHECK(c.rays.size() == 4);
  CHECK_FALSE(c.simplicial);
  CHECK_FALSE(c.smooth);
  CHECK(oracle::lattice_equivalent(c.rays, ints({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, -1, 1}})));
  CHECK_FALSE(oracle::lattice_equivalent(c.rays, ints({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}})));
  CHECK(stratum_codimension(g, {SpaceKind::MULT, 4}) == 3);
}

TEST_CASE("three-relation example") {
  MarkedGraph g = three_relation_tree();
  REQUIRE(validate(g).ok());
  REQUIRE(is_stable(g));
  RelationLattice r = relation_lattice(g);
  CHECK(r.rank == 3);
  // g1 = g2, g3 = g4, g1 g5 = g3 g6.
  auto expected = ints({{1, -1, 0, 0, 0, 0, 0, 0}, {0, 0, 1, -1, 0, 0, 0, 0}, {1, 0, -1, 0, 1, -1, 0, 0}});
  CHECK(same_row_space(by_edge_id(r, 8), expected, 8));
  CHECK(classify_cone(g).ambient_rank == 5);
  CHECK(stratum_codimension(g, {SpaceKind::MULT, 7}) == 5);
}

TEST_CASE("small cones") {
  auto d = partition_divisor_type({SpaceKind::MULT, 2}, {{1}, {2}});
  ConeData c = classify_cone(d);
  CHECK(c.ambient_rank == 1);
  CHECK(c.rays.size() == 1);
  CHECK(c.smooth);
  auto bubble = subset_divisor_type({SpaceKind::MULT, 3}, {1, 2});
  CHECK(relation_lattice(bubble).rank == 0);
  CHECK(classify_cone(bubble).rays == std::vector<IntVector>{{Integer(1)}});
  // The infinite-scaling root alone has no colored vertex.
  auto bare = GraphBuilder(GraphKind::RootedColoredTree).vertex(0, Color::Infinity).root(0).build();
  CHECK_THROWS_AS(relation_lattice(bare), Error);
  CHECK_THROWS_AS(relation_lattice(open_stratum({SpaceKind::M0, 4})), Error);
}

TEST_CASE("cone invariants over all strata") {
  for (Space s : {Space{SpaceKind::MULT, 4}, Space{SpaceKind::SCALED, 3}}) {
    for (const auto& g : enumerate_strata(s)) {
      if (g.count_color(Color::Colored) == 0) continue;
      ConeData c = classify_cone(g);
      CHECK(c.ambient_rank == stratum_codimension(g, s));
      if (c.smooth) CHECK(c.simplicial);
      CHECK(c.simplicial == (static_cast<int>(c.rays.size()) == c.ambient_rank));
      for (std::size_t i = 0; i < c.rays.size(); ++i) {
        CHECK(primitive(c.rays[i]) == c.rays[i]);
        for (std::size_t j = i + 1; j < c.rays.size(); ++j) {
          CHECK(matrix_rank({c.rays[i], c.rays[j]}, c.rays[i].size()) == 2);
        }
      }
      // Basis independence: reversing the edge order gives an equivalent cone.
      MarkedGraph h = g;
      std::reverse(h.edges.begin(), h.edges.end());
      ConeData c2 = classify_cone(h);
      CHECK(c2.rays.size() == c.rays.size());
      if (c.ambient_rank > 0) CHECK(oracle::lattice_equivalent(c.rays, c2.rays));
    }
  }
}

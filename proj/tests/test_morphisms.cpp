#include <doctest.h>

#include <functional>

#include "moduli/error.hpp"
#include "moduli/morphisms.hpp"
#include "moduli/strata.hpp"

using namespace moduli;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::ParseError;
}

int max_label(const MarkedGraph& g) { return g.legs.empty() ? 0 : g.legs.rbegin()->first; }

const std::vector<Space> kSpaces{{SpaceKind::M0, 6}, {SpaceKind::FM, 4}, {SpaceKind::MULT, 4},
                                 {SpaceKind::SCALED, 3}};

}  // namespace

TEST_CASE("collapsing an allowed edge lowers codimension by one") {
  for (const Space& s : kSpaces) {
    for (const auto& g : enumerate_strata(s)) {
      for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const Color a = g.vertex(g.edges[e].u).color, b = g.vertex(g.edges[e].v).color;
        bool forbidden = (a == Color::Infinity) != (b == Color::Infinity);
        if (forbidden) {
          CHECK(code_of([&] { collapse_edge(g, e); }) == ErrorCode::ForbiddenCollapse);
          continue;
        }
        auto h = collapse_edge(g, e);
        CHECK(validate(h).ok());
        CHECK(is_stable(h));
        CHECK(stratum_codimension(h, s) == stratum_codimension(g, s) - 1);
      }
    }
  }
}

TEST_CASE("collapse errors") {
  auto g = open_stratum({SpaceKind::MULT, 2});
  CHECK(code_of([&] { collapse_edge(g, 0); }) == ErrorCode::NoSuchEdge);
  CHECK(code_of([&] { collapse_with_relations(g, 0); }) == ErrorCode::NotInfinityVertex);
  auto m0 = open_stratum({SpaceKind::M0, 4});
  CHECK(code_of([&] { collapse_with_relations(m0, 0); }) == ErrorCode::KindMismatch);
}

TEST_CASE("loops raise the genus when collapsed") {
  auto g = GraphBuilder(GraphKind::Modular).vertex(0).edge(0, 0).leg(1, 0).build();
  auto h = collapse_edge(g, 0);
  CHECK(h.vertices.size() == 1);
  CHECK(h.vertices[0].genus == 1);
  CHECK(h.edges.empty());
}

TEST_CASE("collapsing with relations merges a level of colored vertices") {
  for (int n = 2; n <= 4; ++n) {
    Space s{SpaceKind::MULT, n};
    for (const auto& p : set_partitions(iota_labels(n), 2, n)) {
      auto g = partition_divisor_type(s, p);
      auto h = collapse_with_relations(g, 0);
      CHECK(canonical_key(h) == canonical_key(open_stratum(s)));
      CHECK(stratum_codimension(h, s) == 0);
    }
  }
  // The bare infinity root of SCALED(0) collapses to the colored root.
  auto bare = GraphBuilder(GraphKind::RootedColoredTree).vertex(0, Color::Infinity).root(0).build();
  CHECK(canonical_key(collapse_with_relations(bare, 0)) == canonical_key(open_stratum({SpaceKind::SCALED, 0})));
}

TEST_CASE("cutting then gluing restores the graph") {
  for (const Space& s : kSpaces) {
    for (const auto& g : enumerate_strata(s)) {
      auto forbidden = root_path_edges(g);
      for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        int a = max_label(g) + 1, b = a + 1;
        if (is_colored_kind(g.kind) && std::count(forbidden.begin(), forbidden.end(), e)) {
          CHECK(code_of([&] { cut_edge(g, e, {a, b}); }) == ErrorCode::ForbiddenCut);
          continue;
        }
        auto cut = cut_edge(g, e, {a, b});
        CHECK(validate(cut).ok());
        CHECK(cut.edges.size() == g.edges.size() - 1);
        CHECK(canonical_key(glue_legs(cut, a, b)) == canonical_key(g));
      }
    }
  }
}

TEST_CASE("cut errors") {
  auto g = subset_divisor_type({SpaceKind::M0, 5}, {1, 2});
  CHECK(code_of([&] { cut_edge(g, 0, {1, 9}); }) == ErrorCode::DuplicateLegLabel);
  CHECK(code_of([&] { cut_edge(g, 0, {0, 9}); }) == ErrorCode::DuplicateLegLabel);
  CHECK(code_of([&] { cut_edge(g, 4, {8, 9}); }) == ErrorCode::NoSuchEdge);
}

TEST_CASE("cutting a full transversal with relations") {
  auto g = partition_divisor_type({SpaceKind::MULT, 3}, {{1, 2}, {3}});
  auto edges = root_path_edges(g);
  REQUIRE(edges.size() == 2);
  auto cut = cut_edges_with_relations(g, edges, {{4, 5}, {6, 7}});
  CHECK(validate(cut).ok());
  CHECK(cut.edges.empty());
  CHECK(code_of([&] { cut_edges_with_relations(g, {edges[0]}, {{4, 5}}); }) == ErrorCode::ForbiddenCut);
}

TEST_CASE("forgetting a tail keeps graphs valid and stable") {
  for (const Space& s : kSpaces) {
    for (const auto& g : enumerate_strata(s)) {
      for (int leg : g.leg_labels()) {
        if (leg == 0) {
          CHECK(code_of([&] { forget_tail(g, leg); }) == ErrorCode::CannotForgetRoot);
          continue;
        }
        if (s.kind == SpaceKind::M0 && g.legs.size() <= 3) continue;
        if (s.kind == SpaceKind::MULT && g.n() <= 1) continue;
        auto h = forget_tail(g, leg);
        CHECK(validate(h).ok());
        CHECK(is_stable(h));
        CHECK_FALSE(h.legs.count(leg));
        // Forgetting never raises codimension.
        Space smaller{s.kind, s.n - 1};
        CHECK(stratum_codimension(compact_labels(h), smaller) <= stratum_codimension(g, s));
      }
    }
  }
}

TEST_CASE("forgetting on explicit divisors") {
  Space s{SpaceKind::MULT, 3};
  auto d12 = subset_divisor_type(s, {1, 2});
  CHECK(canonical_key(forget_tail(d12, 3)) == canonical_key(subset_divisor_type({SpaceKind::MULT, 2}, {1, 2})));
  auto h = compact_labels(forget_tail(d12, 2));
  CHECK(canonical_key(h) == canonical_key(open_stratum({SpaceKind::MULT, 2})));
  CHECK(code_of([&] { forget_tail(d12, 7); }) == ErrorCode::NoSuchLeg);
  CHECK(code_of([&] { forget_tail(open_stratum({SpaceKind::M0, 3}), 1); }) == ErrorCode::MinimumMarkings);
  CHECK(code_of([&] { forget_tail(open_stratum({SpaceKind::MULT, 1}), 1); }) == ErrorCode::MinimumMarkings);

  // M0(5) boundary D{1,2} forgets 5 onto M0(4) boundary D{1,2}.
  auto m = subset_divisor_type({SpaceKind::M0, 5}, {1, 2});
  CHECK(canonical_key(forget_tail(m, 5)) == canonical_key(subset_divisor_type({SpaceKind::M0, 4}, {1, 2})));
}

TEST_CASE("relabel and compact labels") {
  auto g = open_stratum({SpaceKind::MULT, 3});
  auto h = relabel(g, {{1, 7}, {3, 9}});
  CHECK(h.legs.count(7));
  CHECK(h.legs.count(9));
  CHECK(h.legs.count(2));
  auto c = compact_labels(h);
  CHECK(c.leg_labels() == std::vector<int>{0, 1, 2, 3});
}

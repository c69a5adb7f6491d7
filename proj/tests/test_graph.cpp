#include <doctest.h>

#include <algorithm>
#include <random>

#include "moduli/error.hpp"
#include "moduli/graph.hpp"
#include "moduli/graph_io.hpp"
#include "moduli/oracle/iso_oracle.hpp"
#include "moduli/strata.hpp"

using namespace moduli;

namespace {

// Renames vertex ids and shuffles edge order; the result is isomorphic.
MarkedGraph scramble(const MarkedGraph& g, std::mt19937& rng) {
  std::vector<int> ids;
  for (const auto& v : g.vertices) ids.push_back(v.id);
  std::vector<int> fresh = ids;
  for (auto& x : fresh) x += 100;
  std::shuffle(fresh.begin(), fresh.end(), rng);
  std::map<int, int> m;
  for (std::size_t i = 0; i < ids.size(); ++i) m[ids[i]] = fresh[i];
  MarkedGraph h = g;
  for (auto& v : h.vertices) v.id = m[v.id];
  std::shuffle(h.vertices.begin(), h.vertices.end(), rng);
  for (auto& e : h.edges) {
    e = {m[e.u], m[e.v]};
    if (rng() % 2 && h.kind == GraphKind::Modular) std::swap(e.u, e.v);
  }
  std::shuffle(h.edges.begin(), h.edges.end(), rng);
  for (auto& [l, v] : h.legs) v = m[v];
  if (h.root) h.root = m[*h.root];
  return h;
}

MarkedGraph random_modular(std::mt19937& rng) {
  MarkedGraph g;
  g.kind = GraphKind::Modular;
  int v = 1 + rng() % 4;
  for (int i = 0; i < v; ++i) g.vertices.push_back({i, static_cast<int>(rng() % 2), Color::Zero});
  for (int i = 1; i < v; ++i) g.edges.push_back({static_cast<int>(rng() % i), i});
  int extra = rng() % 3;
  for (int i = 0; i < extra; ++i) g.edges.push_back({static_cast<int>(rng() % v), static_cast<int>(rng() % v)});
  int legs = rng() % 4;
  for (int l = 1; l <= legs; ++l) g.legs[l] = rng() % v;
  return g;
}

}  // namespace

TEST_CASE("validation rejects malformed graphs") {
  SUBCASE("duplicate vertex id") {
    auto g = GraphBuilder(GraphKind::Modular).vertex(0).vertex(0).build();
    CHECK_FALSE(validate(g).ok());
  }
  SUBCASE("dangling edge") {
    auto g = GraphBuilder(GraphKind::Modular).vertex(0).edge(0, 3).build();
    CHECK_FALSE(validate(g).ok());
  }
  SUBCASE("colored tree without root leg") {
    auto g = GraphBuilder(GraphKind::ColoredTree).vertex(0, Color::Colored).leg(1, 0).build();
    CHECK_FALSE(validate(g).ok());
  }
  SUBCASE("loop in a tree kind") {
    auto g = GraphBuilder(GraphKind::RootedForest).vertex(0).edge(0, 0).root(0).build();
    CHECK_FALSE(validate(g).ok());
  }
  SUBCASE("colored vertex in a rooted forest") {
    auto g = GraphBuilder(GraphKind::RootedForest).vertex(0, Color::Colored).root(0).build();
    CHECK_FALSE(validate(g).ok());
  }
  SUBCASE("two colored vertices on one leg path") {
    auto g = GraphBuilder(GraphKind::ColoredTree)
                 .vertex(0, Color::Colored)
                 .vertex(1, Color::Colored)
                 .edge(0, 1)
                 .leg(0, 0)
                 .legs({1, 2}, 1)
                 .build();
    CHECK_FALSE(validate(g).ok());
  }
  SUBCASE("infinity below zero") {
    auto g = GraphBuilder(GraphKind::ColoredTree)
                 .vertex(0, Color::Colored)
                 .vertex(1, Color::Zero)
                 .vertex(2, Color::Infinity)
                 .edge(0, 1)
                 .edge(1, 2)
                 .leg(0, 0)
                 .legs({1, 2}, 2)
                 .build();
    CHECK_FALSE(validate(g).ok());
  }
  SUBCASE("require_valid throws InvalidGraph") {
    auto g = GraphBuilder(GraphKind::Modular).vertex(0).edge(0, 3).build();
    try {
      require_valid(g);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidGraph);
    }
  }
}

TEST_CASE("stability thresholds") {
  auto m0 = GraphBuilder(GraphKind::Modular).vertex(0).legs({1, 2}, 0).build();
  CHECK_FALSE(is_stable(m0));
  m0.legs[3] = 0;
  CHECK(is_stable(m0));
  auto genus_one = GraphBuilder(GraphKind::Modular).vertex(0, Color::Zero, 1).leg(1, 0).build();
  CHECK(is_stable(genus_one));
  auto colored = GraphBuilder(GraphKind::ColoredTree).vertex(0, Color::Colored).leg(0, 0).leg(1, 0).build();
  CHECK(is_stable(colored));
  auto zero_bubble = GraphBuilder(GraphKind::ColoredTree)
                         .vertex(0, Color::Colored)
                         .vertex(1)
                         .edge(0, 1)
                         .leg(0, 0)
                         .leg(1, 1)
                         .build();
  CHECK_FALSE(is_stable(zero_bubble));
}

TEST_CASE("canonical keys are invariant under renaming") {
  std::mt19937 rng(11);
  for (Space s : {Space{SpaceKind::M0, 6}, Space{SpaceKind::FM, 4}, Space{SpaceKind::MULT, 4},
                  Space{SpaceKind::SCALED, 3}}) {
    for (const auto& g : enumerate_strata(s)) {
      auto h = scramble(g, rng);
      CHECK(canonical_key(h) == canonical_key(g));
      CHECK(is_isomorphic(g, h));
    }
  }
}

TEST_CASE("canonical key equality matches brute-force isomorphism") {
  std::mt19937 rng(5);
  for (Space s : {Space{SpaceKind::M0, 5}, Space{SpaceKind::FM, 4}, Space{SpaceKind::MULT, 3},
                  Space{SpaceKind::SCALED, 3}}) {
    auto strata = enumerate_strata(s);
    // Scrambled copies plus the originals: keys coincide exactly for isomorphic pairs.
    std::vector<MarkedGraph> pool;
    for (const auto& g : strata) {
      pool.push_back(g);
      if (g.vertices.size() <= 8) pool.push_back(scramble(g, rng));
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        if (pool[i].vertices.size() > 8 || pool[j].vertices.size() > 8) continue;
        bool same_key = canonical_key(pool[i]) == canonical_key(pool[j]);
        CHECK(same_key == oracle::brute_isomorphic(pool[i], pool[j]));
      }
    }
  }
}

TEST_CASE("modular graphs with loops, multi-edges and genus") {
  std::mt19937 rng(17);
  std::vector<MarkedGraph> pool;
  for (int i = 0; i < 60; ++i) {
    auto g = random_modular(rng);
    pool.push_back(g);
    pool.push_back(scramble(g, rng));
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i; j < pool.size(); ++j) {
      CHECK((canonical_key(pool[i]) == canonical_key(pool[j])) == oracle::brute_isomorphic(pool[i], pool[j]));
    }
  }
}

TEST_CASE("keys distinguish leg labels and colors") {
  auto a = GraphBuilder(GraphKind::ColoredTree)
               .vertex(0, Color::Colored)
               .vertex(1)
               .edge(0, 1)
               .leg(0, 0)
               .leg(3, 0)
               .legs({1, 2}, 1)
               .build();
  auto b = GraphBuilder(GraphKind::ColoredTree)
               .vertex(0, Color::Colored)
               .vertex(1)
               .edge(0, 1)
               .leg(0, 0)
               .leg(1, 0)
               .legs({2, 3}, 1)
               .build();
  CHECK(canonical_key(a) != canonical_key(b));
}

TEST_CASE("graph JSON round-trips") {
  for (Space s : {Space{SpaceKind::M0, 5}, Space{SpaceKind::FM, 3}, Space{SpaceKind::MULT, 3},
                  Space{SpaceKind::SCALED, 3}}) {
    for (const auto& g : enumerate_strata(s)) {
      auto j = to_json(g);
      auto back = graph_from_json(nlohmann::json::parse(j.dump()));
      CHECK(back == g);
    }
  }
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"kind": "nonsense"})")), Error);
}

TEST_CASE("DOT output shades vertices by color") {
  auto g = partition_divisor_type({SpaceKind::MULT, 2}, {{1}, {2}});
  std::string dot = to_dot(g);
  CHECK(dot.find("#303030") != std::string::npos);
  CHECK(dot.find("#a0a0a0") != std::string::npos);
}

TEST_CASE("orientation and components") {
  auto g = partition_divisor_type({SpaceKind::SCALED, 3}, {{1, 2}, {3}});
  auto o = orient(g, 0);
  CHECK(o.children[0].size() == 2);
  CHECK(o.path_to_root(1) == std::vector<int>{1, 0});
  CHECK(connected_components(g).size() == 1);
  auto n = normalize_vertex_ids(g);
  CHECK(canonical_key(n) == canonical_key(g));
}

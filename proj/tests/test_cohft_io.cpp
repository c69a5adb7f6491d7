#include <doctest.h>

#include "moduli/cohft_io.hpp"
#include "moduli/error.hpp"

using namespace moduli;
using nlohmann::json;

TEST_CASE("scalar formats") {
  SeriesCaps caps{0, 2, 2, 4};
  CHECK(scalar_from_json("3/2", caps) == Series::constant(caps, Rational(3, 2)));
  Series s = scalar_from_json(json::parse(R"([["1", "1/2"], ["-2", "1"]])"), caps);
  Series want = Series::q_term(caps, 1, 1) + Series::q_term(caps, 2, -2);
  CHECK(s == want);
  Series h = scalar_from_json(json::parse(R"([{"c": "5", "q": "0", "hbar": -1}])"), caps);
  CHECK(h == Series::q_term(caps, 0, 5, -1));
  CHECK_THROWS_AS(scalar_from_json(json::parse(R"([["1", "1/3"]])"), caps), Error);
  CHECK_THROWS_AS(scalar_from_json(json::parse("{}"), caps), Error);
}

TEST_CASE("series JSON round-trips") {
  SeriesCaps caps{2, 2, 3, 3};
  Series s = Series::variable(caps, 0, Rational(2, 3)) * Series::variable(caps, 1) + Series::q_term(caps, 3, -7, 2);
  CHECK(series_from_json(json::parse(to_json(s).dump()), caps) == s);
}

TEST_CASE("algebra, morphism and trace JSON round-trip") {
  SeriesCaps caps{0, 1, 3, 2};
  auto alg = random_algebra(5, 3, 3, caps);
  auto alg2 = algebra_from_json(json::parse(to_json(alg).dump()), caps);
  CHECK(alg2.basis == alg.basis);
  CHECK(to_json(alg2) == to_json(alg));

  auto phi = random_flat_morphism(6, 2, 3, 3, caps);
  CHECK(to_json(morphism_from_json(to_json(phi), caps)) == to_json(phi));

  auto tau = random_trace(7, 2, 4, caps);
  auto tau2 = trace_from_json(json::parse(to_json(tau).dump()), caps);
  CHECK(tau2.pp_max_arity == tau.pp_max_arity);
  CHECK(to_json(tau2) == to_json(tau));
}

TEST_CASE("problem files") {
  auto j = json::parse(R"({
    "ell": 1, "order": 0, "q_cap": "2",
    "V": {"basis": ["1", "xi"], "max_arity": 2,
          "mu": {"2": [{"in": [0, 0], "out": {"0": "1"}},
                       {"in": [0, 1], "out": {"1": "1"}},
                       {"in": [1, 1], "out": {"0": [["1", "1"]]}}]}},
    "generator": 1
  })");
  CohFTSpec spec = spec_from_json(j);
  REQUIRE(spec.V);
  CHECK(spec.caps.q_cap == 2);
  CHECK(check_associativity(*spec.V, spec.caps).ok);
  auto sol = solve_qde(*spec.V, spec.generator, spec.caps);
  CHECK(sol.residual.ok);
  // Same data as the built-in P^1.
  auto builtin = builtin_spec("proj:2", 0, 2);
  CHECK(to_json(*builtin.V) == to_json(*spec.V));
  CHECK_THROWS_AS(builtin_spec("torus:2", 0, 2), Error);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"V": {"basis": 3}})")), Error);
}

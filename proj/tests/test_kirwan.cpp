#include <doctest.h>

#include <random>

#include <functional>

#include "moduli/error.hpp"
#include "moduli/kirwan.hpp"

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

TorusAction ones(int k) { return rank_one_action(std::vector<long>(k, 1), 1); }

}  // namespace

TEST_CASE("semistability as cone membership") {
  auto p = ones(3);
  CHECK(is_semistable({0}, p));
  CHECK_FALSE(is_semistable({}, p));
  auto tear = rank_one_action({1, 2}, 1);
  CHECK(is_semistable({1}, tear));
  auto zero = rank_one_action({1, 2}, 0);
  CHECK(is_semistable({}, zero));
}

TEST_CASE("stable equals semistable") {
  CHECK(check_stable_equals_semistable(ones(4)));
  CHECK(check_stable_equals_semistable(rank_one_action({1, 2}, 1)));
  CHECK_FALSE(check_stable_equals_semistable(rank_one_action({1, 2}, 0)));
  CHECK(code_of([] { rank_one_action({1, -1}, 0); }) == ErrorCode::InvalidAction);
  // P^1 x P^1 as a rank-two quotient.
  auto pp = parse_action("1:0,1:0,0:1,0:1", "1:1");
  CHECK(pp.rank == 2);
  CHECK(check_stable_equals_semistable(pp));
  // theta on a wall: a single weight generates the ray through theta.
  CHECK_FALSE(check_stable_equals_semistable(parse_action("1:0,1:0,0:1,1:1", "1:1")));
}

TEST_CASE("map space dimension") {
  CHECK(map_space_dimension(ones(4), {Rational(1)}) == 8);
  CHECK(map_space_dimension(rank_one_action({1, 2}, 1), {Rational(1, 2)}) == 3);
  CHECK(map_space_dimension(ones(3), {Rational(0)}) == 3);
  CHECK(map_space_dimension(ones(3), {Rational(-1)}) == 0);
}

TEST_CASE("sectors") {
  auto tear = rank_one_action({1, 2}, 1);
  SectorElement half = sector(tear, {Rational(1, 2)});
  CHECK(half.exp_d == RatVector{Rational(1, 2)});
  CHECK(half.support == std::vector<int>{1});
  CHECK(half.stabilizer_order == 2);
  CHECK(half.label() == "1_Z2");
  SectorElement whole = sector(tear, {Rational(1)});
  CHECK(whole.support == std::vector<int>{0, 1});
  CHECK(whole.stabilizer_order == 1);
  CHECK_FALSE(whole.twisted());
  CHECK(code_of([] { sector(rank_one_action({2, 3}, 1), {Rational(1, 6)}); }) == ErrorCode::EmptySector);
  // Integer shifts leave the sector unchanged.
  for (int m = 1; m <= 5; ++m) {
    Rational d(m, 6);
    auto act = rank_one_action({2, 3, 6}, 1);
    SectorElement a = sector(act, {d}), b = sector(act, {d + 1});
    CHECK(a.exp_d == b.exp_d);
    CHECK(a.support == b.support);
    CHECK(a.stabilizer_order == b.stabilizer_order);
  }
}

TEST_CASE("projective space relations") {
  for (int k = 2; k <= 6; ++k) {
    auto rel = kirwan_count(ones(k), {Rational(1)});
    CHECK(rel.relation_string() == "xi^" + std::to_string(k) + " = q");
    CHECK(rel.kappa_coefficient() == 1);
    Presentation p = qh_presentation(ones(k), 2);
    CHECK(p.presentation == "xi^" + std::to_string(k) + " = q");
    CHECK(p.relations.size() == 1);  // one sector class
  }
}

TEST_CASE("teardrop relations") {
  auto tear = rank_one_action({1, 2}, 1);
  auto whole = kirwan_count(tear, {Rational(1)});
  CHECK(whole.c == std::vector<Integer>{1, 2});
  CHECK(whole.relation_string() == "4*xi^3 = q");
  CHECK(whole.kappa_string() == "D0kappa(xi^3) = q/4");
  auto half = kirwan_count(tear, {Rational(1, 2)});
  CHECK(half.c == std::vector<Integer>{1, 1});
  CHECK(half.relation_string() == "2*xi^2 = q^(1/2)*1_Z2");
  CHECK(half.kappa_string() == "D0kappa(xi^2) = q^(1/2)*1_Z2/2");
  Presentation p = qh_presentation(tear, 2);
  CHECK(p.ell == 2);
  REQUIRE(p.relations.size() == 2);
  CHECK(p.relations[0].d == RatVector{Rational(1, 2)});
  CHECK(p.presentation == "4*xi^3 = q");
}

TEST_CASE("weights (1,1,2)") {
  auto act = rank_one_action({1, 1, 2}, 1);
  auto whole = kirwan_count(act, {Rational(1)});
  CHECK(whole.c == std::vector<Integer>{1, 1, 2});
  CHECK(whole.relation_string() == "4*xi^4 = q");
  auto half = kirwan_count(act, {Rational(1, 2)});
  CHECK(half.c == std::vector<Integer>{1, 1, 1});
  CHECK(half.relation_string() == "2*xi^3 = q^(1/2)*1_Z2");
}

TEST_CASE("constraint counts agree with an explicit coefficient listing") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    int k = 1 + rng() % 4;
    std::vector<long> w;
    Integer ell = 1;
    for (int j = 0; j < k; ++j) {
      w.push_back(1 + rng() % 4);
      ell = lcm(ell, Integer(w.back()));
    }
    auto act = rank_one_action(w, 1);
    Rational d(Integer(1 + rng() % 8), ell);
    d.canonicalize();
    KirwanRelation rel;
    try {
      rel = kirwan_count(act, {d});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptySector);
      continue;
    }
    // List the coefficients a_{j,m}, m = 0..floor(p_j): those with m < p_j are
    // killed by the vanishing conditions, a coefficient at m = p_j is the
    // leading term at infinity.
    long vanishing_total = 0, free = 0, listed = 0;
    for (int j = 0; j < k; ++j) {
      Rational p = Rational(w[j]) * d;
      long vanishing = 0;
      for (long m = 0; Rational(m) <= p; ++m) {
        ++listed;
        if (Rational(m) < p) ++vanishing;
        else ++free;
      }
      CHECK(rel.c[j] == vanishing);
      vanishing_total += vanishing;
    }
    CHECK(rel.xi_power == vanishing_total);
    CHECK(rel.free_coefficients == free);
    CHECK(rel.map_dimension == listed);
    CHECK(rel.dimension_consistent());
    CHECK(static_cast<long>(rel.sector.support.size()) == free);
  }
}

TEST_CASE("scaling all weights") {
  auto a = kirwan_count(ones(2), {Rational(1)});
  auto b = kirwan_count(rank_one_action({2, 2}, 1), {Rational(1, 2)});
  CHECK(a.c == b.c);
  CHECK(b.scalar == a.scalar * 4);  // 2^{sum c}
  CHECK(b.sector.stabilizer_order == 2 * a.sector.stabilizer_order);
}

TEST_CASE("kirwan errors") {
  CHECK(code_of([] { kirwan_count(parse_action("1:0,0:1", "1:1"), {Rational(1), Rational(1)}); }) ==
        ErrorCode::RankUnsupported);
  CHECK(code_of([] { kirwan_count(rank_one_action({1, 1}, 0), {Rational(1)}); }) == ErrorCode::UnstableSector);
  auto negative = kirwan_count(ones(2), {Rational(-1)});
  CHECK(negative.count == 0);
  CHECK(negative.reason.find("NonPositivePairing") == 0);
  CHECK(code_of([] { parse_action("1,x", "1"); }) == ErrorCode::ParseError);
  CHECK(q_power_string(Rational(3, 2)) == "q^(3/2)");
  CHECK(q_power_string(Rational(2)) == "q^2");
}

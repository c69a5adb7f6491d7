#include <doctest.h>

#include <cstdlib>
#include <set>

#include "moduli/error.hpp"
#include "moduli/oracle/strata_oracle.hpp"
#include "moduli/strata.hpp"

using namespace moduli;

namespace {

std::set<std::string> keys(const std::vector<MarkedGraph>& gs) {
  std::set<std::string> out;
  for (const auto& g : gs) out.insert(canonical_key(g));
  return out;
}

const SpaceKind kKinds[] = {SpaceKind::M0, SpaceKind::FM, SpaceKind::MULT, SpaceKind::SCALED};

bool exists(const Space& s) {
  try {
    check_space(s, 7);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

TEST_CASE("rooted tree generator counts unlabeled rooted trees") {
  // Cayley's rooted tree counts, OEIS A000081.
  const std::size_t expected[] = {1, 1, 2, 4, 9, 20, 48, 115};
  for (int v = 1; v <= 8; ++v) CHECK(oracle::rooted_trees(v).size() == expected[v - 1]);
}

TEST_CASE("enumeration agrees with the brute-force oracle") {
  for (auto kind : kKinds) {
    for (int n = 0; n <= 4; ++n) {
      Space s{kind, n};
      if (!exists(s)) continue;
      auto strata = enumerate_strata(s);
      CHECK_MESSAGE(keys(strata) == oracle::brute_force_strata(s), to_string(s));
      CHECK(keys(strata).size() == strata.size());  // one per isomorphism class
    }
  }
}

TEST_CASE("boundary strata of M0 count Schroeder's fourth problem") {
  // Total number of bracketings, OEIS A000311: 1, 4, 26, 236.
  CHECK(enumerate_strata({SpaceKind::M0, 3}).size() == 1);
  CHECK(enumerate_strata({SpaceKind::M0, 4}).size() == 4);
  CHECK(enumerate_strata({SpaceKind::M0, 5}).size() == 26);
  CHECK(enumerate_strata({SpaceKind::M0, 6}).size() == 236);
}

TEST_CASE("parallel and serial enumeration are identical") {
  for (auto kind : kKinds) {
    for (int n = 0; n <= 5; ++n) {
      Space s{kind, n};
      if (!exists(s)) continue;
      CHECK(enumerate_strata(s) == enumerate_strata_serial(s));
    }
  }
}

TEST_CASE("strata are valid, stable, sorted and dimension-consistent") {
  for (auto kind : kKinds) {
    for (int n = 0; n <= 5; ++n) {
      Space s{kind, n};
      if (!exists(s)) continue;
      auto strata = enumerate_strata(s);
      std::string prev;
      int open = 0;
      for (const auto& g : strata) {
        CHECK(validate(g).ok());
        CHECK(is_stable(g));
        std::string k = canonical_key(g);
        CHECK(prev < k);
        prev = k;
        int dim = stratum_dimension(g, s), codim = stratum_codimension(g, s);
        CHECK(dim >= 0);
        CHECK(codim >= 0);
        CHECK(dim + codim == ambient_dimension(s));
        open += codim == 0 ? 1 : 0;
      }
      // The open stratum is the unique one of codimension 0, except for the
      // free-scaling kind where the infinite-scaling root also has codim 0.
      if (kind != SpaceKind::SCALED) CHECK(open == 1);
    }
  }
}

TEST_CASE("codimension-one strata are exactly the boundary divisors") {
  for (auto kind : {SpaceKind::M0, SpaceKind::MULT, SpaceKind::SCALED}) {
    for (int n = 1; n <= 5; ++n) {
      Space s{kind, n};
      if (!exists(s)) continue;
      std::set<std::string> codim_one, divisors;
      for (const auto& g : enumerate_strata(s)) {
        if (stratum_codimension(g, s) == 1) codim_one.insert(canonical_key(g));
      }
      for (const auto& d : boundary_divisors(s)) {
        CHECK(divisor_codimension(d) == 1);
        if (d.shape != DivisorShape::RhoSlice) divisors.insert(canonical_key(d.generic_type));
      }
      CHECK_MESSAGE(codim_one == divisors, to_string(s));
    }
  }
}

TEST_CASE("divisor counts") {
  for (int n = 1; n <= 6; ++n) {
    long subsets = (1L << n) - n - 1;
    long bell = static_cast<long>(bell_number(n));
    CHECK(static_cast<long>(boundary_divisors({SpaceKind::MULT, n}).size()) == subsets + bell - 1);
    CHECK(static_cast<long>(boundary_divisors({SpaceKind::SCALED, n}).size()) == subsets + bell + 1);
  }
  for (int n = 4; n <= 7; ++n) {
    long expected = (1L << (n - 1)) - n - 1;  // splittings with both sides of size >= 2
    CHECK(static_cast<long>(boundary_divisors({SpaceKind::M0, n}).size()) == expected);
  }
  auto d = boundary_divisors({SpaceKind::MULT, 2});
  REQUIRE(d.size() == 2);
  CHECK(d[0].name() == "D{1,2}");
  CHECK(d[1].name() == "D[{1},{2}]");
}

TEST_CASE("closure poset covers drop codimension by one") {
  for (Space s : {Space{SpaceKind::MULT, 3}, Space{SpaceKind::SCALED, 3}, Space{SpaceKind::M0, 5}}) {
    ClosurePoset p = closure_poset(s);
    CHECK(p.strata.size() == enumerate_strata(s).size());
    std::set<int> has_coarser;
    for (auto [fine, coarse] : p.covers) {
      CHECK(p.codimension[fine] == p.codimension[coarse] + 1);
      has_coarser.insert(fine);
    }
    for (std::size_t i = 0; i < p.strata.size(); ++i) {
      if (p.codimension[i] > 0) CHECK(has_coarser.count(static_cast<int>(i)));
    }
  }
}

TEST_CASE("enumeration guard and minimum sizes") {
  CHECK_THROWS_AS(enumerate_strata({SpaceKind::M0, 2}), Error);
  setenv("MODULI_MAX_N", "3", 1);
  CHECK(max_enumeration_n() == 3);
  try {
    enumerate_strata({SpaceKind::MULT, 4});
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
  unsetenv("MODULI_MAX_N");
  CHECK(max_enumeration_n() == 7);
  CHECK(parse_space_kind("scaled") == SpaceKind::SCALED);
  CHECK(to_string(Space{SpaceKind::MULT, 3}) == "MULT(3)");
}

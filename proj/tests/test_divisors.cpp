#include <doctest.h>

#include <set>

#include "moduli/divisors.hpp"

using namespace moduli;

TEST_CASE("multiplihedron pullback families") {
  for (int n = 2; n <= 6; ++n) {
    PullbackReport r = verify_multiplihedron_pullback(n);
    CHECK(r.ok());
    // Partitions separating 1 and 2; subsets containing {1, 2}.
    CHECK(r.lhs.size() == bell_number(n) - bell_number(n - 1));
    CHECK(r.rhs.size() == (1u << (n - 2)));
  }
  PullbackReport r3 = verify_multiplihedron_pullback(3);
  CHECK(std::set<std::string>(r3.lhs.begin(), r3.lhs.end()) ==
        std::set<std::string>{"D[{1},{2,3}]", "D[{1,3},{2}]", "D[{1},{2},{3}]"});
  CHECK(r3.rhs == std::vector<std::string>{"D{1,2}", "D{1,2,3}"});
}

TEST_CASE("forgetting classifies each divisor once") {
  for (int n = 3; n <= 5; ++n) {
    Space s{SpaceKind::MULT, n};
    for (const auto& d : boundary_divisors(s)) {
      auto c = classify_under_forgetting(d, {1, 2});
      CHECK(c.dominant != c.target.has_value());
      if (c.target) CHECK(c.multiplicity == 1);
    }
  }
  auto open = BoundaryDivisor{{SpaceKind::MULT, 3}, DivisorShape::Subset, {2, 3}, {},
                              subset_divisor_type({SpaceKind::MULT, 3}, {2, 3})};
  CHECK(classify_under_forgetting(open, {1, 2}).dominant);
}

TEST_CASE("M0(4) boundary points pull back to refining splittings") {
  for (int n = 4; n <= 7; ++n) {
    for (std::string split : {"12|34", "13|24", "14|23"}) {
      M04Report r = verify_m04_pullback(n, split);
      CHECK(r.ok());
      CHECK(r.preimage.size() == (1u << (n - 4)));
    }
  }
  CHECK(verify_m04_pullback(4, "12|34").preimage == std::vector<std::string>{"D{1,2}"});
}

TEST_CASE("scaling slice divisors") {
  for (int n = 1; n <= 5; ++n) {
    RhoReport r = rho_divisor_enumeration(n);
    CHECK(r.ok());
    CHECK(r.rhs.size() == bell_number(n));
    for (int d : r.dimensions) CHECK(d == n);
    for (int c : r.codimensions) CHECK(c == 1);
    CHECK(r.slice_dimension == n);
  }
}

#include <doctest.h>

#include <algorithm>
#include <set>

#include "moduli/error.hpp"
#include "moduli/partitions.hpp"
#include "moduli/rational.hpp"

using namespace moduli;

TEST_CASE("rationals parse and print as p/q") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(parse_rational(" -2 / 6 ")) == "-1/3");
  CHECK(to_string(parse_rational("+7")) == "7");
  CHECK(to_string(parse_rational("0/5")) == "0");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("1/-2"), Error);
  CHECK_THROWS_AS(parse_rational("1.5"), Error);
  CHECK_THROWS_AS(parse_rational(""), Error);
}

TEST_CASE("floor, ceil and fractional part agree on negative values") {
  CHECK(floor(Rational(-1, 2)) == -1);
  CHECK(ceil(Rational(-1, 2)) == 0);
  CHECK(floor(Rational(7, 3)) == 2);
  CHECK(ceil(Rational(7, 3)) == 3);
  CHECK(frac(Rational(-1, 3)) == Rational(2, 3));
  CHECK(is_integer(Rational(4, 2)));
  for (int p = -12; p <= 12; ++p) {
    for (int q = 1; q <= 5; ++q) {
      Rational r(p, q);
      r.canonicalize();
      CHECK(Rational(floor(r)) <= r);
      CHECK(r < Rational(floor(r)) + 1);
      CHECK(Rational(ceil(r)) >= r);
      CHECK(frac(r) >= 0);
      CHECK(frac(r) < 1);
    }
  }
  CHECK(lcm(Integer(4), Integer(6)) == 12);
  CHECK(gcd(Integer(-4), Integer(6)) == 2);
}

TEST_CASE("set partitions are counted by the Bell numbers") {
  // Independent oracle: Stirling numbers of the second kind by recurrence.
  for (int n = 0; n <= 8; ++n) {
    std::vector<std::vector<std::uint64_t>> S(n + 1, std::vector<std::uint64_t>(n + 1, 0));
    S[0][0] = 1;
    for (int i = 1; i <= n; ++i)
      for (int k = 1; k <= i; ++k) S[i][k] = k * S[i - 1][k] + S[i - 1][k - 1];
    std::uint64_t total = 0;
    for (int k = 0; k <= n; ++k) total += S[n][k];
    CHECK(bell_number(n) == total);
    auto parts = set_partitions(iota_labels(n));
    CHECK(parts.size() == total);
    for (int k = 1; k <= n; ++k) CHECK(set_partitions(iota_labels(n), k, k).size() == S[n][k]);
    // Distinct, and each is a partition of 1..n.
    std::set<SetPartition> distinct(parts.begin(), parts.end());
    CHECK(distinct.size() == parts.size());
    for (const auto& p : parts) {
      std::vector<int> flat;
      for (const auto& b : p) flat.insert(flat.end(), b.begin(), b.end());
      std::sort(flat.begin(), flat.end());
      CHECK(flat == iota_labels(n));
    }
  }
}

TEST_CASE("subsets with a minimum size") {
  auto s = subsets({3, 1, 2}, 2);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == std::vector<int>{1, 2});
  CHECK(s[3] == std::vector<int>{1, 2, 3});
  CHECK(subsets(iota_labels(6), 0).size() == 64);
  CHECK(factorial(10) == 3628800u);
}

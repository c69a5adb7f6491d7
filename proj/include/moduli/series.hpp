#pragma once

// Truncated multivariate power series with exact rational coefficients.
//
// A monomial is t_1^a_1 ... t_m^a_m q^(e/ell) hbar^h (log q)^k. Terms are kept
// only while the total t-degree is at most `order_cap` and e is at most
// `q_cap` (both counted in the stored units); hbar and log q are unbounded.

#include <map>
#include <string>
#include <vector>

#include "moduli/rational.hpp"

namespace moduli {

struct SeriesCaps {
  int vars = 0;       // number of t-variables
  int ell = 1;        // q exponents live in (1/ell) Z
  int order_cap = 0;  // maximal total t-degree
  int q_cap = 0;      // maximal q exponent, in units of 1/ell

  SeriesCaps scalar() const { return {0, ell, order_cap, q_cap}; }
  SeriesCaps with_vars(int m) const { return {m, ell, order_cap, q_cap}; }
  friend bool operator==(const SeriesCaps&, const SeriesCaps&) = default;
};

/// Layout: t_1..t_m, then q (units of 1/ell), hbar, log q.
using Exponent = std::vector<int>;

class Series {
 public:
  Series() = default;
  explicit Series(const SeriesCaps& caps) : caps_(caps) {}

  static Series constant(const SeriesCaps& caps, const Rational& c);
  static Series variable(const SeriesCaps& caps, int index, const Rational& c = 1);
  /// c * q^(units/ell) * hbar^h
  static Series q_term(const SeriesCaps& caps, int units, const Rational& c = 1, int hbar = 0);

  const SeriesCaps& caps() const { return caps_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const Exponent& e) const;
  /// Adds c * monomial(e), dropping it if outside the caps.
  void add_term(const Exponent& e, const Rational& c);

  int t_degree(const Exponent& e) const;
  bool within_caps(const Exponent& e) const;

  Series operator-() const;
  Series& operator+=(const Series& other);
  Series& operator-=(const Series& other);
  Series& operator*=(const Rational& c);

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, const Rational& c) { return a *= c; }
  friend Series operator*(const Rational& c, Series a) { return a *= c; }
  /// Parallel kernel for large operands; identical result to multiply_serial.
  friend Series operator*(const Series& a, const Series& b);
  friend bool operator==(const Series& a, const Series& b) { return a.terms_ == b.terms_; }

  /// Partial derivative in t_index.
  Series derivative(int index) const;
  /// q d/dq, acting on q^a (log q)^k as a q^a (log q)^k + k q^a (log q)^(k-1).
  Series q_derivative() const;
  /// Multiplies by hbar^k.
  Series hbar_shift(int k) const;
  /// Part of t-degree exactly `d`.
  Series homogeneous_part(int d) const;
  /// Re-expresses the series with different caps; scalars (no t-variables)
  /// may be lifted into any number of variables.
  Series recast(const SeriesCaps& caps) const;
  /// Replaces t_i by values[i]; every value must have zero t-constant term.
  Series substitute(const std::vector<Series>& values) const;

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  SeriesCaps caps_;
  std::map<Exponent, Rational> terms_;
};

Series multiply_serial(const Series& a, const Series& b);

/// Monomial exponent builder for a given layout.
Exponent make_exponent(const SeriesCaps& caps, const std::vector<int>& t = {}, int q = 0,
                       int hbar = 0, int logq = 0);

/// Operands smaller than this (product of term counts) are multiplied serially.
inline constexpr std::size_t kParallelProductThreshold = 4096;

}  // namespace moduli

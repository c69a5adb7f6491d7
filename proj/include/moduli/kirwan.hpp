#pragma once

// Toric affine gauged maps: degree-restricted polynomial map spaces,
// semistability at infinity, inertia sectors and the resulting quantum
// cohomology relations for torus quotients of affine space.

#include <string>
#include <vector>

#include "moduli/lattice.hpp"
#include "moduli/rational.hpp"

namespace moduli {

/// A torus of rank s acting on C^k with integer weights mu_1..mu_k and
/// stability character theta.
struct TorusAction {
  int rank = 1;
  std::vector<IntVector> weights;
  RatVector theta;

  int k() const { return static_cast<int>(weights.size()); }
};

/// Throws InvalidAction on shape errors or weights outside every open half-space.
void validate_action(const TorusAction& action);

/// Rank-one convenience constructor.
TorusAction rank_one_action(const std::vector<long>& weights, const Rational& theta);

/// Parses "1,2" (rank one) or "1:0,0:1" (one weight per comma, coordinates split by ':').
TorusAction parse_action(const std::string& weights, const std::string& theta);

using Degree = RatVector;

/// (d, mu_j) for every j.
RatVector pairings(const TorusAction& action, const Degree& d);

/// Indices are 0-based here; text output shows them 1-based.
bool is_semistable(const std::vector<int>& support, const TorusAction& action);

bool check_stable_equals_semistable(const TorusAction& action);

Integer map_space_dimension(const TorusAction& action, const Degree& d);

struct SectorElement {
  RatVector exp_d;             // d mod Z^s, entries in [0, 1)
  std::vector<int> support;    // j with (d, mu_j) integral
  Integer stabilizer_order;    // |Z^s / <mu_j : j in support, (d, mu_j) >= 0>|

  bool twisted() const;
  /// "1" for the untwisted sector, "1_Z2" for exp(1/2), "1_Z3^2" for exp(2/3).
  std::string label() const;
};

SectorElement sector(const TorusAction& action, const Degree& d);

struct KirwanRelation {
  Degree d;
  std::vector<Integer> c;     // vanishing orders at the marking
  Integer scalar;             // prod_j mu_j^{c_j}
  Integer xi_power;           // sum_j c_j
  SectorElement sector;
  Rational count;             // 1 for an accepted count, 0 otherwise
  std::string reason;         // why count is 0, empty otherwise
  Integer map_dimension;
  Integer free_coefficients;  // integral components left free at infinity

  /// "4*xi^3 = q" or "2*xi^2 = q^(1/2)*1_Z2".
  std::string relation_string() const;
  /// Value of D0 kappa on xi^{xi_power}: count * q^d * [sector] / scalar.
  std::string kappa_string() const;
  /// Coefficient count / scalar.
  Rational kappa_coefficient() const;
  bool dimension_consistent() const;
};

KirwanRelation kirwan_count(const TorusAction& action, const Degree& d);

struct Presentation {
  std::vector<KirwanRelation> relations;
  std::vector<std::string> skipped;  // degrees whose sector is empty, with the reason
  std::string presentation;          // the untwisted integer-degree relation
  int ell = 1;
};

/// Minimal positive degree d in (1/ell)Z, ell = lcm |mu_j|, for each sector
/// class up to `degree_bound`.
Presentation qh_presentation(const TorusAction& action, const Rational& degree_bound);

/// "q", "q^2", "q^(1/2)"; "1" for d = 0.
std::string q_power_string(const Rational& d);

}  // namespace moduli

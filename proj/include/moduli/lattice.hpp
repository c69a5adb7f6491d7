#pragma once

// Exact integer and rational linear algebra: Smith normal form, rank,
// determinants and a phase-one simplex for cone membership.

#include <optional>
#include <vector>

#include "moduli/rational.hpp"

namespace moduli {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;  // row-major
using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... nonnegative.
struct SmithForm {
  IntMatrix U;
  IntMatrix V;
  IntMatrix D;
  IntVector diagonal;  // nonzero invariant factors
  int rank = 0;
};

SmithForm smith_normal_form(const IntMatrix& a, std::size_t cols);

IntMatrix identity_matrix(std::size_t n);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
int matrix_rank(const IntMatrix& a, std::size_t cols);
Integer determinant(const IntMatrix& square);

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
IntVector primitive(const IntVector& v);

/// Some x >= 0 with A x = b, or nullopt. Exact phase-one simplex with
/// Bland's rule, so it always terminates.
std::optional<RatVector> nonnegative_solution(const RatMatrix& a, const RatVector& b);

/// True iff `target` is a nonnegative rational combination of `generators`.
bool in_rational_cone(const std::vector<RatVector>& generators, const RatVector& target);

/// Some eta with <eta, v> >= 1 for every v in `vectors` (open half-space witness).
std::optional<RatVector> half_space_witness(const std::vector<RatVector>& vectors, std::size_t dim);

RatVector to_rational(const IntVector& v);

}  // namespace moduli

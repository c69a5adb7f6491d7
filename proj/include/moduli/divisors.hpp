#pragma once

// Boundary divisors under forgetful maps, and the combinatorial content of
// the divisor-class relations between them.

#include <optional>
#include <string>
#include <vector>

#include "moduli/strata.hpp"

namespace moduli {

struct ForgetClassification {
  bool dominant = false;
  std::optional<BoundaryDivisor> target;  // set when the image is a boundary divisor
  int multiplicity = 0;                   // 1 for boundary targets
  MarkedGraph image;                      // image type with compacted labels
};

/// Forgets every marking outside `keep` (2 markings for MULT, 4 for M0) and
/// classifies the image of the divisor's generic type.
ForgetClassification classify_under_forgetting(const BoundaryDivisor& divisor,
                                               const std::vector<int>& keep);

struct PullbackReport {
  int n = 0;
  std::vector<std::string> lhs;       // divisors landing on D[{1},{2}]
  std::vector<std::string> rhs;       // divisors landing on D{1,2}
  std::vector<std::string> dominant;  // divisors surjecting onto MULT(2)
  bool lhs_matches = false;   // exactly the partitions separating 1 and 2
  bool rhs_matches = false;   // exactly the subsets containing {1,2}
  bool multiplicities_one = false;

  bool ok() const { return lhs_matches && rhs_matches && multiplicities_one; }
};

PullbackReport verify_multiplihedron_pullback(int n);

struct M04Report {
  int n = 0;
  std::string split;                   // "12|34", "13|24" or "14|23"
  std::vector<std::string> preimage;   // divisors landing on the split point
  std::vector<std::string> expected;   // splittings refining the split
  int total_divisors = 0;

  bool ok() const { return preimage == expected; }
};

/// Divisors are named by the side of the splitting that does not contain 4.
M04Report verify_m04_pullback(int n, const std::string& split);

struct RhoReport {
  int n = 0;
  std::vector<std::string> rhs;  // partition divisors of SCALED(n), multiplicity 1 each
  std::vector<int> dimensions;
  std::vector<int> codimensions;
  int slice_dimension = 0;       // dimension of the fixed-scaling slice
  std::uint64_t bell = 0;

  bool ok() const;
};

RhoReport rho_divisor_enumeration(int n);

}  // namespace moduli

#pragma once

// Strata of the four genus-zero moduli spaces: enumeration, dimension
// bookkeeping, boundary divisors and the closure order.

#include <string>
#include <utility>
#include <vector>

#include "moduli/graph.hpp"
#include "moduli/partitions.hpp"

namespace moduli {

enum class SpaceKind {
  M0,      // stable genus-zero curves with n markings
  FM,      // n points on the affine line up to translation, with bubbling
  MULT,    // scaled affine lines (complexified multiplihedron)
  SCALED,  // scaled lines with a free scaling parameter
};

struct Space {
  SpaceKind kind = SpaceKind::MULT;
  int n = 0;

  friend bool operator==(const Space&, const Space&) = default;
};

std::string to_string(SpaceKind kind);
std::string to_string(const Space& space);
SpaceKind parse_space_kind(const std::string& name);

GraphKind graph_kind(SpaceKind kind);
int ambient_dimension(const Space& space);

/// Enumeration guard: 7 unless overridden by the MODULI_MAX_N environment variable.
int max_enumeration_n();

/// Throws InvalidGraph for n below the kind's minimum and TooLarge above `limit`.
void check_space(const Space& space, int limit);

/// All stable connected types, one per isomorphism class, sorted by canonical key.
/// The parallel version shards by top-level vertex type.
std::vector<MarkedGraph> enumerate_strata(const Space& space);
std::vector<MarkedGraph> enumerate_strata_serial(const Space& space);

int stratum_dimension(const MarkedGraph& graph, const Space& space);
int stratum_codimension(const MarkedGraph& graph, const Space& space);

enum class DivisorShape { Subset, Partition, RhoSlice };

struct BoundaryDivisor {
  Space space;
  DivisorShape shape = DivisorShape::Subset;
  std::vector<int> subset;  // Subset shape
  SetPartition blocks;      // Partition shape
  MarkedGraph generic_type;

  /// "D{1,2}", "D[{1},{2}]" or "rho".
  std::string name() const;
};

std::vector<BoundaryDivisor> boundary_divisors(const Space& space);

/// 1 for every divisor; the scaling slice gets its codimension from the fixed scale.
int divisor_codimension(const BoundaryDivisor& divisor);

/// Generic types of the individual divisor shapes.
MarkedGraph subset_divisor_type(const Space& space, const std::vector<int>& subset);
MarkedGraph partition_divisor_type(const Space& space, const SetPartition& blocks);
MarkedGraph open_stratum(const Space& space);

struct ClosurePoset {
  std::vector<MarkedGraph> strata;  // sorted by canonical key
  std::vector<std::string> keys;
  std::vector<int> codimension;
  /// (finer, coarser): the coarser type is obtained by one collapse.
  std::vector<std::pair<int, int>> covers;
};

ClosurePoset closure_poset(const Space& space);

}  // namespace moduli

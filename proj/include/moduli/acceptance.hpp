#pragma once

// The acceptance suite: twelve end-to-end criteria, each reported as one
// PASS/FAIL line. Shared by the acceptance test binary and `moduli selftest`.

#include <ostream>
#include <string>
#include <vector>

#include "moduli/graph.hpp"

namespace moduli {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

std::vector<CriterionResult> run_acceptance();

/// Prints one line per criterion and returns the number of failures.
int print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out);

/// MULT(4) type: Infinity root, two Infinity children, each with two Colored
/// children carrying one marking. Its gluing cone has 4 rays in rank 3.
MarkedGraph singular_cone_tree();

/// MULT(7) type with 8 finite edges and 4 Colored vertices whose relations
/// are g1 = g2, g3 = g4, g1 g5 = g3 g6.
MarkedGraph three_relation_tree();

}  // namespace moduli

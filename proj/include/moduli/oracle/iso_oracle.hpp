#pragma once

// Slow reference checks used by tests and the acceptance runner.

#include <vector>

#include "moduli/graph.hpp"
#include "moduli/lattice.hpp"

namespace moduli::oracle {

/// Exhaustive search for a vertex bijection preserving kind, colors, genera,
/// root, leg labels and the edge multiset. Intended for at most 8 vertices.
bool brute_isomorphic(const MarkedGraph& a, const MarkedGraph& b);

/// True iff some g in GL(d, Z) maps the ray set `a` onto the ray set `b`.
bool lattice_equivalent(const std::vector<IntVector>& a, const std::vector<IntVector>& b);

}  // namespace moduli::oracle

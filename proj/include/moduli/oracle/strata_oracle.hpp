#pragma once

// Generate-and-filter enumeration of strata: every rooted tree shape up to a
// vertex bound, every coloring and leg placement, kept when the graph is
// valid and stable. Independent of the recursive enumerator in strata.cpp.

#include <set>
#include <string>
#include <vector>

#include "moduli/strata.hpp"

namespace moduli::oracle {

/// Unlabeled rooted trees with exactly `v` vertices as parent arrays
/// (parent[0] = -1, parent[i] < i).
std::vector<std::vector<int>> rooted_trees(int v);

int vertex_bound(const Space& space);

/// Canonical keys of all stable connected types.
std::set<std::string> brute_force_strata(const Space& space);

}  // namespace moduli::oracle

#pragma once

#include <cstdint>
#include <vector>

namespace moduli {

/// A set partition as a list of blocks; blocks are sorted and ordered by their
/// smallest element.
using SetPartition = std::vector<std::vector<int>>;

/// All set partitions of `elements` (restricted-growth-string order). The empty
/// set has exactly one partition, the empty one.
std::vector<SetPartition> set_partitions(const std::vector<int>& elements);

/// Set partitions with block count in [min_blocks, max_blocks].
std::vector<SetPartition> set_partitions(const std::vector<int>& elements, int min_blocks,
                                         int max_blocks);

std::uint64_t bell_number(int n);

/// 1..n
std::vector<int> iota_labels(int n);

/// All subsets of `elements` with size >= min_size, ordered by size then lexicographically.
std::vector<std::vector<int>> subsets(const std::vector<int>& elements, int min_size);

std::uint64_t factorial(int n);

}  // namespace moduli

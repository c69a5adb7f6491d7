#include "moduli/partitions.hpp"

#include <algorithm>
#include <stdexcept>

namespace moduli {

namespace {

void grow(const std::vector<int>& elements, std::size_t index, SetPartition& current,
          std::vector<SetPartition>& out) {
  if (index == elements.size()) {
    out.push_back(current);
    return;
  }
  for (std::size_t b = 0; b < current.size(); ++b) {
    current[b].push_back(elements[index]);
    grow(elements, index + 1, current, out);
    current[b].pop_back();
  }
  current.push_back({elements[index]});
  grow(elements, index + 1, current, out);
  current.pop_back();
}

}  // namespace

std::vector<SetPartition> set_partitions(const std::vector<int>& elements) {
  std::vector<int> sorted = elements;
  std::sort(sorted.begin(), sorted.end());
  std::vector<SetPartition> out;
  SetPartition current;
  grow(sorted, 0, current, out);
  return out;
}

std::vector<SetPartition> set_partitions(const std::vector<int>& elements, int min_blocks,
                                         int max_blocks) {
  std::vector<SetPartition> out;
  for (auto& p : set_partitions(elements)) {
    int r = static_cast<int>(p.size());
    if (r >= min_blocks && r <= max_blocks) out.push_back(std::move(p));
  }
  return out;
}

std::uint64_t bell_number(int n) {
  if (n < 0) throw std::invalid_argument("bell_number: negative n");
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

std::vector<int> iota_labels(int n) {
  std::vector<int> v;
  for (int i = 1; i <= n; ++i) v.push_back(i);
  return v;
}

std::vector<std::vector<int>> subsets(const std::vector<int>& elements, int min_size) {
  std::vector<int> sorted = elements;
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(sorted[i]);
    }
    if (static_cast<int>(s.size()) >= min_size) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace moduli

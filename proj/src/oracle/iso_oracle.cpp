#include "moduli/oracle/iso_oracle.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <map>
#include <set>

namespace moduli::oracle {

namespace {

std::multiset<std::pair<int, int>> edge_multiset(const MarkedGraph& g, const std::map<int, int>& relabel) {
  std::multiset<std::pair<int, int>> out;
  for (const auto& e : g.edges) {
    int u = relabel.at(e.u), v = relabel.at(e.v);
    out.insert({std::min(u, v), std::max(u, v)});
  }
  return out;
}

struct Search {
  const MarkedGraph& a;
  const MarkedGraph& b;
  std::vector<int> order;  // vertex ids of a
  std::map<int, int> map;  // a id -> b id
  std::set<int> used;

  bool compatible(int va, int vb) const {
    const Vertex& x = a.vertex(va);
    const Vertex& y = b.vertex(vb);
    if (x.color != y.color || x.genus != y.genus) return false;
    if (a.valence(va) != b.valence(vb)) return false;
    if (a.legs_at(va) != b.legs_at(vb)) return false;
    return (a.root && *a.root == va) == (b.root && *b.root == vb);
  }

  bool run(std::size_t i) {
    if (i == order.size()) {
      std::map<int, int> identity;
      for (const auto& v : b.vertices) identity[v.id] = v.id;
      return edge_multiset(a, map) == edge_multiset(b, identity);
    }
    for (const auto& vb : b.vertices) {
      if (used.count(vb.id) || !compatible(order[i], vb.id)) continue;
      map[order[i]] = vb.id;
      used.insert(vb.id);
      if (run(i + 1)) return true;
      used.erase(vb.id);
      map.erase(order[i]);
    }
    return false;
  }
};

// Solves x * m = n for x over Q, m square and invertible; empty if singular.
std::optional<RatMatrix> solve_right(RatMatrix m, RatMatrix n) {
  // Transpose to m^T x^T = n^T and eliminate.
  const std::size_t d = m.size();
  RatMatrix a(d, RatVector(d)), rhs(d, RatVector(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      a[i][j] = m[j][i];
      rhs[i][j] = n[j][i];
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (p < d && a[p][c] == 0) ++p;
    if (p == d) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(rhs[p], rhs[c]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = 0; k < d; ++k) {
        a[r][k] -= f * a[c][k];
        rhs[r][k] -= f * rhs[c][k];
      }
    }
  }
  RatMatrix x(d, RatVector(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) x[j][i] = rhs[i][j] / a[i][i];
  }
  return x;
}

}  // namespace

bool brute_isomorphic(const MarkedGraph& a, const MarkedGraph& b) {
  if (a.kind != b.kind || a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) {
    return false;
  }
  if (a.leg_labels() != b.leg_labels() || a.root.has_value() != b.root.has_value()) return false;
  Search s{a, b, {}, {}, {}};
  for (const auto& v : a.vertices) s.order.push_back(v.id);
  return s.run(0);
}

bool lattice_equivalent(const std::vector<IntVector>& a, const std::vector<IntVector>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  const std::size_t d = a.front().size();
  if (b.front().size() != d) return false;
  if (matrix_rank(a, d) != static_cast<int>(d) || matrix_rank(b, d) != static_cast<int>(d)) {
    return false;  // only full-dimensional ray sets are compared
  }
  // A basis among the rays of a.
  std::vector<std::size_t> basis;
  IntMatrix chosen;
  for (std::size_t i = 0; i < a.size() && basis.size() < d; ++i) {
    chosen.push_back(a[i]);
    if (matrix_rank(chosen, d) == static_cast<int>(chosen.size())) basis.push_back(i);
    else chosen.pop_back();
  }
  std::set<IntVector> target(b.begin(), b.end());
  // Columns of m are the chosen rays of a; columns of n their candidate images.
  std::vector<std::size_t> img(d);
  std::vector<bool> taken(b.size(), false);
  std::function<bool(std::size_t)> assign = [&](std::size_t k) -> bool {
    if (k == d) {
      RatMatrix m(d, RatVector(d)), n(d, RatVector(d));
      for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < d; ++r) {
          m[r][c] = Rational(a[basis[c]][r]);
          n[r][c] = Rational(b[img[c]][r]);
        }
      }
      auto g = solve_right(m, n);
      if (!g) return false;
      IntMatrix gi(d, IntVector(d));
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
          if (!is_integer((*g)[r][c])) return false;
          gi[r][c] = (*g)[r][c].get_num();
        }
      }
      if (abs(determinant(gi)) != 1) return false;
      std::set<IntVector> mapped;
      for (const auto& v : a) {
        IntVector w(d, Integer(0));
        for (std::size_t r = 0; r < d; ++r) {
          for (std::size_t c = 0; c < d; ++c) w[r] += gi[r][c] * v[c];
        }
        mapped.insert(w);
      }
      return mapped == target;
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (taken[j]) continue;
      taken[j] = true;
      img[k] = j;
      if (assign(k + 1)) return true;
      taken[j] = false;
    }
    return false;
  };
  return assign(0);
}

}  // namespace moduli::oracle

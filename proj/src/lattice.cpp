#include "moduli/lattice.hpp"

#include <stdexcept>
#include <utility>

namespace moduli {

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.empty()) return {};
  std::size_t inner = b.size();
  std::size_t cols = b.empty() ? 0 : b[0].size();
  IntMatrix c(a.size(), IntVector(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw std::invalid_argument("multiply: shape mismatch");
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

void swap_rows(IntMatrix& m, std::size_t i, std::size_t j) {
  if (i != j) std::swap(m[i], m[j]);
}

void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (auto& row : m) std::swap(row[i], row[j]);
}

// row_i += k * row_j
void add_row(IntMatrix& m, std::size_t i, std::size_t j, const Integer& k) {
  for (std::size_t c = 0; c < m[i].size(); ++c) m[i][c] += k * m[j][c];
}

void add_col(IntMatrix& m, std::size_t i, std::size_t j, const Integer& k) {
  for (auto& row : m) row[i] += k * row[j];
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& input, std::size_t cols) {
  const std::size_t rows = input.size();
  SmithForm s;
  s.D = input;
  for (const auto& r : s.D) {
    if (r.size() != cols) throw std::invalid_argument("smith_normal_form: ragged matrix");
  }
  s.U = identity_matrix(rows);
  s.V = identity_matrix(cols);
  IntMatrix& a = s.D;

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (a[i][j] == 0) continue;
          if (pi == rows || abs(a[i][j]) < abs(a[pi][pj])) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) goto done;
      swap_rows(a, t, pi);
      swap_rows(s.U, t, pi);
      swap_cols(a, t, pj);
      swap_cols(s.V, t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Integer q = floor_div(a[i][t], a[t][t]);
        add_row(a, i, t, -q);
        add_row(s.U, i, t, -q);
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Integer q = floor_div(a[t][j], a[t][t]);
        add_col(a, j, t, -q);
        add_col(s.V, j, t, -q);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce divisibility of the trailing block by the pivot.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          Integer r;
          mpz_fdiv_r(r.get_mpz_t(), a[i][j].get_mpz_t(), a[t][t].get_mpz_t());
          if (r != 0) {
            add_row(a, t, i, 1);
            add_row(s.U, t, i, 1);
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : s.U[t]) x = -x;
    }
    s.diagonal.push_back(a[t][t]);
    ++s.rank;
  }
done:
  return s;
}

int matrix_rank(const IntMatrix& a, std::size_t cols) {
  RatMatrix m;
  for (const auto& row : a) m.push_back(to_rational(row));
  int rank = 0;
  std::size_t rows = m.size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
    std::size_t p = rank;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[rank][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

Integer determinant(const IntMatrix& square) {
  const std::size_t n = square.size();
  RatMatrix m;
  for (const auto& row : square) {
    if (row.size() != n) throw std::invalid_argument("determinant: matrix not square");
    m.push_back(to_rational(row));
  }
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det.get_num();
}

IntVector primitive(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g == 0 || g == 1) return v;
  IntVector out;
  for (const auto& x : v) out.push_back(x / g);
  return out;
}

RatVector to_rational(const IntVector& v) {
  RatVector out;
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

std::optional<RatVector> nonnegative_solution(const RatMatrix& a_in, const RatVector& b_in) {
  const std::size_t m = a_in.size();
  const std::size_t n = m ? a_in[0].size() : 0;
  if (b_in.size() != m) throw std::invalid_argument("nonnegative_solution: shape mismatch");
  if (m == 0) return RatVector(n, 0);

  // Tableau columns: n structural, m artificial, then the right-hand side.
  const std::size_t width = n + m + 1;
  RatMatrix t(m, RatVector(width, 0));
  for (std::size_t i = 0; i < m; ++i) {
    Rational sign = b_in[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = sign * a_in[i][j];
    t[i][n + i] = 1;
    t[i][width - 1] = sign * b_in[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  RatVector cost(width, 0);  // reduced costs of the phase-one objective
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) cost[j] -= t[i][j];
  }
  for (std::size_t i = 0; i < m; ++i) cost[width - 1] -= t[i][width - 1];

  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][width - 1] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // cannot happen for a phase-one problem
    Rational piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    Rational f = cost[enter];
    for (std::size_t j = 0; j < width; ++j) cost[j] -= f * t[leave][j];
    basis[leave] = enter;
  }
  if (cost[width - 1] != 0) return std::nullopt;
  RatVector x(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) x[basis[i]] = t[i][width - 1];
  }
  return x;
}

bool in_rational_cone(const std::vector<RatVector>& generators, const RatVector& target) {
  const std::size_t dim = target.size();
  RatMatrix a(dim, RatVector(generators.size(), 0));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) a[i][j] = generators[j][i];
  }
  if (generators.empty()) {
    for (const auto& x : target) {
      if (x != 0) return false;
    }
    return true;
  }
  return nonnegative_solution(a, target).has_value();
}

std::optional<RatVector> half_space_witness(const std::vector<RatVector>& vectors, std::size_t dim) {
  // <eta+ - eta-, v_j> - s_j = 1 with eta+, eta-, s >= 0.
  const std::size_t k = vectors.size();
  RatMatrix a(k, RatVector(2 * dim + k, 0));
  RatVector b(k, 1);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      a[j][i] = vectors[j][i];
      a[j][dim + i] = -vectors[j][i];
    }
    a[j][2 * dim + j] = -1;
  }
  auto x = nonnegative_solution(a, b);
  if (!x) return std::nullopt;
  RatVector eta(dim);
  for (std::size_t i = 0; i < dim; ++i) eta[i] = (*x)[i] - (*x)[dim + i];
  return eta;
}

}  // namespace moduli

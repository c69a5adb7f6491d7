#include <doctest.h>

#include "moduli/cohft.hpp"
#include "moduli/error.hpp"
#include "moduli/lattice.hpp"

using namespace moduli;

namespace {

CohFTAlgebra line_algebra(const SeriesCaps& caps) {
  CohFTAlgebra a;
  a.basis = {"1"};
  a.max_arity = 2;
  a.mu[2] = SymTensor{2, 1, {}};
  a.mu[2].add({0, 0}, 0, Series::constant(caps, 1));
  return a;
}

Morphism affine_line_map(const SeriesCaps& caps, const Rational& c, const Rational& slope) {
  Morphism m;
  m.source_dim = m.target_dim = 1;
  m.max_arity = 1;
  m.phi[0] = SymTensor{0, 1, {}};
  if (c != 0) m.phi[0].add({}, 0, Series::constant(caps, c));
  m.phi[1] = SymTensor{1, 1, {}};
  m.phi[1].add({0}, 0, Series::constant(caps, slope));
  return m;
}

// Sum of c * hbar^h over the terms at q-units `d`, at a numeric hbar.
Rational evaluate_at(const Series& s, int d, const Rational& hbar) {
  Rational total = 0;
  for (const auto& [e, c] : s.terms()) {
    if (e[0] != d) continue;
    Rational p = 1;
    for (int i = 0; i < std::abs(e[1]); ++i) p *= hbar;
    total += e[1] >= 0 ? Rational(c * p) : Rational(c / p);
  }
  return total;
}

// Solves hbar*d*X + X*M0 - M0*X = R for X by Gaussian elimination on the
// d^2 unknowns (independent of the closed form used by solve_qde).
RatMatrix sylvester(const RatMatrix& M0, const RatMatrix& R, const Rational& hd) {
  const int n = static_cast<int>(M0.size());
  const int N = n * n;
  RatMatrix A(N, RatVector(N + 1, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int row = i * n + j;
      A[row][row] += hd;
      for (int k = 0; k < n; ++k) {
        A[row][i * n + k] += M0[k][j];  // (X M0)_ij
        A[row][k * n + j] -= M0[i][k];  // (M0 X)_ij
      }
      A[row][N] = R[i][j];
    }
  }
  for (int c = 0; c < N; ++c) {
    int p = c;
    while (A[p][c] == 0) ++p;
    std::swap(A[p], A[c]);
    for (int r = 0; r < N; ++r) {
      if (r == c || A[r][c] == 0) continue;
      Rational f = A[r][c] / A[c][c];
      for (int k = c; k <= N; ++k) A[r][k] -= f * A[c][k];
    }
  }
  RatMatrix X(n, RatVector(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X[i][j] = A[i * n + j][N] / A[i * n + j][i * n + j];
  return X;
}

}  // namespace

TEST_CASE("small quantum cohomology of projective spaces is associative") {
  SeriesCaps caps{0, 1, 3, 3};
  for (int k = 2; k <= 5; ++k) {
    auto alg = projective_space(k, caps);
    CHECK(check_associativity(alg, caps).ok);
    SeriesCaps vc = caps.with_vars(k);
    auto table = star_table(alg, VecSeries(k, Series(vc)), vc);
    // xi * xi^{k-1} = q
    VecSeries p = table[1][k - 1];
    CHECK(p[0] == Series::q_term(vc, 1));
    for (int i = 1; i < k; ++i) CHECK(p[i].is_zero());
  }
}

TEST_CASE("random algebras are generally not associative, and the witness is reproducible") {
  SeriesCaps caps{0, 1, 2, 1};
  int failures = 0;
  for (int seed = 0; seed < 6; ++seed) {
    auto alg = random_algebra(seed, 2, 3, caps);
    auto a = check_associativity(alg, caps);
    auto b = check_associativity_serial(alg, caps);
    CHECK(a.ok == b.ok);
    CHECK(a.witness == b.witness);
    if (!a.ok) {
      ++failures;
      CHECK_FALSE(a.witness.empty());
    }
  }
  CHECK(failures > 0);
}

TEST_CASE("star-morphism checks") {
  SeriesCaps caps{0, 1, 3, 1};
  for (int seed = 0; seed < 8; ++seed) {
    int dim = 1 + seed % 3;
    auto alg = random_algebra(100 + seed, dim, 2 + seed % 3, caps);
    CHECK(check_star_morphism(identity_morphism(dim, caps), alg, alg, caps).ok);
  }
  auto line = line_algebra(caps);
  CHECK(check_star_morphism(affine_line_map(caps, Rational(3, 2), 1), line, line, caps).ok);
  auto twice = check_star_morphism(affine_line_map(caps, 0, 2), line, line, caps);
  CHECK_FALSE(twice.ok);
  CHECK_FALSE(twice.witness.empty());

  SeriesCaps base{0, 1, 0, 2};
  for (int k = 2; k <= 4; ++k) {
    int N = k * (base.q_cap + 1);
    auto phi = quotient_morphism(k, N, base);
    CHECK(check_star_morphism(phi, truncated_polynomial(N, base), projective_space(k, base), base).ok);
    // Dropping the q-twist breaks the morphism property.
    Morphism broken = phi;
    broken.phi[1] = SymTensor{1, k, {}};
    for (int m = 0; m < N; ++m) broken.phi[1].add({m}, m % k, Series::constant(base, 1));
    CHECK_FALSE(check_star_morphism(broken, truncated_polynomial(N, base), projective_space(k, base), base).ok);
  }
}

TEST_CASE("trace composition: substitution equals partition sum") {
  SeriesCaps caps{0, 1, 5, 1};
  for (int seed = 0; seed < 10; ++seed) {
    auto phi = random_flat_morphism(seed, 1 + seed % 2, 2, 3, caps);
    auto tau = random_trace(50 + seed, 2, 4, caps);
    auto c = compose_trace(tau, phi, caps);
    CHECK(c.agreement.ok);
    CHECK(c.substitution == c.partition_sum);
  }
  // Curved morphisms: the curvature enters with 1/j! weights.
  for (int seed = 0; seed < 5; ++seed) {
    auto phi = random_flat_morphism(70 + seed, 2, 1, 2, caps);
    phi.phi[0].add({}, 0, Series::constant(caps.scalar(), Rational(seed + 1, 2)));
    CHECK_FALSE(phi.flat());
    auto tau = random_trace(80 + seed, 1, 4, caps);
    CHECK(compose_trace(tau, phi, caps).agreement.ok);
  }
}

TEST_CASE("pullback traces reproduce the composed potential") {
  SeriesCaps caps{0, 1, 4, 1};
  auto phi = random_flat_morphism(9, 2, 2, 3, caps);
  auto tau_w = random_trace(10, 2, 6, caps);
  Trace tau_v = pullback_trace(tau_w, phi, 6, caps);
  SeriesCaps vc = caps.with_vars(2);
  VecSeries v = formal_point(2, vc);
  Series potential(vc);
  for (int n = 0; n <= 6; ++n) potential += evaluate_exp(tau_v.tau.at(n), {}, v, n, vc)[0];
  CHECK(potential == compose_trace(tau_w, phi, caps).substitution);
}

TEST_CASE("isometry") {
  SeriesCaps caps{0, 1, 3, 1};
  for (int seed = 0; seed < 4; ++seed) {
    auto phi = random_flat_morphism(200 + seed, 2, 1 + seed % 2, 3, caps);
    auto tau_w = random_trace(300 + seed, phi.target_dim, 5, caps);
    Trace tau_v = pullback_trace(tau_w, phi, 5, caps);
    CHECK(check_isometry(tau_v, tau_w, phi, caps).ok);
    Trace bad = tau_v;
    bad.tau_pp[3].add(0, 1, {1}, Series::constant(caps.scalar(), 1));
    auto r = check_isometry(bad, tau_w, phi, caps);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.witness.empty());
  }
  auto curved = random_flat_morphism(1, 1, 1, 2, caps);
  curved.phi[0].add({}, 0, Series::constant(caps.scalar(), 1));
  auto tau = random_trace(2, 1, 4, caps);
  try {
    check_isometry(tau, tau, curved, caps);
    FAIL("expected CurvedMorphismUnsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CurvedMorphismUnsupported);
  }
}

TEST_CASE("quantum differential equation") {
  SeriesCaps caps{0, 1, 0, 3};
  for (int k = 2; k <= 4; ++k) {
    auto sol = solve_qde(projective_space(k, caps), 1, caps);
    CHECK(sol.residual.ok);
    for (const auto& row : qde_residual(sol.M, sol.sigma))
      for (const auto& s : row) CHECK(s.is_zero());
  }
  // Gauge factor against an independent linear solve at several hbar values.
  for (int k = 2; k <= 3; ++k) {
    auto sol = solve_qde(projective_space(k, caps), 1, caps);
    RatMatrix M0(k, RatVector(k, 0)), M1(k, RatVector(k, 0));
    for (int j = 0; j + 1 < k; ++j) M0[j + 1][j] = 1;
    M1[0][k - 1] = 1;
    for (Rational hbar : {Rational(2), Rational(-3), Rational(5, 7)}) {
      RatMatrix prev(k, RatVector(k, 0));
      for (int i = 0; i < k; ++i) prev[i][i] = 1;
      for (int d = 1; d <= 3; ++d) {
        RatMatrix R(k, RatVector(k, 0));
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l) R[i][j] += M1[i][l] * prev[l][j];
        RatMatrix X = sylvester(M0, R, hbar * d);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) CHECK(evaluate_at(sol.S[i][j], d, hbar) == X[i][j]);
        prev = X;
      }
    }
  }
  // 1-dim e*e = e: the classical product is not nilpotent.
  SeriesCaps sc{0, 1, 0, 2};
  try {
    solve_qde(line_algebra(sc), 0, sc);
    FAIL("expected DegenerateQDE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateQDE);
  }
}

TEST_CASE("missing arities are reported") {
  SeriesCaps caps{0, 1, 2, 1};
  CohFTAlgebra empty;
  empty.basis = {"a"};
  empty.max_arity = 2;
  CHECK_THROWS_AS(check_associativity(empty, caps), Error);
}

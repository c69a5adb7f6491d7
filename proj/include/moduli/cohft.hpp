#pragma once

// Formal calculus of CohFT algebras restricted to fundamental-class
// insertions: star products, morphisms and their push-forwards, traces and
// their bilinear forms, and the quantum differential equation.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moduli/series.hpp"

namespace moduli {

using VecSeries = std::vector<Series>;
using SeriesMatrix = std::vector<std::vector<Series>>;

/// Symmetric multilinear map U^arity -> R^out_dim. Entries are keyed by the
/// sorted multiset of input basis indices; values are scalar series.
struct SymTensor {
  int arity = 0;
  int out_dim = 1;
  std::map<std::vector<int>, VecSeries> entries;

  /// Adds `value` to output component `out` at the given inputs.
  void add(std::vector<int> inputs, int out, const Series& value);
  const VecSeries* find(const std::vector<int>& sorted_inputs) const;
};

/// Two point-class slots (symmetric between themselves) plus `bulk` slots.
struct PointTensor {
  int bulk = 0;
  std::map<std::vector<int>, Series> entries;  // key: {a, b, bulk...}, a <= b, bulk sorted

  void add(int a, int b, std::vector<int> bulk_inputs, const Series& value);
};

struct CohFTAlgebra {
  std::vector<std::string> basis;
  int max_arity = 2;
  std::map<int, SymTensor> mu;

  int dim() const { return static_cast<int>(basis.size()); }
};

struct Morphism {
  int source_dim = 0;
  int target_dim = 0;
  int max_arity = 1;
  std::map<int, SymTensor> phi;  // arity 0 is the curvature

  bool flat() const;
};

struct Trace {
  int dim = 0;
  int max_arity = 0;
  std::map<int, SymTensor> tau;  // out_dim 1
  int pp_max_arity = -1;          // largest n + 2 of the point-class family; -1 if absent
  std::map<int, PointTensor> tau_pp;  // keyed by total arity n + 2

  bool has_point_family() const { return pp_max_arity >= 2; }
};

struct CheckResult {
  bool ok = true;
  std::string witness;  // first failing coefficient, empty when ok
};

/// T(fixed..., p, ..., p) / k! with k copies of the point.
VecSeries evaluate_exp(const SymTensor& t, const std::vector<int>& fixed, const VecSeries& point,
                       int k, const SeriesCaps& caps);

/// T(args...) for arbitrary vector arguments.
VecSeries evaluate_multilinear(const SymTensor& t, const std::vector<VecSeries>& args,
                               const SeriesCaps& caps);

/// The generic formal point sum_i t_i e_i of a dim-dimensional space.
VecSeries formal_point(int dim, const SeriesCaps& caps);
VecSeries basis_vector(int dim, int index, const SeriesCaps& caps);

/// e_i *_p e_j for all basis pairs.
std::vector<std::vector<VecSeries>> star_table(const CohFTAlgebra& alg, const VecSeries& point,
                                               const SeriesCaps& caps);
/// Bilinear extension of a star table.
VecSeries star_product(const std::vector<std::vector<VecSeries>>& table, const VecSeries& a,
                       const VecSeries& b, const SeriesCaps& caps);
VecSeries star_product(const CohFTAlgebra& alg, const VecSeries& point, const VecSeries& a,
                       const VecSeries& b, const SeriesCaps& caps);

/// Checks (a*b)*c = a*(b*c) at the generic point for all basis triples.
CheckResult check_associativity(const CohFTAlgebra& alg, const SeriesCaps& caps);
CheckResult check_associativity_serial(const CohFTAlgebra& alg, const SeriesCaps& caps);

VecSeries push_forward(const Morphism& phi, const VecSeries& point, const SeriesCaps& caps);
VecSeries derivative(const Morphism& phi, const VecSeries& point, const VecSeries& a,
                     const SeriesCaps& caps);

/// Checks D phi(a * b) = D phi(a) *_{phi(v)} D phi(b) for all basis pairs.
CheckResult check_star_morphism(const Morphism& phi, const CohFTAlgebra& source,
                                const CohFTAlgebra& target, const SeriesCaps& caps);

struct ComposedTrace {
  Series substitution;   // tau_W potential evaluated at phi(v)
  Series partition_sum;  // sum over set partitions of the marked points
  CheckResult agreement;
};

ComposedTrace compose_trace(const Trace& tau_w, const Morphism& phi, const SeriesCaps& caps);

/// V-side trace whose tensors are the partition sums of (tau_w, phi), up to
/// total arity `max_arity` for both families.
Trace pullback_trace(const Trace& tau_w, const Morphism& phi, int max_arity,
                     const SeriesCaps& caps);

/// g_v(e_a, e_b) = sum_n tau^{n+2}(e_a, e_b, v^n; point classes) / n!
SeriesMatrix bilinear_form(const Trace& trace, const VecSeries& point, const SeriesCaps& caps);

CheckResult check_isometry(const Trace& tau_v, const Trace& tau_w, const Morphism& phi,
                           const SeriesCaps& caps);

struct QDESolution {
  SeriesMatrix M;      // matrix of xi * (.) at the base point
  SeriesMatrix S;      // gauge factor, S = I + O(q)
  SeriesMatrix sigma;  // S q^{M0/hbar}
  CheckResult residual;
};

/// Solves hbar q d/dq sigma = xi * sigma through the q cap.
QDESolution solve_qde(const CohFTAlgebra& alg, int generator, const SeriesCaps& caps);

/// hbar q d/dq sigma - M sigma.
SeriesMatrix qde_residual(const SeriesMatrix& M, const SeriesMatrix& sigma);

// Standard data.

/// Small quantum cohomology of P^{k-1}: xi^i * xi^j = xi^{i+j}, xi^k = q.
CohFTAlgebra projective_space(int k, const SeriesCaps& caps);
/// Q[xi]/(xi^N) with its product as the only operation.
CohFTAlgebra truncated_polynomial(int N, const SeriesCaps& caps);
/// xi^m -> q^{floor(m/k)} xi^{m mod k} from Q[xi]/(xi^N) to P^{k-1}.
Morphism quotient_morphism(int k, int N, const SeriesCaps& caps);
Morphism identity_morphism(int dim, const SeriesCaps& caps);
/// Random symmetric tensors of arity 2..max_arity with small rational entries.
CohFTAlgebra random_algebra(std::uint64_t seed, int dim, int max_arity, const SeriesCaps& caps);
/// Random flat morphism (phi^1 invertible-ish, higher arities random).
Morphism random_flat_morphism(std::uint64_t seed, int source_dim, int target_dim, int max_arity,
                              const SeriesCaps& caps);
/// Random trace with fundamental-class tensors of arity 0..max_arity and, when
/// max_arity >= 2, a point-class family of total arity 2..max_arity.
Trace random_trace(std::uint64_t seed, int dim, int max_arity, const SeriesCaps& caps);

}  // namespace moduli

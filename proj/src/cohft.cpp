#include "moduli/cohft.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "moduli/error.hpp"
#include "moduli/lattice.hpp"
#include "moduli/partitions.hpp"

namespace moduli {

// ---------------------------------------------------------------------------
// Tensors

void SymTensor::add(std::vector<int> inputs, int out, const Series& value) {
  if (static_cast<int>(inputs.size()) != arity) throw std::invalid_argument("tensor arity mismatch");
  if (out < 0 || out >= out_dim) throw std::out_of_range("tensor output index");
  std::sort(inputs.begin(), inputs.end());
  auto& slot = entries[inputs];
  if (slot.empty()) slot.assign(out_dim, Series(value.caps()));
  slot[out] += value;
}

const VecSeries* SymTensor::find(const std::vector<int>& sorted_inputs) const {
  auto it = entries.find(sorted_inputs);
  return it == entries.end() ? nullptr : &it->second;
}

void PointTensor::add(int a, int b, std::vector<int> bulk_inputs, const Series& value) {
  if (static_cast<int>(bulk_inputs.size()) != bulk) throw std::invalid_argument("point tensor arity");
  std::sort(bulk_inputs.begin(), bulk_inputs.end());
  std::vector<int> key{std::min(a, b), std::max(a, b)};
  key.insert(key.end(), bulk_inputs.begin(), bulk_inputs.end());
  auto it = entries.find(key);
  if (it == entries.end()) entries.emplace(key, value);
  else it->second += value;
}

bool Morphism::flat() const {
  auto it = phi.find(0);
  if (it == phi.end()) return true;
  for (const auto& [key, vals] : it->second.entries) {
    for (const auto& v : vals) {
      if (!v.is_zero()) return false;
    }
  }
  return true;
}

namespace {

template <class Map>
void require_arities(const Map& tensors, int lo, int hi, const std::string& what) {
  for (int n = lo; n <= hi; ++n) {
    if (!tensors.count(n)) {
      throw Error(ErrorCode::MissingArity, what + " has no arity-" + std::to_string(n) + " data");
    }
  }
}

bool zero_constant_term(const VecSeries& point) {
  for (const auto& s : point) {
    for (const auto& [e, c] : s.terms()) {
      if (s.t_degree(e) == 0) return false;
    }
  }
  return true;
}

// Cache of p_i^k / k! for the components of a point.
class PowerCache {
 public:
  PowerCache(const VecSeries& point, const SeriesCaps& caps) : point_(point), caps_(caps) {
    table_.resize(point.size());
  }

  const Series& scaled_power(int i, int k) {
    auto& row = table_[i];
    if (row.empty()) row.push_back(Series::constant(caps_, 1));
    while (static_cast<int>(row.size()) <= k) {
      int next = static_cast<int>(row.size());
      row.push_back(row.back() * point_[i] * Rational(1, next));
    }
    return row[k];
  }

 private:
  const VecSeries& point_;
  SeriesCaps caps_;
  std::vector<std::vector<Series>> table_;
};

std::string describe_monomial(const Series& s, const Exponent& e) {
  Series m(s.caps());
  m.add_term(e, 1);
  return m.to_string();
}

// First coefficient where two vectors differ, as a readable witness.
std::optional<std::string> difference(const VecSeries& lhs, const VecSeries& rhs,
                                      const std::string& context) {
  for (std::size_t j = 0; j < std::max(lhs.size(), rhs.size()); ++j) {
    Series l = j < lhs.size() ? lhs[j] : Series();
    Series r = j < rhs.size() ? rhs[j] : Series();
    Series d = l - r;
    if (d.is_zero()) continue;
    const auto& [e, c] = *d.terms().begin();
    return context + ", component " + std::to_string(j) + ", coefficient of " +
           describe_monomial(d, e) + ": " + to_string(l.coefficient(e)) + " vs " +
           to_string(r.coefficient(e));
  }
  return std::nullopt;
}

void axpy(VecSeries& out, const Series& scale, const VecSeries& v) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!v[j].is_zero()) out[j] += scale * v[j];
  }
}

}  // namespace

VecSeries evaluate_exp(const SymTensor& t, const std::vector<int>& fixed, const VecSeries& point,
                       int k, const SeriesCaps& caps) {
  VecSeries out(t.out_dim, Series(caps));
  if (k > 0 && k > caps.order_cap && zero_constant_term(point)) return out;
  std::vector<int> fixed_sorted = fixed;
  std::sort(fixed_sorted.begin(), fixed_sorted.end());
  PowerCache powers(point, caps);
  std::vector<int> rest;
  for (const auto& [key, vals] : t.entries) {
    if (key.size() != fixed.size() + static_cast<std::size_t>(k)) continue;
    rest.clear();
    if (!std::includes(key.begin(), key.end(), fixed_sorted.begin(), fixed_sorted.end())) continue;
    std::set_difference(key.begin(), key.end(), fixed_sorted.begin(), fixed_sorted.end(),
                        std::back_inserter(rest));
    Series weight = Series::constant(caps, 1);
    for (std::size_t i = 0; i < rest.size() && !weight.is_zero();) {
      std::size_t j = i;
      while (j < rest.size() && rest[j] == rest[i]) ++j;
      weight = weight * powers.scaled_power(rest[i], static_cast<int>(j - i));
      i = j;
    }
    if (!weight.is_zero()) axpy(out, weight, vals);
  }
  return out;
}

VecSeries evaluate_multilinear(const SymTensor& t, const std::vector<VecSeries>& args,
                               const SeriesCaps& caps) {
  if (static_cast<int>(args.size()) != t.arity) throw std::invalid_argument("multilinear arity");
  VecSeries out(t.out_dim, Series(caps));
  std::vector<int> idx(args.size());
  std::vector<int> sorted;
  auto recurse = [&](auto&& self, std::size_t pos, const Series& prefix) -> void {
    if (pos == args.size()) {
      sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      if (const VecSeries* v = t.find(sorted)) axpy(out, prefix, *v);
      return;
    }
    for (std::size_t i = 0; i < args[pos].size(); ++i) {
      if (args[pos][i].is_zero()) continue;
      idx[pos] = static_cast<int>(i);
      Series next = prefix * args[pos][i];
      if (!next.is_zero()) self(self, pos + 1, next);
    }
  };
  recurse(recurse, 0, Series::constant(caps, 1));
  return out;
}

VecSeries formal_point(int dim, const SeriesCaps& caps) {
  VecSeries p;
  for (int i = 0; i < dim; ++i) p.push_back(Series::variable(caps, i));
  return p;
}

VecSeries basis_vector(int dim, int index, const SeriesCaps& caps) {
  VecSeries v(dim, Series(caps));
  v[index] = Series::constant(caps, 1);
  return v;
}

// ---------------------------------------------------------------------------
// Star products

std::vector<std::vector<VecSeries>> star_table(const CohFTAlgebra& alg, const VecSeries& point,
                                               const SeriesCaps& caps) {
  require_arities(alg.mu, 2, alg.max_arity, "algebra");
  const int d = alg.dim();
  std::vector<std::vector<VecSeries>> table(d, std::vector<VecSeries>(d, VecSeries(d, Series(caps))));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      VecSeries acc(d, Series(caps));
      for (int n = 2; n <= alg.max_arity; ++n) {
        auto term = evaluate_exp(alg.mu.at(n), {i, j}, point, n - 2, caps);
        for (int c = 0; c < d; ++c) acc[c] += term[c];
      }
      table[i][j] = acc;
      table[j][i] = acc;
    }
  }
  return table;
}

VecSeries star_product(const std::vector<std::vector<VecSeries>>& table, const VecSeries& a,
                       const VecSeries& b, const SeriesCaps& caps) {
  const std::size_t d = table.size();
  VecSeries out(d, Series(caps));
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (b[j].is_zero()) continue;
      axpy(out, a[i] * b[j], table[i][j]);
    }
  }
  return out;
}

VecSeries star_product(const CohFTAlgebra& alg, const VecSeries& point, const VecSeries& a,
                       const VecSeries& b, const SeriesCaps& caps) {
  return star_product(star_table(alg, point, caps), a, b, caps);
}

namespace {

std::optional<std::string> associativity_defect(const std::vector<std::vector<VecSeries>>& table,
                                                const CohFTAlgebra& alg, int a, int b, int c,
                                                const SeriesCaps& caps) {
  const int d = alg.dim();
  VecSeries lhs(d, Series(caps)), rhs(d, Series(caps));
  for (int i = 0; i < d; ++i) {
    if (!table[a][b][i].is_zero()) axpy(lhs, table[a][b][i], table[i][c]);
    if (!table[b][c][i].is_zero()) axpy(rhs, table[b][c][i], table[a][i]);
  }
  return difference(lhs, rhs,
                    "(" + alg.basis[a] + "*" + alg.basis[b] + ")*" + alg.basis[c] + " vs " +
                        alg.basis[a] + "*(" + alg.basis[b] + "*" + alg.basis[c] + ")");
}

}  // namespace

CheckResult check_associativity(const CohFTAlgebra& alg, const SeriesCaps& caps_in) {
  const int d = alg.dim();
  SeriesCaps caps = caps_in.with_vars(d);
  auto table = star_table(alg, formal_point(d, caps), caps);
  const int total = d * d * d;
  std::vector<std::optional<std::string>> defects(total);
  #pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < total; ++idx) {
    defects[idx] = associativity_defect(table, alg, idx / (d * d), (idx / d) % d, idx % d, caps);
  }
  for (const auto& w : defects) {
    if (w) return {false, *w};
  }
  return {};
}

CheckResult check_associativity_serial(const CohFTAlgebra& alg, const SeriesCaps& caps_in) {
  const int d = alg.dim();
  SeriesCaps caps = caps_in.with_vars(d);
  auto table = star_table(alg, formal_point(d, caps), caps);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) {
        if (auto w = associativity_defect(table, alg, a, b, c, caps)) return {false, *w};
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Morphisms

VecSeries push_forward(const Morphism& phi, const VecSeries& point, const SeriesCaps& caps) {
  require_arities(phi.phi, 0, phi.max_arity, "morphism");
  VecSeries out(phi.target_dim, Series(caps));
  for (int n = 0; n <= phi.max_arity; ++n) {
    auto term = evaluate_exp(phi.phi.at(n), {}, point, n, caps);
    for (int j = 0; j < phi.target_dim; ++j) out[j] += term[j];
  }
  return out;
}

namespace {

VecSeries derivative_basis(const Morphism& phi, const VecSeries& point, int i, const SeriesCaps& caps) {
  VecSeries out(phi.target_dim, Series(caps));
  for (int n = 1; n <= phi.max_arity; ++n) {
    auto term = evaluate_exp(phi.phi.at(n), {i}, point, n - 1, caps);
    for (int j = 0; j < phi.target_dim; ++j) out[j] += term[j];
  }
  return out;
}

}  // namespace

VecSeries derivative(const Morphism& phi, const VecSeries& point, const VecSeries& a,
                     const SeriesCaps& caps) {
  require_arities(phi.phi, 0, phi.max_arity, "morphism");
  VecSeries out(phi.target_dim, Series(caps));
  for (int i = 0; i < phi.source_dim; ++i) {
    if (a[i].is_zero()) continue;
    axpy(out, a[i], derivative_basis(phi, point, i, caps));
  }
  return out;
}

CheckResult check_star_morphism(const Morphism& phi, const CohFTAlgebra& source,
                                const CohFTAlgebra& target, const SeriesCaps& caps_in) {
  if (phi.source_dim != source.dim() || phi.target_dim != target.dim()) {
    throw std::invalid_argument("morphism dimensions do not match the algebras");
  }
  require_arities(phi.phi, 0, phi.max_arity, "morphism");
  const int dv = source.dim();
  SeriesCaps caps = caps_in.with_vars(dv);
  VecSeries v = formal_point(dv, caps);
  auto table_v = star_table(source, v, caps);
  VecSeries w = push_forward(phi, v, caps);
  auto table_w = star_table(target, w, caps);
  std::vector<VecSeries> d(dv);
  for (int i = 0; i < dv; ++i) d[i] = derivative_basis(phi, v, i, caps);
  for (int a = 0; a < dv; ++a) {
    for (int b = a; b < dv; ++b) {
      VecSeries lhs(phi.target_dim, Series(caps));
      for (int i = 0; i < dv; ++i) {
        if (!table_v[a][b][i].is_zero()) axpy(lhs, table_v[a][b][i], d[i]);
      }
      VecSeries rhs = star_product(table_w, d[a], d[b], caps);
      if (auto wit = difference(lhs, rhs, "D(" + source.basis[a] + "*" + source.basis[b] + ")")) {
        return {false, *wit};
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Traces

namespace {

VecSeries curvature(const Morphism& phi, const SeriesCaps& caps) {
  VecSeries out(phi.target_dim, Series(caps));
  auto it = phi.phi.find(0);
  if (it == phi.phi.end()) return out;
  if (const VecSeries* v = it->second.find({})) {
    for (int j = 0; j < phi.target_dim; ++j) out[j] += (*v)[j];
  }
  return out;
}

bool is_zero_vector(const VecSeries& v) {
  return std::all_of(v.begin(), v.end(), [](const Series& s) { return s.is_zero(); });
}

// tau^{pp}(x, y, bulk...) for vector arguments.
Series evaluate_point_multilinear(const PointTensor& t, const VecSeries& x, const VecSeries& y,
                                  const std::vector<VecSeries>& bulk, const SeriesCaps& caps) {
  Series out(caps);
  std::vector<int> idx(bulk.size());
  auto recurse = [&](auto&& self, std::size_t pos, const Series& prefix, int a, int b) -> void {
    if (pos == bulk.size()) {
      std::vector<int> key{std::min(a, b), std::max(a, b)};
      std::vector<int> rest = idx;
      std::sort(rest.begin(), rest.end());
      key.insert(key.end(), rest.begin(), rest.end());
      auto it = t.entries.find(key);
      if (it != t.entries.end()) out += prefix * it->second;
      return;
    }
    for (std::size_t i = 0; i < bulk[pos].size(); ++i) {
      if (bulk[pos][i].is_zero()) continue;
      idx[pos] = static_cast<int>(i);
      Series next = prefix * bulk[pos][i];
      if (!next.is_zero()) self(self, pos + 1, next, a, b);
    }
  };
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a].is_zero()) continue;
    for (std::size_t b = 0; b < y.size(); ++b) {
      if (y[b].is_zero()) continue;
      Series start = x[a] * y[b];
      if (!start.is_zero()) recurse(recurse, 0, start, static_cast<int>(a), static_cast<int>(b));
    }
  }
  return out;
}

// tau(e_a, e_b, p^k) / k! on the point-class family.
Series evaluate_point_exp(const PointTensor& t, int a, int b, const VecSeries& point, int k,
                          const SeriesCaps& caps) {
  Series out(caps);
  if (k > caps.order_cap && zero_constant_term(point)) return out;
  PowerCache powers(point, caps);
  const int lo = std::min(a, b), hi = std::max(a, b);
  for (const auto& [key, val] : t.entries) {
    if (key[0] != lo || key[1] != hi || static_cast<int>(key.size()) != k + 2) continue;
    Series weight = Series::constant(caps, 1);
    for (std::size_t i = 2; i < key.size() && !weight.is_zero();) {
      std::size_t j = i;
      while (j < key.size() && key[j] == key[i]) ++j;
      weight = weight * powers.scaled_power(key[i], static_cast<int>(j - i));
      i = j;
    }
    if (!weight.is_zero()) out += weight * val;
  }
  return out;
}

}  // namespace

ComposedTrace compose_trace(const Trace& tau_w, const Morphism& phi, const SeriesCaps& caps_in) {
  require_arities(tau_w.tau, 0, tau_w.max_arity, "trace");
  require_arities(phi.phi, 0, phi.max_arity, "morphism");
  if (tau_w.dim != phi.target_dim) throw std::invalid_argument("trace and morphism dimensions differ");
  SeriesCaps caps = caps_in.with_vars(phi.source_dim);
  ComposedTrace out{Series(caps), Series(caps), {}};
  VecSeries v = formal_point(phi.source_dim, caps);

  VecSeries w = push_forward(phi, v, caps);
  for (int r = 0; r <= tau_w.max_arity; ++r) {
    out.substitution += evaluate_exp(tau_w.tau.at(r), {}, w, r, caps)[0];
  }

  // Phi_b = phi^b(v, ..., v), homogeneous of degree b.
  const int order = caps.order_cap;
  std::vector<VecSeries> blocks(order + 1);
  for (int b = 1; b <= order; ++b) {
    blocks[b] = b <= phi.max_arity
                    ? evaluate_exp(phi.phi.at(b), {}, v, b, caps)
                    : VecSeries(phi.target_dim, Series(caps));
    for (auto& s : blocks[b]) s *= Rational(static_cast<long>(factorial(b)));
  }
  VecSeries phi0 = curvature(phi, caps);
  const bool curved = !is_zero_vector(phi0);
  std::map<std::vector<int>, Series> by_shape;  // sorted block sizes -> tau value
  for (int n = 0; n <= order; ++n) {
    Series level(caps);
    for (const auto& p : set_partitions(iota_labels(n))) {
      std::vector<int> sizes;
      for (const auto& blk : p) sizes.push_back(static_cast<int>(blk.size()));
      std::sort(sizes.begin(), sizes.end());
      auto it = by_shape.find(sizes);
      if (it == by_shape.end()) {
        Series value(caps);
        const int r = static_cast<int>(sizes.size());
        std::vector<VecSeries> args;
        for (int s : sizes) args.push_back(blocks[s]);
        for (int j = 0; r + j <= tau_w.max_arity; ++j) {
          if (j > 0 && !curved) break;
          Series term = evaluate_multilinear(tau_w.tau.at(r + j), args, caps)[0];
          value += term * Rational(1, static_cast<long>(factorial(j)));
          args.push_back(phi0);
        }
        it = by_shape.emplace(sizes, value).first;
      }
      level += it->second;
    }
    out.partition_sum += level * Rational(1, static_cast<long>(factorial(n)));
  }
  if (auto wit = difference({out.substitution}, {out.partition_sum}, "composed potential")) {
    out.agreement = {false, *wit};
  }
  return out;
}

Trace pullback_trace(const Trace& tau_w, const Morphism& phi, int max_arity, const SeriesCaps& caps_in) {
  require_arities(tau_w.tau, 0, tau_w.max_arity, "trace");
  require_arities(phi.phi, 0, phi.max_arity, "morphism");
  const SeriesCaps caps = caps_in.scalar();
  const int dv = phi.source_dim, dw = phi.target_dim;
  VecSeries phi0 = curvature(phi, caps);
  const bool curved = !is_zero_vector(phi0);

  auto block_value = [&](const std::vector<int>& args) -> VecSeries {
    const int b = static_cast<int>(args.size());
    if (b > phi.max_arity) return VecSeries(dw, Series(caps));
    std::vector<int> key = args;
    std::sort(key.begin(), key.end());
    const VecSeries* v = phi.phi.at(b).find(key);
    if (!v) return VecSeries(dw, Series(caps));
    VecSeries out(dw, Series(caps));
    for (int j = 0; j < dw; ++j) out[j] += (*v)[j];
    return out;
  };
  auto multisets = [dv](int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
      if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
      }
      for (int i = start; i < dv; ++i) {
        cur.push_back(i);
        self(self, i);
        cur.pop_back();
      }
    };
    rec(rec, 0);
    return out;
  };

  Trace out;
  out.dim = dv;
  out.max_arity = max_arity;
  for (int n = 0; n <= max_arity; ++n) {
    SymTensor t{n, 1, {}};
    for (const auto& key : multisets(n)) {
      Series total(caps);
      for (const auto& p : set_partitions(iota_labels(n))) {
        std::vector<VecSeries> args;
        for (const auto& blk : p) {
          std::vector<int> inputs;
          for (int pos : blk) inputs.push_back(key[pos - 1]);
          args.push_back(block_value(inputs));
        }
        const int r = static_cast<int>(args.size());
        for (int j = 0; r + j <= tau_w.max_arity; ++j) {
          if (j > 0 && !curved) break;
          total += evaluate_multilinear(tau_w.tau.at(r + j), args, caps)[0] *
                   Rational(1, static_cast<long>(factorial(j)));
          args.push_back(phi0);
        }
      }
      if (!total.is_zero()) t.add(key, 0, total);
    }
    out.tau[n] = t;
  }
  if (!tau_w.has_point_family()) return out;

  out.pp_max_arity = max_arity;
  for (int m = 2; m <= max_arity; ++m) {
    PointTensor t;
    t.bulk = m - 2;
    for (int a = 0; a < dv; ++a) {
      for (int b = a; b < dv; ++b) {
        for (const auto& bulk : multisets(m - 2)) {
          std::vector<int> inputs{a, b};
          inputs.insert(inputs.end(), bulk.begin(), bulk.end());
          Series total(caps);
          for (const auto& p : set_partitions(iota_labels(m))) {
            // Positions 1 and 2 carry the point classes and must be separated.
            VecSeries x, y;
            std::vector<VecSeries> rest;
            bool separated = true;
            for (const auto& blk : p) {
              std::vector<int> args;
              for (int pos : blk) args.push_back(inputs[pos - 1]);
              bool has1 = std::find(blk.begin(), blk.end(), 1) != blk.end();
              bool has2 = std::find(blk.begin(), blk.end(), 2) != blk.end();
              if (has1 && has2) separated = false;
              if (has1) x = block_value(args);
              else if (has2) y = block_value(args);
              else rest.push_back(block_value(args));
            }
            if (!separated) continue;
            const int r = static_cast<int>(rest.size()) + 2;
            for (int j = 0; r + j <= tau_w.pp_max_arity; ++j) {
              if (j > 0 && !curved) break;
              total += evaluate_point_multilinear(tau_w.tau_pp.at(r + j), x, y, rest, caps) *
                       Rational(1, static_cast<long>(factorial(j)));
              rest.push_back(phi0);
            }
          }
          if (!total.is_zero()) t.add(a, b, bulk, total);
        }
      }
    }
    out.tau_pp[m] = t;
  }
  return out;
}

SeriesMatrix bilinear_form(const Trace& trace, const VecSeries& point, const SeriesCaps& caps) {
  if (!trace.has_point_family()) throw Error(ErrorCode::MissingArity, "trace has no point-class family");
  require_arities(trace.tau_pp, 2, trace.pp_max_arity, "point-class family");
  SeriesMatrix g(trace.dim, std::vector<Series>(trace.dim, Series(caps)));
  for (int a = 0; a < trace.dim; ++a) {
    for (int b = a; b < trace.dim; ++b) {
      Series s(caps);
      for (int m = 2; m <= trace.pp_max_arity; ++m) {
        s += evaluate_point_exp(trace.tau_pp.at(m), a, b, point, m - 2, caps);
      }
      g[a][b] = s;
      g[b][a] = s;
    }
  }
  return g;
}

CheckResult check_isometry(const Trace& tau_v, const Trace& tau_w, const Morphism& phi,
                           const SeriesCaps& caps_in) {
  if (!phi.flat()) {
    throw Error(ErrorCode::CurvedMorphismUnsupported, "isometry check needs a flat morphism");
  }
  if (tau_v.dim != phi.source_dim || tau_w.dim != phi.target_dim) {
    throw std::invalid_argument("trace and morphism dimensions differ");
  }
  const int dv = phi.source_dim;
  SeriesCaps caps = caps_in.with_vars(dv);
  VecSeries v = formal_point(dv, caps);
  SeriesMatrix gv = bilinear_form(tau_v, v, caps);
  VecSeries w = push_forward(phi, v, caps);
  SeriesMatrix gw = bilinear_form(tau_w, w, caps);
  std::vector<VecSeries> d(dv);
  for (int i = 0; i < dv; ++i) d[i] = derivative(phi, v, basis_vector(dv, i, caps), caps);
  for (int a = 0; a < dv; ++a) {
    for (int b = a; b < dv; ++b) {
      Series rhs(caps);
      for (int i = 0; i < phi.target_dim; ++i) {
        if (d[a][i].is_zero()) continue;
        for (int j = 0; j < phi.target_dim; ++j) {
          if (d[b][j].is_zero()) continue;
          rhs += d[a][i] * d[b][j] * gw[i][j];
        }
      }
      if (auto wit = difference({gv[a][b]}, {rhs},
                                "g_V(e" + std::to_string(a) + ",e" + std::to_string(b) + ")")) {
        return {false, *wit};
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Quantum differential equation

namespace {

SeriesMatrix zero_matrix(int d, const SeriesCaps& caps) {
  return SeriesMatrix(d, std::vector<Series>(d, Series(caps)));
}

SeriesMatrix matmul(const SeriesMatrix& a, const SeriesMatrix& b, const SeriesCaps& caps) {
  const int d = static_cast<int>(a.size());
  SeriesMatrix c = zero_matrix(d, caps);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      if (a[i][k].is_zero()) continue;
      for (int j = 0; j < d; ++j) {
        if (!b[k][j].is_zero()) c[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return c;
}

SeriesMatrix rational_matrix(const RatMatrix& m, const SeriesCaps& caps) {
  const int d = static_cast<int>(m.size());
  SeriesMatrix out = zero_matrix(d, caps);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (m[i][j] != 0) out[i][j] = Series::constant(caps, m[i][j]);
    }
  }
  return out;
}

bool all_zero(const SeriesMatrix& m) {
  for (const auto& row : m) {
    for (const auto& s : row) {
      if (!s.is_zero()) return false;
    }
  }
  return true;
}

}  // namespace

SeriesMatrix qde_residual(const SeriesMatrix& M, const SeriesMatrix& sigma) {
  const SeriesCaps caps = sigma.empty() ? SeriesCaps{} : sigma[0][0].caps();
  SeriesMatrix r = matmul(M, sigma, caps);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      r[i][j] = sigma[i][j].q_derivative().hbar_shift(1) - r[i][j];
    }
  }
  return r;
}

QDESolution solve_qde(const CohFTAlgebra& alg, int generator, const SeriesCaps& caps_in) {
  require_arities(alg.mu, 2, 2, "algebra");
  const int d = alg.dim();
  if (generator < 0 || generator >= d) throw std::out_of_range("generator index");
  const SeriesCaps caps = caps_in.scalar();
  const int qcap = caps.q_cap;

  QDESolution sol;
  sol.M = zero_matrix(d, caps);
  std::vector<RatMatrix> Mq(qcap + 1, RatMatrix(d, RatVector(d, 0)));
  for (int j = 0; j < d; ++j) {
    std::vector<int> key{std::min(generator, j), std::max(generator, j)};
    const VecSeries* v = alg.mu.at(2).find(key);
    if (!v) continue;
    for (int i = 0; i < d; ++i) {
      Series entry = (*v)[i].recast(caps);
      sol.M[i][j] = entry;
      for (const auto& [e, c] : entry.terms()) {
        if (e[1] != 0 || e[2] != 0) {
          throw Error(ErrorCode::DegenerateQDE, "structure constants must not involve hbar or log q");
        }
        Mq[e[0]][i][j] += c;
      }
    }
  }
  const RatMatrix& M0 = Mq[0];
  auto rat_mul = [d](const RatMatrix& a, const RatMatrix& b) {
    RatMatrix c(d, RatVector(d, 0));
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        if (a[i][k] != 0)
          for (int j = 0; j < d; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  {
    RatMatrix p = M0;
    for (int k = 1; k < d; ++k) p = rat_mul(p, M0);
    for (const auto& row : p)
      for (const auto& x : row)
        if (x != 0) throw Error(ErrorCode::DegenerateQDE, "classical product by the generator is not nilpotent");
  }

  // S = sum_d q^d S_d with S_0 = I and
  // S_d = sum_k (-1)^k ad^k(R_d) / (hbar d / ell)^{k+1},  ad(X) = X M0 - M0 X.
  SeriesMatrix m0 = rational_matrix(M0, caps);
  std::vector<SeriesMatrix> S(qcap + 1);
  RatMatrix id(d, RatVector(d, 0));
  for (int i = 0; i < d; ++i) id[i][i] = 1;
  S[0] = rational_matrix(id, caps);
  for (int deg = 1; deg <= qcap; ++deg) {
    SeriesMatrix R = zero_matrix(d, caps);
    for (int e = 1; e <= deg; ++e) {
      SeriesMatrix term = matmul(rational_matrix(Mq[e], caps), S[deg - e], caps);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) R[i][j] += term[i][j];
    }
    SeriesMatrix acc = zero_matrix(d, caps);
    SeriesMatrix ad = R;
    const Rational step = ratio(caps.ell, deg);  // 1 / (d / ell)
    for (int k = 0; !all_zero(ad); ++k) {
      if (k > 2 * d + 1) throw Error(ErrorCode::DegenerateQDE, "ad-nilpotency bound exceeded");
      Rational scale = (k % 2 ? -1 : 1);
      for (int p = 0; p <= k; ++p) scale *= step;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) acc[i][j] += (ad[i][j] * scale).hbar_shift(-(k + 1));
      SeriesMatrix left = matmul(ad, m0, caps), right = matmul(m0, ad, caps);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) ad[i][j] = left[i][j] - right[i][j];
    }
    S[deg] = acc;
  }
  sol.S = zero_matrix(d, caps);
  for (int deg = 0; deg <= qcap; ++deg) {
    Series qd = Series::q_term(caps, deg);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (!S[deg][i][j].is_zero()) sol.S[i][j] += S[deg][i][j] * qd;
  }

  // q^{M0/hbar} = sum_k M0^k (log q)^k / (hbar^k k!)
  SeriesMatrix E = zero_matrix(d, caps);
  RatMatrix power = id;
  for (int k = 0; k < d; ++k) {
    Series lk(caps);
    lk.add_term(make_exponent(caps, {}, 0, -k, k), Rational(1, static_cast<long>(factorial(k))));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (power[i][j] != 0) E[i][j] += lk * power[i][j];
    power = rat_mul(power, M0);
  }
  sol.sigma = matmul(sol.S, E, caps);

  SeriesMatrix r = qde_residual(sol.M, sol.sigma);
  for (int i = 0; i < d && sol.residual.ok; ++i) {
    for (int j = 0; j < d; ++j) {
      if (r[i][j].is_zero()) continue;
      const auto& [e, c] = *r[i][j].terms().begin();
      sol.residual = {false, "residual entry (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") has coefficient " + to_string(c) + " at " +
                                 describe_monomial(r[i][j], e)};
      break;
    }
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Standard data

namespace {

std::vector<std::string> power_basis(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(i == 0 ? "1" : i == 1 ? "xi" : "xi^" + std::to_string(i));
  return out;
}

}  // namespace

CohFTAlgebra projective_space(int k, const SeriesCaps& caps_in) {
  const SeriesCaps caps = caps_in.scalar();
  CohFTAlgebra alg;
  alg.basis = power_basis(k);
  alg.max_arity = 2;
  SymTensor mu{2, k, {}};
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      int s = i + j;
      mu.add({i, j}, s % k, Series::q_term(caps, (s / k) * caps.ell));
    }
  }
  alg.mu[2] = mu;
  return alg;
}

CohFTAlgebra truncated_polynomial(int N, const SeriesCaps& caps_in) {
  const SeriesCaps caps = caps_in.scalar();
  CohFTAlgebra alg;
  alg.basis = power_basis(N);
  alg.max_arity = 2;
  SymTensor mu{2, N, {}};
  for (int i = 0; i < N; ++i) {
    for (int j = i; i + j < N; ++j) mu.add({i, j}, i + j, Series::constant(caps, 1));
  }
  alg.mu[2] = mu;
  return alg;
}

Morphism quotient_morphism(int k, int N, const SeriesCaps& caps_in) {
  const SeriesCaps caps = caps_in.scalar();
  Morphism phi;
  phi.source_dim = N;
  phi.target_dim = k;
  phi.max_arity = 1;
  phi.phi[0] = SymTensor{0, k, {}};
  SymTensor lin{1, k, {}};
  for (int m = 0; m < N; ++m) lin.add({m}, m % k, Series::q_term(caps, (m / k) * caps.ell));
  phi.phi[1] = lin;
  return phi;
}

Morphism identity_morphism(int dim, const SeriesCaps& caps_in) {
  const SeriesCaps caps = caps_in.scalar();
  Morphism phi;
  phi.source_dim = phi.target_dim = dim;
  phi.max_arity = 1;
  phi.phi[0] = SymTensor{0, dim, {}};
  SymTensor lin{1, dim, {}};
  for (int i = 0; i < dim; ++i) lin.add({i}, i, Series::constant(caps, 1));
  phi.phi[1] = lin;
  return phi;
}

namespace {

std::vector<std::vector<int>> sorted_multisets(int dim, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < dim; ++i) {
      cur.push_back(i);
      self(self, i);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Small random scalar, occasionally carrying a power of q.
Series random_scalar(std::mt19937_64& rng, const SeriesCaps& caps) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3), qpow(0, 2);
  Series s(caps);
  s.add_term(make_exponent(caps), ratio(num(rng), den(rng)));
  if (caps.q_cap > 0 && qpow(rng) == 0) {
    s.add_term(make_exponent(caps, {}, std::min(caps.q_cap, caps.ell)), ratio(num(rng), den(rng)));
  }
  return s;
}

SymTensor random_tensor(std::mt19937_64& rng, int in_dim, int out_dim, int arity, const SeriesCaps& caps) {
  std::bernoulli_distribution keep(0.6);
  SymTensor t{arity, out_dim, {}};
  for (const auto& key : sorted_multisets(in_dim, arity)) {
    for (int o = 0; o < out_dim; ++o) {
      if (keep(rng)) t.add(key, o, random_scalar(rng, caps));
    }
  }
  return t;
}

}  // namespace

CohFTAlgebra random_algebra(std::uint64_t seed, int dim, int max_arity, const SeriesCaps& caps_in) {
  const SeriesCaps caps = caps_in.scalar();
  std::mt19937_64 rng(seed);
  CohFTAlgebra alg;
  for (int i = 0; i < dim; ++i) alg.basis.push_back("e" + std::to_string(i));
  alg.max_arity = max_arity;
  for (int n = 2; n <= max_arity; ++n) alg.mu[n] = random_tensor(rng, dim, dim, n, caps);
  return alg;
}

Morphism random_flat_morphism(std::uint64_t seed, int source_dim, int target_dim, int max_arity,
                              const SeriesCaps& caps_in) {
  const SeriesCaps caps = caps_in.scalar();
  std::mt19937_64 rng(seed);
  Morphism phi;
  phi.source_dim = source_dim;
  phi.target_dim = target_dim;
  phi.max_arity = max_arity;
  phi.phi[0] = SymTensor{0, target_dim, {}};
  for (int n = 1; n <= max_arity; ++n) phi.phi[n] = random_tensor(rng, source_dim, target_dim, n, caps);
  return phi;
}

Trace random_trace(std::uint64_t seed, int dim, int max_arity, const SeriesCaps& caps_in) {
  const SeriesCaps caps = caps_in.scalar();
  std::mt19937_64 rng(seed);
  Trace t;
  t.dim = dim;
  t.max_arity = max_arity;
  for (int n = 0; n <= max_arity; ++n) t.tau[n] = random_tensor(rng, dim, 1, n, caps);
  if (max_arity < 2) return t;
  std::bernoulli_distribution keep(0.6);
  t.pp_max_arity = max_arity;
  for (int m = 2; m <= max_arity; ++m) {
    PointTensor p;
    p.bulk = m - 2;
    for (int a = 0; a < dim; ++a) {
      for (int b = a; b < dim; ++b) {
        for (const auto& bulk : sorted_multisets(dim, m - 2)) {
          if (keep(rng)) p.add(a, b, bulk, random_scalar(rng, caps));
        }
      }
    }
    t.tau_pp[m] = p;
  }
  return t;
}

}  // namespace moduli

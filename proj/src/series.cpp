#include "moduli/series.hpp"

#include <omp.h>

#include <sstream>
#include <stdexcept>

#include "moduli/error.hpp"

namespace moduli {

namespace {

constexpr int kQ = 0, kHbar = 1, kLog = 2;  // offsets after the t-variables

int slot(const SeriesCaps& caps, int which) { return caps.vars + which; }

// Caps of a binary operation. A scalar operand adopts the other's layout.
SeriesCaps combined(const SeriesCaps& a, const SeriesCaps& b) {
  if (a.ell != b.ell) throw std::invalid_argument("series with different q denominators");
  if (a.vars != b.vars && a.vars != 0 && b.vars != 0) {
    throw std::invalid_argument("series over different variable sets");
  }
  SeriesCaps c = a.vars >= b.vars ? a : b;
  if (a.vars == b.vars) c.order_cap = std::min(a.order_cap, b.order_cap);
  c.q_cap = std::min(a.q_cap, b.q_cap);
  return c;
}

Exponent lift(const Exponent& e, int from_vars, int to_vars) {
  if (from_vars == to_vars) return e;
  Exponent out(to_vars + 3, 0);
  for (int i = 0; i < 3; ++i) out[to_vars + i] = e[from_vars + i];
  return out;
}

}  // namespace

Exponent make_exponent(const SeriesCaps& caps, const std::vector<int>& t, int q, int hbar, int logq) {
  Exponent e(caps.vars + 3, 0);
  for (std::size_t i = 0; i < t.size(); ++i) e[i] = t[i];
  e[slot(caps, kQ)] = q;
  e[slot(caps, kHbar)] = hbar;
  e[slot(caps, kLog)] = logq;
  return e;
}

Series Series::constant(const SeriesCaps& caps, const Rational& c) {
  Series s(caps);
  s.add_term(make_exponent(caps), c);
  return s;
}

Series Series::variable(const SeriesCaps& caps, int index, const Rational& c) {
  if (index < 0 || index >= caps.vars) throw std::out_of_range("series variable index");
  Series s(caps);
  Exponent e = make_exponent(caps);
  e[index] = 1;
  s.add_term(e, c);
  return s;
}

Series Series::q_term(const SeriesCaps& caps, int units, const Rational& c, int hbar) {
  Series s(caps);
  s.add_term(make_exponent(caps, {}, units, hbar), c);
  return s;
}

Rational Series::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Series::t_degree(const Exponent& e) const {
  int d = 0;
  for (int i = 0; i < caps_.vars; ++i) d += e[i];
  return d;
}

bool Series::within_caps(const Exponent& e) const {
  return t_degree(e) <= caps_.order_cap && e[slot(caps_, kQ)] <= caps_.q_cap;
}

void Series::add_term(const Exponent& e, const Rational& c) {
  if (c == 0 || !within_caps(e)) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Series Series::operator-() const {
  Series s = *this;
  for (auto& [e, c] : s.terms_) c = -c;
  return s;
}

Series& Series::operator+=(const Series& other) {
  if (other.is_zero()) return *this;
  if (terms_.empty() && !(caps_.vars > other.caps_.vars && caps_.ell == other.caps_.ell)) {
    *this = other;
    return *this;
  }
  SeriesCaps c = combined(caps_, other.caps_);
  if (c.vars != caps_.vars) *this = recast(c);
  caps_ = c;
  for (const auto& [e, v] : other.terms_) add_term(lift(e, other.caps_.vars, c.vars), v);
  return *this;
}

Series& Series::operator-=(const Series& other) { return *this += -other; }

Series& Series::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

namespace {

void accumulate_products(const std::vector<std::pair<Exponent, Rational>>& a, std::size_t begin,
                         std::size_t end, const std::vector<std::pair<Exponent, Rational>>& b,
                         Series& out) {
  Exponent e(out.caps().vars + 3);
  for (std::size_t i = begin; i < end; ++i) {
    for (const auto& [eb, cb] : b) {
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = a[i].first[k] + eb[k];
      out.add_term(e, a[i].second * cb);
    }
  }
}

std::vector<std::pair<Exponent, Rational>> lifted_terms(const Series& s, int vars) {
  std::vector<std::pair<Exponent, Rational>> out;
  out.reserve(s.size());
  for (const auto& [e, c] : s.terms()) out.emplace_back(lift(e, s.caps().vars, vars), c);
  return out;
}

}  // namespace

Series multiply_serial(const Series& a, const Series& b) {
  SeriesCaps c = combined(a.caps(), b.caps());
  Series out(c);
  auto ta = lifted_terms(a, c.vars);
  auto tb = lifted_terms(b, c.vars);
  accumulate_products(ta, 0, ta.size(), tb, out);
  return out;
}

Series operator*(const Series& a, const Series& b) {
  if (a.size() * b.size() < kParallelProductThreshold) return multiply_serial(a, b);
  SeriesCaps c = combined(a.caps(), b.caps());
  auto ta = lifted_terms(a, c.vars);
  auto tb = lifted_terms(b, c.vars);
  const int threads = omp_get_max_threads();
  std::vector<Series> partial(threads, Series(c));
  #pragma omp parallel num_threads(threads)
  {
    const int id = omp_get_thread_num();
    const std::size_t chunk = (ta.size() + threads - 1) / threads;
    const std::size_t begin = std::min(ta.size(), id * chunk);
    const std::size_t end = std::min(ta.size(), begin + chunk);
    accumulate_products(ta, begin, end, tb, partial[id]);
  }
  Series out(c);
  for (const auto& p : partial) out += p;
  return out;
}

Series Series::derivative(int index) const {
  if (index < 0 || index >= caps_.vars) throw std::out_of_range("series variable index");
  Series s(caps_);
  for (const auto& [key, c] : terms_) {
    Exponent e = key;
    if (e[index] == 0) continue;
    Rational k = e[index];
    e[index] -= 1;
    s.add_term(e, c * k);
  }
  return s;
}

Series Series::q_derivative() const {
  Series s(caps_);
  const int qs = slot(caps_, kQ), ls = slot(caps_, kLog);
  for (const auto& [key, c] : terms_) {
    Exponent e = key;
    if (e[qs] != 0) s.add_term(e, c * ratio(e[qs], caps_.ell));
    if (e[ls] > 0) {
      Rational k = e[ls];
      e[ls] -= 1;
      s.add_term(e, c * k);
    }
  }
  return s;
}

Series Series::hbar_shift(int k) const {
  Series s(caps_);
  for (const auto& [key, c] : terms_) {
    Exponent e = key;
    e[slot(caps_, kHbar)] += k;
    s.terms_.emplace(e, c);
  }
  return s;
}

Series Series::homogeneous_part(int d) const {
  Series s(caps_);
  for (const auto& [e, c] : terms_) {
    if (t_degree(e) == d) s.terms_.emplace(e, c);
  }
  return s;
}

Series Series::recast(const SeriesCaps& caps) const {
  if (caps.ell != caps_.ell) throw std::invalid_argument("recast across q denominators");
  if (caps.vars != caps_.vars && caps_.vars != 0) {
    throw std::invalid_argument("recast changes the variable set");
  }
  Series s(caps);
  for (const auto& [e, c] : terms_) s.add_term(lift(e, caps_.vars, caps.vars), c);
  return s;
}

Series Series::substitute(const std::vector<Series>& values) const {
  if (static_cast<int>(values.size()) != caps_.vars) {
    throw std::invalid_argument("substitute: one value per variable required");
  }
  if (values.empty()) return *this;
  SeriesCaps target = values.front().caps();
  for (const auto& v : values) {
    for (const auto& [e, c] : v.terms()) {
      if (v.t_degree(e) == 0) {
        throw Error(ErrorCode::CapExceeded,
                    "substituted value has a constant term; the result is not determined by the caps");
      }
    }
  }
  // Powers of each value, built on demand.
  std::vector<std::vector<Series>> powers(values.size());
  auto power = [&](std::size_t i, int k) -> const Series& {
    auto& p = powers[i];
    if (p.empty()) p.push_back(Series::constant(target, 1));
    while (static_cast<int>(p.size()) <= k) p.push_back(p.back() * values[i]);
    return p[k];
  };
  Series out(target);
  for (const auto& [e, c] : terms_) {
    Series term(target.scalar());
    term.add_term(make_exponent(target.scalar(), {}, e[slot(caps_, kQ)], e[slot(caps_, kHbar)],
                                e[slot(caps_, kLog)]),
                  c);
    Series prod = term.recast(target);
    for (int i = 0; i < caps_.vars && !prod.is_zero(); ++i) {
      if (e[i] > 0) prod = prod * power(i, e[i]);
    }
    out += prod;
  }
  return out;
}

std::string Series::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::vector<std::string> factors;
    for (int i = 0; i < caps_.vars; ++i) {
      if (e[i] == 0) continue;
      std::string name = i < static_cast<int>(names.size()) ? names[i] : "t" + std::to_string(i + 1);
      factors.push_back(e[i] == 1 ? name : name + "^" + std::to_string(e[i]));
    }
    int q = e[slot(caps_, kQ)], h = e[slot(caps_, kHbar)], l = e[slot(caps_, kLog)];
    if (q != 0) {
      Rational qe(q, caps_.ell);
      qe.canonicalize();
      std::string qs = moduli::to_string(qe);
      factors.push_back(qe == 1 ? "q" : (qe.get_den() == 1 ? "q^" + qs : "q^(" + qs + ")"));
    }
    if (h != 0) factors.push_back(h == 1 ? "hbar" : "hbar^" + std::to_string(h));
    if (l != 0) factors.push_back(l == 1 ? "logq" : "logq^" + std::to_string(l));
    Rational mag = abs(c);
    bool negative = c < 0;
    if (!first) os << (negative ? " - " : " + ");
    else if (negative) os << "-";
    first = false;
    if (factors.empty()) {
      os << moduli::to_string(mag);
      continue;
    }
    if (mag != 1) os << moduli::to_string(mag) << "*";
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
  }
  return os.str();
}

}  // namespace moduli

#include "moduli/kirwan.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "moduli/error.hpp"
#include "moduli/partitions.hpp"

namespace moduli {

namespace {

Rational pairing(const IntVector& mu, const Degree& d) {
  Rational p = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) p += Rational(mu[i]) * d[i];
  return p;
}

std::vector<RatVector> weight_vectors(const TorusAction& action, const std::vector<int>& idx) {
  std::vector<RatVector> out;
  for (int j : idx) out.push_back(to_rational(action.weights[j]));
  return out;
}

IntMatrix weight_matrix(const TorusAction& action, const std::vector<int>& idx) {
  IntMatrix m;
  for (int j : idx) m.push_back(action.weights[j]);
  return m;
}

void require_degree(const TorusAction& action, const Degree& d) {
  if (static_cast<int>(d.size()) != action.rank) {
    throw Error(ErrorCode::InvalidAction, "degree has " + std::to_string(d.size()) +
                                              " coordinates, torus rank is " + std::to_string(action.rank));
  }
}

std::vector<long> split_longs(const std::string& text, char sep) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    Rational r = parse_rational(item);
    if (!is_integer(r)) throw Error(ErrorCode::ParseError, "weight '" + item + "' is not an integer");
    out.push_back(to_long(r.get_num()));
  }
  return out;
}

}  // namespace

void validate_action(const TorusAction& action) {
  if (action.rank < 1) throw Error(ErrorCode::InvalidAction, "torus rank must be positive");
  if (action.weights.empty()) throw Error(ErrorCode::InvalidAction, "no weights");
  for (const auto& mu : action.weights) {
    if (static_cast<int>(mu.size()) != action.rank) {
      throw Error(ErrorCode::InvalidAction, "weight of wrong length");
    }
  }
  if (static_cast<int>(action.theta.size()) != action.rank) {
    throw Error(ErrorCode::InvalidAction, "theta of wrong length");
  }
  std::vector<int> all(action.k());
  for (int j = 0; j < action.k(); ++j) all[j] = j;
  if (!half_space_witness(weight_vectors(action, all), action.rank)) {
    throw Error(ErrorCode::InvalidAction, "weights do not lie in an open half-space");
  }
}

TorusAction rank_one_action(const std::vector<long>& weights, const Rational& theta) {
  TorusAction a;
  a.rank = 1;
  for (long w : weights) a.weights.push_back({Integer(w)});
  a.theta = {theta};
  validate_action(a);
  return a;
}

TorusAction parse_action(const std::string& weights, const std::string& theta) {
  TorusAction a;
  std::stringstream ss(weights);
  std::string item;
  while (std::getline(ss, item, ',')) {
    IntVector mu;
    for (long x : split_longs(item, ':')) mu.push_back(Integer(x));
    a.weights.push_back(mu);
  }
  if (a.weights.empty()) throw Error(ErrorCode::ParseError, "empty weight list");
  a.rank = static_cast<int>(a.weights.front().size());
  std::stringstream ts(theta);
  while (std::getline(ts, item, ':')) a.theta.push_back(parse_rational(item));
  validate_action(a);
  return a;
}

RatVector pairings(const TorusAction& action, const Degree& d) {
  require_degree(action, d);
  RatVector out;
  for (const auto& mu : action.weights) out.push_back(pairing(mu, d));
  return out;
}

bool is_semistable(const std::vector<int>& support, const TorusAction& action) {
  for (int j : support) {
    if (j < 0 || j >= action.k()) throw Error(ErrorCode::InvalidAction, "support index out of range");
  }
  return in_rational_cone(weight_vectors(action, support), action.theta);
}

bool check_stable_equals_semistable(const TorusAction& action) {
  validate_action(action);
  std::vector<int> all(action.k());
  for (int j = 0; j < action.k(); ++j) all[j] = j;
  // A strictly semistable point or a point with positive-dimensional
  // stabilizer has coordinate support T with theta in Cone(mu_T) and mu_T not
  // spanning. Checking every T covers both.
  for (const auto& t : subsets(all, 0)) {
    if (!is_semistable(t, action)) continue;
    if (matrix_rank(weight_matrix(action, t), action.rank) < action.rank) return false;
  }
  return true;
}

Integer map_space_dimension(const TorusAction& action, const Degree& d) {
  Integer dim = 0;
  for (const auto& p : pairings(action, d)) {
    if (p >= 0) dim += floor(p) + 1;
  }
  return dim;
}

bool SectorElement::twisted() const {
  return std::any_of(exp_d.begin(), exp_d.end(), [](const Rational& x) { return x != 0; });
}

std::string SectorElement::label() const {
  if (!twisted()) return "1";
  if (exp_d.size() == 1) {
    const Rational& e = exp_d[0];
    std::string s = "1_Z" + e.get_den().get_str();
    if (e.get_num() != 1) s += "^" + e.get_num().get_str();
    return s;
  }
  std::string s = "1_exp(";
  for (std::size_t i = 0; i < exp_d.size(); ++i) s += (i ? "," : "") + to_string(exp_d[i]);
  return s + ")";
}

SectorElement sector(const TorusAction& action, const Degree& d) {
  validate_action(action);
  RatVector p = pairings(action, d);
  SectorElement s;
  for (const auto& x : d) s.exp_d.push_back(frac(x));
  std::vector<int> nonneg;
  for (int j = 0; j < action.k(); ++j) {
    if (is_integer(p[j])) {
      s.support.push_back(j);
      if (p[j] >= 0) nonneg.push_back(j);
    }
  }
  if (!is_semistable(s.support, action)) {
    std::string sup;
    for (int j : s.support) sup += (sup.empty() ? "" : ",") + std::to_string(j + 1);
    throw Error(ErrorCode::EmptySector, "theta is not in the cone of weights {" + sup + "}");
  }
  SmithForm f = smith_normal_form(weight_matrix(action, nonneg), action.rank);
  if (f.rank < action.rank) {
    s.stabilizer_order = 0;  // infinite stabilizer
  } else {
    s.stabilizer_order = 1;
    for (const auto& x : f.diagonal) s.stabilizer_order *= x;
  }
  return s;
}

std::string q_power_string(const Rational& d) {
  if (d == 0) return "1";
  if (d == 1) return "q";
  if (is_integer(d) && d > 0) return "q^" + to_string(d);
  return "q^(" + to_string(d) + ")";
}

namespace {

std::string xi_monomial(const Integer& scalar, const Integer& power) {
  std::string xi = power == 0 ? "" : power == 1 ? "xi" : "xi^" + power.get_str();
  if (xi.empty()) return scalar.get_str();
  if (scalar == 1) return xi;
  return scalar.get_str() + "*" + xi;
}

std::string value_string(const Rational& coef, const Rational& q, const SectorElement& s) {
  if (coef == 0) return "0";
  std::vector<std::string> factors;
  if (q != 0) factors.push_back(q_power_string(q));
  if (s.twisted()) factors.push_back(s.label());
  std::string body;
  for (std::size_t i = 0; i < factors.size(); ++i) body += (i ? "*" : "") + factors[i];
  Rational abs_c = abs(coef);
  std::string sign = coef < 0 ? "-" : "";
  if (body.empty()) return sign + to_string(abs_c);
  if (abs_c.get_num() != 1) body = abs_c.get_num().get_str() + "*" + body;
  if (abs_c.get_den() != 1) body += "/" + abs_c.get_den().get_str();
  return sign + body;
}

}  // namespace

std::string KirwanRelation::relation_string() const {
  return xi_monomial(scalar, xi_power) + " = " + value_string(count, d.size() == 1 ? d[0] : Rational(0), sector);
}

Rational KirwanRelation::kappa_coefficient() const {
  if (scalar == 0) return 0;
  Rational c = count / Rational(scalar);
  c.canonicalize();
  return c;
}

std::string KirwanRelation::kappa_string() const {
  return "D0kappa(" + xi_monomial(1, xi_power) + ") = " +
         value_string(kappa_coefficient(), d.size() == 1 ? d[0] : Rational(0), sector);
}

bool KirwanRelation::dimension_consistent() const {
  Integer total = free_coefficients;
  for (const auto& x : c) total += x;
  return total == map_dimension;
}

KirwanRelation kirwan_count(const TorusAction& action, const Degree& d) {
  validate_action(action);
  if (action.rank != 1) throw Error(ErrorCode::RankUnsupported, "counting is implemented for rank one only");
  require_degree(action, d);
  if (!check_stable_equals_semistable(action)) {
    throw Error(ErrorCode::UnstableSector, "stable and semistable loci differ for this theta");
  }
  KirwanRelation rel;
  rel.d = d;
  rel.map_dimension = map_space_dimension(action, d);
  RatVector p = pairings(action, d);
  rel.sector = sector(action, d);
  rel.scalar = 1;
  rel.xi_power = 0;
  rel.free_coefficients = 0;
  for (int j = 0; j < action.k(); ++j) {
    // c_j = #{m in Z : 0 <= m < p_j}
    Integer cj = p[j] > 0 ? ceil(p[j]) : Integer(0);
    rel.c.push_back(cj);
    rel.xi_power += cj;
    Integer mu_pow;
    mpz_pow_ui(mu_pow.get_mpz_t(), action.weights[j][0].get_mpz_t(), cj.get_ui());
    rel.scalar *= mu_pow;
    if (is_integer(p[j]) && p[j] >= 0) rel.free_coefficients += 1;
  }
  auto bad = std::find_if(p.begin(), p.end(), [](const Rational& x) { return x <= 0; });
  if (bad != p.end()) {
    rel.count = 0;
    rel.reason = std::string(to_string(ErrorCode::NonPositivePairing)) + ": pairing " + to_string(*bad) +
                 " at weight " + std::to_string((bad - p.begin()) + 1);
    return rel;
  }
  rel.count = 1;
  if (!rel.dimension_consistent()) {
    throw std::logic_error("kirwan_count: constraint count does not match the map space dimension");
  }
  return rel;
}

Presentation qh_presentation(const TorusAction& action, const Rational& degree_bound) {
  validate_action(action);
  if (action.rank != 1) throw Error(ErrorCode::RankUnsupported, "presentations are implemented for rank one only");
  Presentation out;
  Integer ell = 1;
  for (const auto& mu : action.weights) ell = lcm(ell, abs(mu[0]));
  out.ell = static_cast<int>(to_long(ell));
  // Degrees pair positively with the weights only on the side of theta.
  const int sign = action.weights[0][0] > 0 ? 1 : -1;
  std::map<Rational, bool> seen_sector;
  Integer steps = floor(degree_bound * Rational(ell));
  for (Integer m = 1; m <= steps; ++m) {
    Rational d(m * sign, ell);
    d.canonicalize();
    Rational key = frac(d);
    if (seen_sector.count(key)) continue;
    try {
      KirwanRelation rel = kirwan_count(action, {d});
      seen_sector[key] = true;
      if (out.presentation.empty() && !rel.sector.twisted() && rel.count != 0) {
        out.presentation = rel.relation_string();
      }
      out.relations.push_back(std::move(rel));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptySector) throw;
      out.skipped.push_back("d=" + to_string(d) + " " + e.what());
    }
  }
  return out;
}

}  // namespace moduli

#include "moduli/cohft_io.hpp"

#include <algorithm>

#include "moduli/error.hpp"

namespace moduli {

using nlohmann::json;

namespace {

std::string as_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw Error(ErrorCode::ParseError, "expected a rational string, got " + j.dump());
}

int q_units(const Rational& q, const SeriesCaps& caps) {
  Rational u = q * caps.ell;
  if (!is_integer(u) || u < 0) {
    throw Error(ErrorCode::ParseError,
                "q exponent " + to_string(q) + " is not a nonnegative multiple of 1/" + std::to_string(caps.ell));
  }
  return static_cast<int>(to_long(u.get_num()));
}

int get_int(const json& j, const char* key, int fallback) {
  return j.contains(key) ? j.at(key).get<int>() : fallback;
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

SymTensor tensor_from_json(const json& list, int arity, int out_dim, const SeriesCaps& caps) {
  SymTensor t{arity, out_dim, {}};
  for (const auto& entry : list) {
    auto in = entry.at("in").get<std::vector<int>>();
    if (static_cast<int>(in.size()) != arity) {
      throw Error(ErrorCode::ParseError, "entry " + entry.dump() + " has the wrong arity");
    }
    if (entry.contains("value")) {
      t.add(in, 0, scalar_from_json(entry["value"], caps));
      continue;
    }
    for (const auto& [k, v] : entry.at("out").items()) t.add(in, std::stoi(k), scalar_from_json(v, caps));
  }
  return t;
}

json tensor_to_json(const SymTensor& t, bool scalar_valued) {
  json list = json::array();
  for (const auto& [key, vals] : t.entries) {
    if (std::all_of(vals.begin(), vals.end(), [](const Series& v) { return v.is_zero(); })) continue;
    json e{{"in", key}};
    if (scalar_valued) {
      e["value"] = to_json(vals[0]);
    } else {
      e["out"] = json::object();
      for (std::size_t o = 0; o < vals.size(); ++o) {
        if (!vals[o].is_zero()) e["out"][std::to_string(o)] = to_json(vals[o]);
      }
    }
    list.push_back(e);
  }
  return list;
}

}  // namespace

Series scalar_from_json(const json& j, const SeriesCaps& caps_in) {
  const SeriesCaps caps = caps_in.scalar();
  return guarded([&] {
    Series s(caps);
    if (j.is_string() || j.is_number_integer()) {
      s.add_term(make_exponent(caps), parse_rational(as_string(j)));
      return s;
    }
    if (!j.is_array()) throw Error(ErrorCode::ParseError, "bad scalar " + j.dump());
    for (const auto& term : j) {
      if (term.is_array()) {
        Rational c = parse_rational(as_string(term.at(0)));
        Rational q = term.size() > 1 ? parse_rational(as_string(term.at(1))) : Rational(0);
        s.add_term(make_exponent(caps, {}, q_units(q, caps)), c);
      } else {
        Rational c = parse_rational(as_string(term.at("c")));
        Rational q = term.contains("q") ? parse_rational(as_string(term["q"])) : Rational(0);
        s.add_term(make_exponent(caps, {}, q_units(q, caps), get_int(term, "hbar", 0),
                                 get_int(term, "logq", 0)),
                   c);
      }
    }
    return s;
  });
}

json to_json(const Series& s) {
  json list = json::array();
  const int m = s.caps().vars;
  for (const auto& [e, c] : s.terms()) {
    json t{{"c", to_string(c)}};
    if (m > 0) t["t"] = std::vector<int>(e.begin(), e.begin() + m);
    Rational q(e[m], s.caps().ell);
    q.canonicalize();
    t["q"] = to_string(q);
    t["hbar"] = e[m + 1];
    t["logq"] = e[m + 2];
    list.push_back(t);
  }
  return list;
}

Series series_from_json(const json& j, const SeriesCaps& caps) {
  return guarded([&] {
    Series s(caps);
    for (const auto& t : j) {
      std::vector<int> tv = t.contains("t") ? t["t"].get<std::vector<int>>() : std::vector<int>{};
      Rational q = parse_rational(as_string(t.at("q")));
      s.add_term(make_exponent(caps, tv, q_units(q, caps), get_int(t, "hbar", 0), get_int(t, "logq", 0)),
                 parse_rational(as_string(t.at("c"))));
    }
    return s;
  });
}

CohFTAlgebra algebra_from_json(const json& j, const SeriesCaps& caps) {
  return guarded([&] {
    CohFTAlgebra alg;
    alg.basis = j.at("basis").get<std::vector<std::string>>();
    alg.max_arity = get_int(j, "max_arity", 2);
    for (const auto& [k, list] : j.at("mu").items()) {
      int n = std::stoi(k);
      alg.mu[n] = tensor_from_json(list, n, alg.dim(), caps);
    }
    return alg;
  });
}

Morphism morphism_from_json(const json& j, const SeriesCaps& caps) {
  return guarded([&] {
    Morphism phi;
    phi.source_dim = j.at("source_dim").get<int>();
    phi.target_dim = j.at("target_dim").get<int>();
    phi.max_arity = get_int(j, "max_arity", 1);
    for (const auto& [k, list] : j.at("phi").items()) {
      int n = std::stoi(k);
      phi.phi[n] = tensor_from_json(list, n, phi.target_dim, caps);
    }
    // An omitted curvature means a flat morphism.
    if (!phi.phi.count(0)) phi.phi[0] = SymTensor{0, phi.target_dim, {}};
    return phi;
  });
}

Trace trace_from_json(const json& j, const SeriesCaps& caps_in) {
  const SeriesCaps caps = caps_in.scalar();
  return guarded([&] {
    Trace t;
    t.dim = j.at("dim").get<int>();
    t.max_arity = get_int(j, "max_arity", 0);
    if (j.contains("tau")) {
      for (const auto& [k, list] : j["tau"].items()) {
        int n = std::stoi(k);
        t.tau[n] = tensor_from_json(list, n, 1, caps);
      }
    }
    if (j.contains("tau_pp")) {
      t.pp_max_arity = get_int(j, "pp_max_arity", -1);
      for (const auto& [k, list] : j["tau_pp"].items()) {
        int m = std::stoi(k);
        PointTensor p;
        p.bulk = m - 2;
        for (const auto& e : list) {
          auto pts = e.at("points").get<std::vector<int>>();
          if (pts.size() != 2) throw Error(ErrorCode::ParseError, "points must be a pair");
          p.add(pts[0], pts[1], e.at("bulk").get<std::vector<int>>(), scalar_from_json(e.at("value"), caps));
        }
        t.tau_pp[m] = p;
      }
    }
    return t;
  });
}

json to_json(const CohFTAlgebra& alg) {
  json j{{"basis", alg.basis}, {"max_arity", alg.max_arity}, {"mu", json::object()}};
  for (const auto& [n, t] : alg.mu) j["mu"][std::to_string(n)] = tensor_to_json(t, false);
  return j;
}

json to_json(const Morphism& phi) {
  json j{{"source_dim", phi.source_dim},
         {"target_dim", phi.target_dim},
         {"max_arity", phi.max_arity},
         {"phi", json::object()}};
  for (const auto& [n, t] : phi.phi) j["phi"][std::to_string(n)] = tensor_to_json(t, false);
  return j;
}

json to_json(const Trace& trace) {
  json j{{"dim", trace.dim}, {"max_arity", trace.max_arity}, {"tau", json::object()}};
  for (const auto& [n, t] : trace.tau) j["tau"][std::to_string(n)] = tensor_to_json(t, true);
  if (trace.has_point_family()) {
    j["pp_max_arity"] = trace.pp_max_arity;
    j["tau_pp"] = json::object();
    for (const auto& [m, p] : trace.tau_pp) {
      json list = json::array();
      for (const auto& [key, v] : p.entries) {
        if (v.is_zero()) continue;
        list.push_back({{"points", {key[0], key[1]}},
                        {"bulk", std::vector<int>(key.begin() + 2, key.end())},
                        {"value", to_json(v)}});
      }
      j["tau_pp"][std::to_string(m)] = list;
    }
  }
  return j;
}

CohFTSpec spec_from_json(const json& j) {
  return guarded([&] {
    CohFTSpec spec;
    spec.caps.ell = get_int(j, "ell", 1);
    spec.caps.order_cap = get_int(j, "order", 3);
    Rational qcap = j.contains("q_cap") ? parse_rational(as_string(j["q_cap"])) : Rational(2);
    spec.caps.q_cap = q_units(qcap, spec.caps);
    if (j.contains("V")) spec.V = algebra_from_json(j["V"], spec.caps);
    if (j.contains("W")) spec.W = algebra_from_json(j["W"], spec.caps);
    if (j.contains("phi")) spec.phi = morphism_from_json(j["phi"], spec.caps);
    if (j.contains("tau_V")) spec.tau_V = trace_from_json(j["tau_V"], spec.caps);
    if (j.contains("tau_W")) spec.tau_W = trace_from_json(j["tau_W"], spec.caps);
    spec.generator = get_int(j, "generator", 1);
    return spec;
  });
}

CohFTSpec builtin_spec(const std::string& name, int order, int q_cap) {
  auto colon = name.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "builtin must look like proj:K");
  std::string family = name.substr(0, colon);
  int k = 0;
  try {
    k = std::stoi(name.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad builtin size in '" + name + "'");
  }
  if (k < 2) throw Error(ErrorCode::ParseError, "builtin size must be at least 2");
  CohFTSpec spec;
  spec.caps = {0, 1, order, q_cap};
  if (family == "proj") {
    spec.V = projective_space(k, spec.caps);
    spec.W = spec.V;
    spec.phi = identity_morphism(k, spec.caps);
  } else if (family == "quotient") {
    spec.caps.order_cap = 0;
    int N = k * (q_cap + 1);
    spec.V = truncated_polynomial(N, spec.caps);
    spec.W = projective_space(k, spec.caps);
    spec.phi = quotient_morphism(k, N, spec.caps);
  } else {
    throw Error(ErrorCode::ParseError, "unknown builtin family '" + family + "'");
  }
  return spec;
}

}  // namespace moduli

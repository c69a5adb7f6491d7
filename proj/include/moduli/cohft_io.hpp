#pragma once

// JSON forms of series and CohFT data. Rationals are "p/q" strings.
//
// scalar:    "3/2" | [["coef", "q-exponent"], ...] | [{"c": .., "q": .., "hbar": ..}, ...]
// algebra:   {"basis": [...], "max_arity": n, "mu": {"2": [{"in": [i, j], "out": {"k": scalar}}]}}
// morphism:  {"source_dim", "target_dim", "max_arity", "phi": {"1": [{"in": [i], "out": {...}}]}}
// trace:     {"dim", "max_arity", "tau": {"0": [{"in": [], "value": scalar}]},
//             "pp_max_arity", "tau_pp": {"2": [{"points": [a, b], "bulk": [], "value": scalar}]}}

#include <optional>
#include <string>

#include <json.hpp>

#include "moduli/cohft.hpp"

namespace moduli {

Series scalar_from_json(const nlohmann::json& j, const SeriesCaps& caps);
nlohmann::json to_json(const Series& s);
/// Inverse of to_json(Series).
Series series_from_json(const nlohmann::json& j, const SeriesCaps& caps);

CohFTAlgebra algebra_from_json(const nlohmann::json& j, const SeriesCaps& caps);
Morphism morphism_from_json(const nlohmann::json& j, const SeriesCaps& caps);
Trace trace_from_json(const nlohmann::json& j, const SeriesCaps& caps);
nlohmann::json to_json(const CohFTAlgebra& alg);
nlohmann::json to_json(const Morphism& phi);
nlohmann::json to_json(const Trace& trace);

/// Problem file: {"ell", "order", "q_cap", "V", "W", "phi", "tau_V", "tau_W", "generator"}.
struct CohFTSpec {
  SeriesCaps caps;
  std::optional<CohFTAlgebra> V, W;
  std::optional<Morphism> phi;
  std::optional<Trace> tau_V, tau_W;
  int generator = 1;
};

CohFTSpec spec_from_json(const nlohmann::json& j);

/// Built-in problems: "proj:K" (small quantum P^{K-1} as V and W with the
/// identity), "quotient:K" (Q[xi]/(xi^{K(Q+1)}) -> P^{K-1}).
CohFTSpec builtin_spec(const std::string& name, int order, int q_cap);

}  // namespace moduli

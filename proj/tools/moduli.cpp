// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "moduli/acceptance.hpp"
#include "moduli/cohft.hpp"
#include "moduli/cohft_io.hpp"
#include "moduli/cone.hpp"
#include "moduli/divisors.hpp"
#include "moduli/error.hpp"
#include "moduli/graph_io.hpp"
#include "moduli/kirwan.hpp"
#include "moduli/strata.hpp"

using nlohmann::json;
using namespace moduli;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

json int_vector_json(const IntVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

std::string int_vector_text(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

json matrix_json(const SeriesMatrix& m) {
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& s : row) r.push_back(to_json(s));
    rows.push_back(r);
  }
  return rows;
}

void print_matrix(const std::string& name, const SeriesMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      std::cout << name << "[" << i << "][" << j << "] = " << m[i][j].to_string() << "\n";
    }
  }
}

// ---------------------------------------------------------------------------
// strata

struct StrataOptions {
  std::string space = "mult";
  int n = 2;
  bool json_out = false;
  std::string dot;
  bool poset = false;
};

int cmd_strata(const StrataOptions& o) {
  Space s{parse_space_kind(o.space), o.n};
  check_space(s, max_enumeration_n());
  auto strata = enumerate_strata(s);
  if (!o.dot.empty()) {
    std::string text;
    for (std::size_t i = 0; i < strata.size(); ++i) text += to_dot(strata[i], "S" + std::to_string(i));
    write_file(o.dot, text);
  }
  std::optional<ClosurePoset> poset;
  if (o.poset) poset = closure_poset(s);
  if (o.json_out) {
    json j{{"space", to_string(s)}, {"ambient_dimension", ambient_dimension(s)}, {"strata", json::array()}};
    for (const auto& g : strata) {
      j["strata"].push_back({{"key", canonical_key(g)},
                             {"dimension", stratum_dimension(g, s)},
                             {"codimension", stratum_codimension(g, s)},
                             {"graph", to_json(g)}});
    }
    if (poset) j["covers"] = poset->covers;
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << to_string(s) << ": " << strata.size() << " strata, ambient dimension " << ambient_dimension(s)
            << "\n";
  for (std::size_t i = 0; i < strata.size(); ++i) {
    std::cout << "  [" << i << "] codim " << stratum_codimension(strata[i], s) << "  dim "
              << stratum_dimension(strata[i], s) << "  " << canonical_key(strata[i]) << "\n";
  }
  if (poset) {
    std::cout << "covers (finer -> coarser):\n";
    for (auto [a, b] : poset->covers) std::cout << "  " << a << " -> " << b << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// cone

struct ConeOptions {
  std::string graph;
  std::string example;
  bool json_out = false;
  std::string dot;
};

int cmd_cone(const ConeOptions& o) {
  MarkedGraph g;
  if (!o.graph.empty()) {
    g = graph_from_json(read_json_file(o.graph));
  } else if (o.example == "singular") {
    g = singular_cone_tree();
  } else if (o.example == "three-relation") {
    g = three_relation_tree();
  } else {
    throw UsageError("cone needs --graph FILE or --example singular|three-relation");
  }
  require_valid(g);
  if (!o.dot.empty()) write_file(o.dot, to_dot(g));
  RelationLattice r = relation_lattice(g);
  ConeData c = classify_cone(g);
  if (o.json_out) {
    json rows = json::array(), rays = json::array(), images = json::array();
    for (const auto& row : r.matrix) rows.push_back(int_vector_json(row));
    for (const auto& v : c.rays) rays.push_back(int_vector_json(v));
    for (const auto& v : c.edge_images) images.push_back(int_vector_json(v));
    std::cout << json{{"edges", r.edges},
                      {"relations", rows},
                      {"relation_rank", r.rank},
                      {"ambient_rank", c.ambient_rank},
                      {"rays", rays},
                      {"edge_images", images},
                      {"torsion", int_vector_json(c.torsion)},
                      {"simplicial", c.simplicial},
                      {"smooth", c.smooth}}
                     .dump(2)
              << "\n";
    return kOk;
  }
  std::cout << "relations (columns = edges";
  for (int e : r.edges) std::cout << " " << e;
  std::cout << "), rank " << r.rank << "\n";
  for (const auto& row : r.matrix) std::cout << "  " << int_vector_text(row) << "\n";
  std::cout << "ambient rank " << c.ambient_rank << "\nrays (" << c.rays.size() << "):\n";
  for (const auto& v : c.rays) std::cout << "  " << int_vector_text(v) << "\n";
  std::cout << "simplicial " << (c.simplicial ? "true" : "false") << "\nsmooth " << (c.smooth ? "true" : "false")
            << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// divisors

struct DivisorOptions {
  std::string space = "mult";
  int n = 2;
  std::string verify;
  std::string split = "12|34";
  bool json_out = false;
};

int cmd_divisors(const DivisorOptions& o) {
  if (o.verify == "pullback") {
    PullbackReport r = verify_multiplihedron_pullback(o.n);
    if (o.json_out) {
      std::cout << json{{"n", r.n}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"dominant", r.dominant},
                        {"lhs_matches", r.lhs_matches}, {"rhs_matches", r.rhs_matches},
                        {"multiplicities_one", r.multiplicities_one}, {"ok", r.ok()}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "forgetting markings > 2 on MULT(" << r.n << ")\n";
      std::cout << "  onto D[{1},{2}] (" << r.lhs.size() << "):";
      for (const auto& s : r.lhs) std::cout << " " << s;
      std::cout << "\n  onto D{1,2} (" << r.rhs.size() << "):";
      for (const auto& s : r.rhs) std::cout << " " << s;
      std::cout << "\n  dominant (" << r.dominant.size() << "):";
      for (const auto& s : r.dominant) std::cout << " " << s;
      std::cout << "\n" << (r.ok() ? "ok" : "FAILED") << "\n";
    }
    return r.ok() ? kOk : kVerifyFailed;
  }
  if (o.verify == "m04") {
    M04Report r = verify_m04_pullback(o.n, o.split);
    if (o.json_out) {
      std::cout << json{{"n", r.n}, {"split", r.split}, {"preimage", r.preimage}, {"expected", r.expected},
                        {"total_divisors", r.total_divisors}, {"ok", r.ok()}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "preimage of " << r.split << " in M0(" << r.n << ") (" << r.preimage.size() << " of "
                << r.total_divisors << "):";
      for (const auto& s : r.preimage) std::cout << " " << s;
      std::cout << "\n" << (r.ok() ? "ok" : "FAILED") << "\n";
    }
    return r.ok() ? kOk : kVerifyFailed;
  }
  if (o.verify == "rho") {
    RhoReport r = rho_divisor_enumeration(o.n);
    if (o.json_out) {
      std::cout << json{{"n", r.n}, {"rhs", r.rhs}, {"dimensions", r.dimensions},
                        {"codimensions", r.codimensions}, {"slice_dimension", r.slice_dimension},
                        {"bell", r.bell}, {"ok", r.ok()}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "scaling slice of SCALED(" << r.n << "): dimension " << r.slice_dimension << "\n";
      std::cout << "  partition divisors (" << r.rhs.size() << ", Bell " << r.bell << "):";
      for (const auto& s : r.rhs) std::cout << " " << s;
      std::cout << "\n" << (r.ok() ? "ok" : "FAILED") << "\n";
    }
    return r.ok() ? kOk : kVerifyFailed;
  }
  if (!o.verify.empty()) throw UsageError("--verify must be pullback, m04 or rho");
  Space s{parse_space_kind(o.space), o.n};
  check_space(s, max_enumeration_n());
  auto divisors = boundary_divisors(s);
  if (o.json_out) {
    json list = json::array();
    for (const auto& d : divisors) {
      list.push_back({{"name", d.name()},
                      {"codimension", divisor_codimension(d)},
                      {"generic_type", to_json(d.generic_type)}});
    }
    std::cout << json{{"space", to_string(s)}, {"divisors", list}}.dump(2) << "\n";
    return kOk;
  }
  std::cout << to_string(s) << ": " << divisors.size() << " boundary divisors\n";
  for (const auto& d : divisors) std::cout << "  " << d.name() << "  codim " << divisor_codimension(d) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// cohft

struct CohftOptions {
  std::string action;
  std::string spec;
  std::string builtin;
  std::optional<std::uint64_t> seed;
  int order = 3;
  int q_cap = 2;
  bool perturb = false;
  bool json_out = false;
};

CohFTSpec load_spec(const CohftOptions& o) {
  if (!o.spec.empty()) {
    CohFTSpec s = spec_from_json(read_json_file(o.spec));
    return s;
  }
  if (!o.builtin.empty()) return builtin_spec(o.builtin, o.order, o.q_cap);
  if (o.seed) {
    CohFTSpec s;
    s.caps = {0, 1, o.order, o.q_cap};
    s.phi = random_flat_morphism(*o.seed, 2, 2, 3, s.caps);
    s.tau_W = random_trace(*o.seed + 1, 2, o.order + 2, s.caps);
    s.tau_V = pullback_trace(*s.tau_W, *s.phi, o.order + 2, s.caps);
    return s;
  }
  throw UsageError("cohft needs --spec FILE, --builtin NAME or --seed N");
}

template <class T>
const T& need(const std::optional<T>& v, const char* what) {
  if (!v) throw UsageError(std::string("the problem does not provide ") + what);
  return *v;
}

int report_check(const CheckResult& r, const std::string& what, bool json_out) {
  if (json_out) {
    std::cout << json{{"check", what}, {"ok", r.ok}, {"witness", r.witness}}.dump(2) << "\n";
  } else {
    std::cout << what << ": " << (r.ok ? "ok" : "FAILED at " + r.witness) << "\n";
  }
  return r.ok ? kOk : kVerifyFailed;
}

int cmd_cohft(const CohftOptions& o) {
  CohFTSpec s = load_spec(o);
  const SeriesCaps& caps = s.caps;
  if (o.action == "check-associativity") {
    const auto& alg = s.V ? *s.V : need(s.W, "an algebra V or W");
    return report_check(check_associativity(alg, caps), "associativity", o.json_out);
  }
  if (o.action == "check-star-morphism") {
    return report_check(check_star_morphism(need(s.phi, "phi"), need(s.V, "V"), need(s.W, "W"), caps),
                        "star-morphism", o.json_out);
  }
  if (o.action == "solve-qde") {
    const auto& alg = s.W ? *s.W : need(s.V, "an algebra");
    QDESolution sol = solve_qde(alg, s.generator, caps);
    if (o.json_out) {
      std::cout << json{{"M", matrix_json(sol.M)}, {"S", matrix_json(sol.S)}, {"sigma", matrix_json(sol.sigma)},
                        {"residual_ok", sol.residual.ok}, {"witness", sol.residual.witness}}
                       .dump(2)
                << "\n";
    } else {
      print_matrix("M", sol.M);
      print_matrix("S", sol.S);
      print_matrix("sigma", sol.sigma);
      std::cout << "residual: " << (sol.residual.ok ? "zero" : "NONZERO at " + sol.residual.witness) << "\n";
    }
    return sol.residual.ok ? kOk : kVerifyFailed;
  }
  if (o.action == "compose-trace") {
    ComposedTrace c = compose_trace(need(s.tau_W, "tau_W"), need(s.phi, "phi"), caps);
    if (o.json_out) {
      std::cout << json{{"substitution", to_json(c.substitution)}, {"partition_sum", to_json(c.partition_sum)},
                        {"ok", c.agreement.ok}, {"witness", c.agreement.witness}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "substitution   = " << c.substitution.to_string() << "\n";
      std::cout << "partition sum  = " << c.partition_sum.to_string() << "\n";
      std::cout << "agreement: " << (c.agreement.ok ? "ok" : "FAILED at " + c.agreement.witness) << "\n";
    }
    return c.agreement.ok ? kOk : kVerifyFailed;
  }
  if (o.action == "check-isometry") {
    Trace tau_v = need(s.tau_V, "tau_V");
    if (o.perturb) {
      if (!tau_v.has_point_family()) throw UsageError("--perturb needs a point-class family on tau_V");
      tau_v.tau_pp[2].add(0, 0, {}, Series::constant(caps.scalar(), 1));
    }
    return report_check(check_isometry(tau_v, need(s.tau_W, "tau_W"), need(s.phi, "phi"), caps), "isometry",
                        o.json_out);
  }
  throw UsageError("unknown cohft action '" + o.action + "'");
}

// ---------------------------------------------------------------------------
// kirwan

struct KirwanOptions {
  std::string weights;
  std::string theta = "1";
  std::string degree_bound = "1";
  std::string degree;
  bool json_out = false;
};

json relation_json(const KirwanRelation& r) {
  json c = json::array(), exp = json::array(), d = json::array();
  for (const auto& x : r.c) c.push_back(x.get_str());
  for (const auto& x : r.sector.exp_d) exp.push_back(to_string(x));
  for (const auto& x : r.d) d.push_back(to_string(x));
  std::vector<int> support;
  for (int j : r.sector.support) support.push_back(j + 1);
  return {{"d", d},
          {"c", c},
          {"scalar", r.scalar.get_str()},
          {"xi_power", r.xi_power.get_str()},
          {"count", to_string(r.count)},
          {"reason", r.reason},
          {"sector",
           {{"exp", exp},
            {"support", support},
            {"stabilizer_order", r.sector.stabilizer_order.get_str()},
            {"label", r.sector.label()}}},
          {"map_dimension", r.map_dimension.get_str()},
          {"free_coefficients", r.free_coefficients.get_str()},
          {"relation", r.relation_string()},
          {"kappa", r.kappa_string()}};
}

void print_relation(const KirwanRelation& r) {
  std::string support;
  for (int j : r.sector.support) support += (support.empty() ? "" : ",") + std::to_string(j + 1);
  std::string c;
  for (const auto& x : r.c) c += (c.empty() ? "" : ",") + x.get_str();
  std::cout << "d=" << to_string(r.d[0]) << "  sector " << r.sector.label() << " (support {" << support
            << "}, r=" << r.sector.stabilizer_order << ")  map dim " << r.map_dimension << "  c=(" << c << ")\n";
  std::cout << "  " << r.relation_string() << "\n  " << r.kappa_string() << "\n";
  if (!r.reason.empty()) std::cout << "  count 0: " << r.reason << "\n";
}

int cmd_kirwan(const KirwanOptions& o) {
  TorusAction action = parse_action(o.weights, o.theta);
  bool stable = check_stable_equals_semistable(action);
  if (!o.degree.empty()) {
    KirwanRelation r = kirwan_count(action, {parse_rational(o.degree)});
    if (o.json_out) std::cout << relation_json(r).dump(2) << "\n";
    else print_relation(r);
    return kOk;
  }
  Presentation p = qh_presentation(action, parse_rational(o.degree_bound));
  if (o.json_out) {
    json rels = json::array();
    for (const auto& r : p.relations) rels.push_back(relation_json(r));
    std::cout << json{{"weights", o.weights}, {"theta", o.theta}, {"ell", p.ell}, {"stable_equals_semistable", stable},
                      {"relations", rels}, {"skipped", p.skipped}, {"presentation", p.presentation}}
                     .dump(2)
              << "\n";
    return kOk;
  }
  std::cout << "weights " << o.weights << ", theta " << o.theta << ", degrees in (1/" << p.ell << ")Z up to "
            << o.degree_bound << "\nstable = semistable: " << (stable ? "yes" : "no") << "\n";
  for (const auto& r : p.relations) print_relation(r);
  for (const auto& s : p.skipped) std::cout << "skipped " << s << "\n";
  std::cout << "presentation: " << (p.presentation.empty() ? "(none within the degree bound)" : p.presentation)
            << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genus-zero moduli combinatorics, CohFT calculus and toric quantum Kirwan relations"};
  app.require_subcommand(1);

  StrataOptions so;
  auto* strata = app.add_subcommand("strata", "Enumerate strata of a moduli space");
  strata->add_option("--space", so.space, "m0, fm, mult or scaled")->required();
  strata->add_option("--n", so.n, "number of markings")->required();
  strata->add_flag("--json", so.json_out);
  strata->add_option("--dot", so.dot, "write every stratum as Graphviz to FILE");
  strata->add_flag("--poset", so.poset, "also print the closure order");

  ConeOptions co;
  auto* cone = app.add_subcommand("cone", "Gluing-parameter cone of a colored tree");
  cone->add_option("--graph", co.graph, "graph JSON file");
  cone->add_option("--example", co.example, "singular or three-relation");
  cone->add_flag("--json", co.json_out);
  cone->add_option("--dot", co.dot, "write the tree as Graphviz to FILE");

  DivisorOptions dopt;
  auto* divisors = app.add_subcommand("divisors", "Boundary divisors and their relations");
  divisors->add_option("--space", dopt.space, "m0, fm, mult or scaled");
  divisors->add_option("--n", dopt.n, "number of markings");
  divisors->add_option("--verify", dopt.verify, "pullback, m04 or rho")
      ->check(CLI::IsMember({"pullback", "m04", "rho"}));
  divisors->add_option("--split", dopt.split, "M0(4) boundary point for --verify m04");
  divisors->add_flag("--json", dopt.json_out);

  CohftOptions copt;
  auto* cohft = app.add_subcommand("cohft", "CohFT algebra checks and computations");
  cohft->add_option("action", copt.action,
                    "check-associativity, check-star-morphism, solve-qde, compose-trace or check-isometry")
      ->required()
      ->check(CLI::IsMember(
          {"check-associativity", "check-star-morphism", "solve-qde", "compose-trace", "check-isometry"}));
  cohft->add_option("--spec", copt.spec, "problem JSON file");
  cohft->add_option("--builtin", copt.builtin, "proj:K or quotient:K");
  cohft->add_option("--seed", copt.seed, "random flat morphism and consistent traces");
  cohft->add_option("--order", copt.order, "t-degree cap");
  cohft->add_option("--q-cap", copt.q_cap, "q-degree cap");
  cohft->add_flag("--perturb", copt.perturb, "add 1 to one V-side point coefficient before checking");
  cohft->add_flag("--json", copt.json_out);

  KirwanOptions ko;
  auto* kirwan = app.add_subcommand("kirwan", "Quantum Kirwan relations for a torus acting on affine space");
  kirwan->add_option("--weights", ko.weights, "e.g. 1,2 or 1:0,0:1")->required();
  kirwan->add_option("--theta", ko.theta, "stability character, e.g. 1 or 1:1");
  kirwan->add_option("--degree-bound", ko.degree_bound, "largest degree to enumerate");
  kirwan->add_option("--degree", ko.degree, "count a single degree instead");
  kirwan->add_flag("--json", ko.json_out);

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*strata) return cmd_strata(so);
    if (*cone) return cmd_cone(co);
    if (*divisors) return cmd_divisors(dopt);
    if (*cohft) return cmd_cohft(copt);
    if (*kirwan) return cmd_kirwan(ko);
    if (*selftest) return print_acceptance(run_acceptance(), std::cout) == 0 ? kOk : kVerifyFailed;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

#include "moduli/strata.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <stdexcept>

#include "moduli/error.hpp"
#include "moduli/morphisms.hpp"

namespace moduli {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::M0: return "m0";
    case SpaceKind::FM: return "fm";
    case SpaceKind::MULT: return "mult";
    case SpaceKind::SCALED: return "scaled";
  }
  return "?";
}

std::string to_string(const Space& space) {
  std::string name = to_string(space.kind);
  std::transform(name.begin(), name.end(), name.begin(), ::toupper);
  return name + "(" + std::to_string(space.n) + ")";
}

SpaceKind parse_space_kind(const std::string& name) {
  if (name == "m0") return SpaceKind::M0;
  if (name == "fm") return SpaceKind::FM;
  if (name == "mult") return SpaceKind::MULT;
  if (name == "scaled") return SpaceKind::SCALED;
  throw Error(ErrorCode::ParseError, "unknown space '" + name + "' (m0, fm, mult, scaled)");
}

GraphKind graph_kind(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::M0: return GraphKind::Modular;
    case SpaceKind::FM: return GraphKind::RootedForest;
    case SpaceKind::MULT: return GraphKind::ColoredTree;
    case SpaceKind::SCALED: return GraphKind::RootedColoredTree;
  }
  return GraphKind::Modular;
}

int ambient_dimension(const Space& s) {
  switch (s.kind) {
    case SpaceKind::M0: return s.n - 3;
    case SpaceKind::FM: return s.n;
    case SpaceKind::MULT: return s.n - 1;
    case SpaceKind::SCALED: return s.n + 1;
  }
  return 0;
}

int max_enumeration_n() {
  if (const char* env = std::getenv("MODULI_MAX_N")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, std::string("MODULI_MAX_N='") + env + "'");
    }
  }
  return 7;
}

void check_space(const Space& s, int limit) {
  int minimum = s.kind == SpaceKind::M0 ? 3 : s.kind == SpaceKind::MULT ? 1 : 0;
  if (s.n < minimum) {
    throw Error(ErrorCode::InvalidGraph,
                to_string(s) + " needs n >= " + std::to_string(minimum));
  }
  if (s.n > limit) {
    throw Error(ErrorCode::TooLarge, to_string(s) + " exceeds the limit n <= " + std::to_string(limit));
  }
}

// ---------------------------------------------------------------------------
// Structured enumeration.
//
// A stable type is a rooted tree in which every block of markings below a
// vertex is handled by one of three subtree families:
//   Z(S)  Zero vertex, S split into >= 2 blocks (legs or Z subtrees)
//   C(S)  Colored vertex, S split into >= 1 blocks (legs or Z subtrees)
//   M(S)  C(S), or an Infinity vertex with S split into >= 2 M subtrees
// Labels make every type rigid, so each choice yields a distinct class.

namespace {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Color color = Color::Zero;
  std::vector<int> legs;
  std::vector<NodePtr> kids;
};

// A block below a vertex: either one leg or a subtree.
struct Option {
  int leg = -1;
  NodePtr node;
};

enum class Family { Z, C, M };

class Tables {
 public:
  const std::vector<NodePtr>& get(Family f, const std::vector<int>& s) {
    auto key = std::make_pair(f, s);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<NodePtr> out;
    switch (f) {
      case Family::Z:
        if (s.size() >= 2) build(Color::Zero, s, 2, Family::Z, true, out);
        break;
      case Family::C:
        if (!s.empty()) build(Color::Colored, s, 1, Family::Z, true, out);
        break;
      case Family::M: {
        out = get(Family::C, s);
        build(Color::Infinity, s, 2, Family::M, false, out);
        break;
      }
    }
    return memo_[key] = std::move(out);
  }

  // Options for one block: a single leg when allowed, else subtrees of `f`.
  std::vector<Option> options(const std::vector<int>& block, Family f, bool singleton_leg) {
    std::vector<Option> out;
    if (singleton_leg && block.size() == 1) {
      out.push_back({block[0], nullptr});
      return out;
    }
    for (const auto& node : get(f, block)) out.push_back({-1, node});
    return out;
  }

 private:
  void build(Color color, const std::vector<int>& s, int min_blocks, Family child, bool singleton_leg,
             std::vector<NodePtr>& out) {
    for (const auto& p : set_partitions(s, min_blocks, static_cast<int>(s.size()))) {
      std::vector<std::vector<Option>> choices;
      for (const auto& block : p) choices.push_back(options(block, child, singleton_leg));
      for_each_product(choices, [&](const std::vector<const Option*>& pick) {
        auto node = std::make_shared<Node>();
        node->color = color;
        for (const Option* o : pick) {
          if (o->node) node->kids.push_back(o->node);
          else node->legs.push_back(o->leg);
        }
        out.push_back(node);
      });
    }
  }

 public:
  template <class F>
  static void for_each_product(const std::vector<std::vector<Option>>& choices, F&& f) {
    for (const auto& c : choices) {
      if (c.empty()) return;
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    std::vector<const Option*> pick(choices.size());
    for (;;) {
      for (std::size_t i = 0; i < choices.size(); ++i) pick[i] = &choices[i][idx[i]];
      f(pick);
      std::size_t i = 0;
      for (; i < choices.size(); ++i) {
        if (++idx[i] < choices[i].size()) break;
        idx[i] = 0;
      }
      if (i == choices.size()) return;
    }
  }

 private:
  std::map<std::pair<Family, std::vector<int>>, std::vector<NodePtr>> memo_;
};

// One top-level vertex type: color, fixed legs on it, partition of the rest
// and the family used for each block.
struct Shard {
  Color color;
  std::vector<int> fixed_legs;
  SetPartition blocks;
  Family family;
  bool singleton_leg;
  std::vector<std::vector<Option>> choices;
};

int add_node(MarkedGraph& g, const Node& node) {
  int id = static_cast<int>(g.vertices.size());
  g.vertices.push_back({id, 0, is_colored_kind(g.kind) ? node.color : Color::Zero});
  for (int l : node.legs) g.legs[l] = id;
  for (const auto& kid : node.kids) {
    int c = add_node(g, *kid);
    g.edges.push_back({id, c});
  }
  return id;
}

std::vector<Shard> make_shards(const Space& s) {
  std::vector<Shard> shards;
  auto add = [&](Color color, std::vector<int> fixed, const std::vector<int>& rest, int min_blocks,
                 Family family, bool singleton_leg) {
    int max_blocks = std::max(0, static_cast<int>(rest.size()));
    for (auto& p : set_partitions(rest, min_blocks, max_blocks)) {
      shards.push_back({color, fixed, std::move(p), family, singleton_leg, {}});
    }
  };
  auto all = iota_labels(s.n);
  switch (s.kind) {
    case SpaceKind::M0: {
      std::vector<int> rest(all.begin(), all.end() - 1);
      add(Color::Zero, {s.n}, rest, 2, Family::Z, true);
      break;
    }
    case SpaceKind::FM:
      add(Color::Zero, {}, all, 0, Family::Z, true);
      break;
    case SpaceKind::MULT:
      add(Color::Colored, {0}, all, 1, Family::Z, true);
      add(Color::Infinity, {0}, all, 2, Family::M, false);
      break;
    case SpaceKind::SCALED:
      add(Color::Colored, {}, all, 0, Family::Z, true);
      add(Color::Infinity, {}, all, 0, Family::M, false);
      break;
  }
  return shards;
}

std::vector<MarkedGraph> expand_shard(const Space& s, const Shard& shard) {
  std::vector<MarkedGraph> out;
  GraphKind kind = graph_kind(s.kind);
  Tables::for_each_product(shard.choices, [&](const std::vector<const Option*>& pick) {
    Node top;
    top.color = shard.color;
    top.legs = shard.fixed_legs;
    for (const Option* o : pick) {
      if (o->node) top.kids.push_back(o->node);
      else top.legs.push_back(o->leg);
    }
    MarkedGraph g;
    g.kind = kind;
    int root = add_node(g, top);
    if (is_rooted_kind(kind)) g.root = root;
    out.push_back(std::move(g));
  });
  return out;
}

std::vector<Shard> prepared_shards(const Space& s) {
  check_space(s, max_enumeration_n());
  auto shards = make_shards(s);
  Tables tables;
  for (auto& shard : shards) {
    for (const auto& block : shard.blocks) {
      shard.choices.push_back(tables.options(block, shard.family, shard.singleton_leg));
    }
  }
  return shards;
}

std::vector<MarkedGraph> sorted_by_key(std::vector<MarkedGraph> graphs) {
  std::vector<std::pair<std::string, std::size_t>> keyed(graphs.size());
  #pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < graphs.size(); ++i) keyed[i] = {canonical_key(graphs[i]), i};
  std::sort(keyed.begin(), keyed.end());
  std::vector<MarkedGraph> out;
  out.reserve(graphs.size());
  for (auto& [key, i] : keyed) out.push_back(std::move(graphs[i]));
  return out;
}

}  // namespace

std::vector<MarkedGraph> enumerate_strata(const Space& s) {
  auto shards = prepared_shards(s);
  std::vector<std::vector<MarkedGraph>> parts(shards.size());
  #pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < shards.size(); ++i) parts[i] = expand_shard(s, shards[i]);
  std::vector<MarkedGraph> all;
  for (auto& p : parts) {
    for (auto& g : p) all.push_back(std::move(g));
  }
  return sorted_by_key(std::move(all));
}

std::vector<MarkedGraph> enumerate_strata_serial(const Space& s) {
  auto shards = prepared_shards(s);
  std::vector<std::pair<std::string, MarkedGraph>> keyed;
  for (const auto& shard : shards) {
    for (auto& g : expand_shard(s, shard)) {
      std::string key = canonical_key(g);
      keyed.emplace_back(std::move(key), std::move(g));
    }
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<MarkedGraph> out;
  for (auto& [key, g] : keyed) out.push_back(std::move(g));
  return out;
}

// ---------------------------------------------------------------------------
// Dimensions

namespace {

void check_kind(const MarkedGraph& g, const Space& s) {
  if (g.kind != graph_kind(s.kind)) {
    throw Error(ErrorCode::KindMismatch, to_string(g.kind) + " type for " + to_string(s));
  }
  require_valid(g);
}

}  // namespace

int stratum_dimension(const MarkedGraph& g, const Space& s) {
  check_kind(g, s);
  int dim = 0;
  for (const auto& v : g.vertices) {
    int k = g.valence(v.id);
    bool is_root = g.root && *g.root == v.id;
    switch (s.kind) {
      case SpaceKind::M0: dim += 3 * v.genus - 3 + k; break;
      case SpaceKind::FM: dim += is_root ? k : k - 3; break;
      case SpaceKind::MULT: dim += v.color == Color::Colored ? k - 2 : k - 3; break;
      case SpaceKind::SCALED:
        if (is_root) dim += v.color == Color::Colored ? k + 1 : k;
        else dim += v.color == Color::Colored ? k - 2 : k - 3;
        break;
    }
  }
  return dim;
}

int stratum_codimension(const MarkedGraph& g, const Space& s) {
  check_kind(g, s);
  if (s.kind == SpaceKind::M0 || s.kind == SpaceKind::FM) return static_cast<int>(g.edges.size());
  auto designated = g.root_vertex();
  int codim = 0;
  for (const auto& comp : connected_components(g)) {
    int edges = 0, colored = 0;
    for (const auto& e : g.edges) {
      if (std::find(comp.begin(), comp.end(), e.u) != comp.end()) ++edges;
    }
    for (int v : comp) colored += g.vertex(v).color == Color::Colored;
    bool root_comp = designated && std::find(comp.begin(), comp.end(), *designated) != comp.end();
    codim += (root_comp || colored > 0) ? edges + 1 - colored : edges;
  }
  return codim;
}

// ---------------------------------------------------------------------------
// Boundary divisors

std::string BoundaryDivisor::name() const {
  auto set_str = [](const std::vector<int>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + "}";
  };
  switch (shape) {
    case DivisorShape::Subset: return "D" + set_str(subset);
    case DivisorShape::Partition: {
      std::string out = "D[";
      for (std::size_t i = 0; i < blocks.size(); ++i) out += (i ? "," : "") + set_str(blocks[i]);
      return out + "]";
    }
    case DivisorShape::RhoSlice: return "rho";
  }
  return "?";
}

MarkedGraph open_stratum(const Space& s) {
  GraphBuilder b(graph_kind(s.kind));
  auto all = iota_labels(s.n);
  switch (s.kind) {
    case SpaceKind::M0: b.vertex(0); break;
    case SpaceKind::FM: b.vertex(0).root(0); break;
    case SpaceKind::MULT: b.vertex(0, Color::Colored).leg(0, 0); break;
    case SpaceKind::SCALED: b.vertex(0, Color::Colored).root(0); break;
  }
  for (int l : all) b.leg(l, 0);
  return b.build();
}

MarkedGraph subset_divisor_type(const Space& s, const std::vector<int>& subset) {
  MarkedGraph g = open_stratum(s);
  g.vertices.push_back({1, 0, Color::Zero});
  g.edges.push_back({0, 1});
  for (int l : subset) g.legs[l] = 1;
  return g;
}

MarkedGraph partition_divisor_type(const Space& s, const SetPartition& blocks) {
  if (s.kind != SpaceKind::MULT && s.kind != SpaceKind::SCALED) {
    throw Error(ErrorCode::KindMismatch, "partition divisors exist only for scaled kinds");
  }
  GraphBuilder b(graph_kind(s.kind));
  b.vertex(0, Color::Infinity);
  if (s.kind == SpaceKind::MULT) b.leg(0, 0);
  else b.root(0);
  int id = 1;
  for (const auto& block : blocks) {
    b.vertex(id, Color::Colored).edge(0, id);
    for (int l : block) b.leg(l, id);
    ++id;
  }
  return b.build();
}

std::vector<BoundaryDivisor> boundary_divisors(const Space& s) {
  check_space(s, max_enumeration_n());
  std::vector<BoundaryDivisor> out;
  auto all = iota_labels(s.n);
  if (s.kind == SpaceKind::M0) {
    std::vector<int> rest(all.begin(), all.end() - 1);
    for (auto& sub : subsets(rest, 2)) {
      if (static_cast<int>(sub.size()) > s.n - 2) continue;
      MarkedGraph g = GraphBuilder(GraphKind::Modular).vertex(0).vertex(1).edge(0, 1).build();
      for (int l : all) g.legs[l] = std::find(sub.begin(), sub.end(), l) != sub.end() ? 0 : 1;
      out.push_back({s, DivisorShape::Subset, sub, {}, g});
    }
    return out;
  }
  for (auto& sub : subsets(all, 2)) {
    out.push_back({s, DivisorShape::Subset, sub, {}, subset_divisor_type(s, sub)});
  }
  if (s.kind == SpaceKind::MULT || s.kind == SpaceKind::SCALED) {
    int min_blocks = s.kind == SpaceKind::MULT ? 2 : 1;
    for (auto& p : set_partitions(all, min_blocks, std::max(1, s.n))) {
      if (p.empty()) continue;
      out.push_back({s, DivisorShape::Partition, {}, p, partition_divisor_type(s, p)});
    }
  }
  if (s.kind == SpaceKind::SCALED) {
    out.push_back({s, DivisorShape::RhoSlice, {}, {}, open_stratum(s)});
  }
  return out;
}

int divisor_codimension(const BoundaryDivisor& d) {
  if (d.shape == DivisorShape::RhoSlice) return 1;
  return stratum_codimension(d.generic_type, d.space);
}

// ---------------------------------------------------------------------------
// Closure order

ClosurePoset closure_poset(const Space& s) {
  const char* env = std::getenv("MODULI_MAX_N");
  check_space(s, env ? max_enumeration_n() : 5);
  ClosurePoset poset;
  poset.strata = enumerate_strata(s);
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < poset.strata.size(); ++i) {
    poset.keys.push_back(canonical_key(poset.strata[i]));
    poset.codimension.push_back(stratum_codimension(poset.strata[i], s));
    index[poset.keys.back()] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < poset.strata.size(); ++i) {
    const MarkedGraph& g = poset.strata[i];
    std::vector<MarkedGraph> images;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      try {
        images.push_back(collapse_edge(g, static_cast<int>(e)));
      } catch (const Error& err) {
        if (err.code() != ErrorCode::ForbiddenCollapse) throw;
      }
    }
    if (is_colored_kind(g.kind)) {
      for (const auto& v : g.vertices) {
        if (v.color != Color::Infinity) continue;
        try {
          images.push_back(collapse_with_relations(g, v.id));
        } catch (const Error& err) {
          if (err.code() != ErrorCode::NothingToCollapse) throw;
        }
      }
    }
    std::vector<int> targets;
    for (const auto& img : images) {
      auto it = index.find(canonical_key(img));
      if (it == index.end()) {
        throw std::logic_error("collapse left the stratum list: " + canonical_key(img));
      }
      if (poset.codimension[i] != poset.codimension[it->second] + 1) {
        throw std::logic_error("cover does not drop codimension by one in " + to_string(s));
      }
      targets.push_back(it->second);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (int t : targets) poset.covers.push_back({static_cast<int>(i), t});
  }
  return poset;
}

}  // namespace moduli

#include "moduli/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "moduli/error.hpp"

namespace moduli {

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Modular: return "modular";
    case GraphKind::RootedForest: return "rooted_forest";
    case GraphKind::ColoredTree: return "colored_tree";
    case GraphKind::RootedColoredTree: return "rooted_colored_tree";
  }
  return "?";
}

std::string to_string(Color color) {
  switch (color) {
    case Color::Zero: return "zero";
    case Color::Colored: return "colored";
    case Color::Infinity: return "infinity";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// MarkedGraph accessors

int MarkedGraph::n() const {
  int count = 0;
  for (const auto& [label, v] : legs) {
    if (!(kind == GraphKind::ColoredTree && label == 0)) ++count;
  }
  return count;
}

bool MarkedGraph::has_vertex(int id) const {
  return std::any_of(vertices.begin(), vertices.end(), [id](const Vertex& v) { return v.id == id; });
}

const Vertex& MarkedGraph::vertex(int id) const {
  for (const auto& v : vertices) {
    if (v.id == id) return v;
  }
  throw Error(ErrorCode::InvalidGraph, "no vertex with id " + std::to_string(id));
}

Vertex& MarkedGraph::vertex(int id) {
  for (auto& v : vertices) {
    if (v.id == id) return v;
  }
  throw Error(ErrorCode::InvalidGraph, "no vertex with id " + std::to_string(id));
}

int MarkedGraph::valence(int id) const {
  int val = 0;
  for (const auto& [label, v] : legs) {
    if (v == id) ++val;
  }
  for (const auto& e : edges) {
    if (e.u == id) ++val;
    if (e.v == id) ++val;
  }
  return val;
}

std::vector<int> MarkedGraph::legs_at(int id) const {
  std::vector<int> out;
  for (const auto& [label, v] : legs) {
    if (v == id) out.push_back(label);
  }
  return out;
}

std::vector<int> MarkedGraph::incident_edges(int id) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].u == id || edges[i].v == id) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> MarkedGraph::leg_labels() const {
  std::vector<int> out;
  for (const auto& [label, v] : legs) out.push_back(label);
  return out;
}

int MarkedGraph::count_color(Color c) const {
  return static_cast<int>(
      std::count_if(vertices.begin(), vertices.end(), [c](const Vertex& v) { return v.color == c; }));
}

int MarkedGraph::next_vertex_id() const {
  int m = -1;
  for (const auto& v : vertices) m = std::max(m, v.id);
  return m + 1;
}

std::optional<int> MarkedGraph::root_vertex() const {
  if (kind == GraphKind::ColoredTree) {
    auto it = legs.find(0);
    if (it == legs.end()) return std::nullopt;
    return it->second;
  }
  if (is_rooted_kind(kind)) return root;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Components and orientation

std::vector<std::vector<int>> connected_components(const MarkedGraph& g) {
  std::map<int, int> parent;
  for (const auto& v : g.vertices) parent[v.id] = v.id;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    if (!parent.count(e.u) || !parent.count(e.v)) continue;
    int a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, std::vector<int>> groups;
  for (const auto& v : g.vertices) groups[find(v.id)].push_back(v.id);
  std::vector<std::vector<int>> out;
  for (auto& [rep, members] : groups) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> TreeOrientation::path_to_root(int v) const {
  std::vector<int> path{v};
  while (v != root) {
    v = parent.at(v);
    path.push_back(v);
  }
  return path;
}

TreeOrientation orient(const MarkedGraph& g, int root) {
  TreeOrientation t;
  t.root = root;
  t.depth[root] = 0;
  std::deque<int> queue{root};
  std::set<int> seen{root};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    t.order.push_back(v);
    t.children[v];
    for (int ei : g.incident_edges(v)) {
      const Edge& e = g.edges[ei];
      if (e.is_loop()) continue;
      int w = e.other(v);
      if (seen.count(w)) continue;
      seen.insert(w);
      t.parent[w] = v;
      t.parent_edge[w] = ei;
      t.depth[w] = t.depth[v] + 1;
      t.children[v].push_back(w);
      queue.push_back(w);
    }
  }
  return t;
}

MarkedGraph normalize_vertex_ids(const MarkedGraph& g) {
  std::map<int, int> remap;
  MarkedGraph out;
  out.kind = g.kind;
  for (const auto& v : g.vertices) {
    int id = static_cast<int>(remap.size());
    remap[v.id] = id;
    out.vertices.push_back({id, v.genus, v.color});
  }
  for (const auto& e : g.edges) out.edges.push_back({remap.at(e.u), remap.at(e.v)});
  for (const auto& [label, v] : g.legs) out.legs[label] = remap.at(v);
  if (g.root) out.root = remap.at(*g.root);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].invariant << " at " << violations[i].where;
  }
  return os.str();
}

namespace {

// Leg-to-root paths must cross exactly one Colored vertex, Zero before and
// Infinity after. `root_leg` is excluded from the check (-1 for none).
bool check_monotone(const MarkedGraph& g, const std::vector<int>& component, int root, int root_leg,
                    std::vector<Violation>* out) {
  TreeOrientation t = orient(g, root);
  std::set<int> members(component.begin(), component.end());
  bool ok = true;
  for (const auto& [label, v] : g.legs) {
    if (label == root_leg || !members.count(v)) continue;
    auto path = t.path_to_root(v);
    int colored_at = -1;
    int colored_count = 0;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (g.vertex(path[i]).color == Color::Colored) {
        ++colored_count;
        colored_at = static_cast<int>(i);
      }
    }
    bool leg_ok = colored_count == 1;
    if (leg_ok) {
      for (int i = 0; i < static_cast<int>(path.size()); ++i) {
        Color c = g.vertex(path[i]).color;
        if (i < colored_at && c != Color::Zero) leg_ok = false;
        if (i > colored_at && c != Color::Infinity) leg_ok = false;
      }
    }
    if (!leg_ok) {
      ok = false;
      if (out) out->push_back({"monotonicity", "leg " + std::to_string(label)});
    }
  }
  return ok;
}

bool all_color(const MarkedGraph& g, const std::vector<int>& component, Color c) {
  return std::all_of(component.begin(), component.end(),
                     [&](int v) { return g.vertex(v).color == c; });
}

bool contains_colored(const MarkedGraph& g, const std::vector<int>& component) {
  return std::any_of(component.begin(), component.end(),
                     [&](int v) { return g.vertex(v).color == Color::Colored; });
}

void validate_colored_components(const MarkedGraph& g, std::vector<Violation>& out) {
  auto comps = connected_components(g);
  std::optional<int> designated = g.root_vertex();
  for (const auto& comp : comps) {
    bool is_root_comp =
        designated && std::find(comp.begin(), comp.end(), *designated) != comp.end();
    std::string where = "component of vertex " + std::to_string(comp.front());
    if (is_root_comp) {
      int root_leg = g.kind == GraphKind::ColoredTree ? 0 : -1;
      if (g.kind == GraphKind::RootedColoredTree) {
        Color rc = g.vertex(*designated).color;
        if (rc == Color::Zero) {
          out.push_back({"root color must be colored or infinity", where});
          continue;
        }
        if (rc == Color::Colored) {
          for (int v : comp) {
            if (v != *designated && g.vertex(v).color != Color::Zero) {
              out.push_back({"non-root vertex under colored root must be zero",
                             "vertex " + std::to_string(v)});
            }
          }
        }
      }
      if (comps.size() > 1 && !contains_colored(g, comp) &&
          (all_color(g, comp, Color::Zero) || all_color(g, comp, Color::Infinity))) {
        continue;
      }
      check_monotone(g, comp, *designated, root_leg, &out);
      continue;
    }
    if (!contains_colored(g, comp)) {
      if (!all_color(g, comp, Color::Zero) && !all_color(g, comp, Color::Infinity)) {
        out.push_back({"uncolored component must be all zero or all infinity", where});
      }
      continue;
    }
    // Colored component away from the root: monotone with respect to one of its legs.
    bool found = false;
    for (const auto& [label, v] : g.legs) {
      if (std::find(comp.begin(), comp.end(), v) == comp.end()) continue;
      if (check_monotone(g, comp, v, label, nullptr)) {
        found = true;
        break;
      }
    }
    if (!found) out.push_back({"monotonicity (no leg serves as root leg)", where});
  }
}

}  // namespace

ValidationReport validate(const MarkedGraph& g) {
  ValidationReport report;
  auto& out = report.violations;

  std::set<int> ids;
  for (const auto& v : g.vertices) {
    if (!ids.insert(v.id).second) out.push_back({"unique vertex ids", "vertex " + std::to_string(v.id)});
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (!ids.count(e.u) || !ids.count(e.v)) {
      out.push_back({"edge endpoints exist", "edge " + std::to_string(i)});
    }
  }
  for (const auto& [label, v] : g.legs) {
    if (!ids.count(v)) out.push_back({"leg vertex exists", "leg " + std::to_string(label)});
    if (label < 0) out.push_back({"leg labels nonnegative", "leg " + std::to_string(label)});
    if (label == 0 && g.kind != GraphKind::ColoredTree) {
      out.push_back({"label 0 reserved for colored-tree root leg", "leg 0"});
    }
  }
  if (!out.empty()) return report;  // structural errors make further checks meaningless

  if (g.kind == GraphKind::ColoredTree && !g.legs.count(0)) {
    out.push_back({"root leg 0 present", "legs"});
  }
  if (is_rooted_kind(g.kind)) {
    if (!g.root || !ids.count(*g.root)) out.push_back({"root vertex present", "root"});
  } else if (g.root) {
    out.push_back({"root only for rooted kinds", "root"});
  }

  if (g.kind == GraphKind::Modular) {
    for (const auto& v : g.vertices) {
      if (v.genus < 0) out.push_back({"genus nonnegative", "vertex " + std::to_string(v.id)});
      if (v.color != Color::Zero) out.push_back({"modular vertices carry no color", "vertex " + std::to_string(v.id)});
    }
    return report;
  }

  // Tree kinds.
  for (const auto& v : g.vertices) {
    if (v.genus != 0) out.push_back({"genus zero for tree kinds", "vertex " + std::to_string(v.id)});
    if (g.kind == GraphKind::RootedForest && v.color != Color::Zero) {
      out.push_back({"rooted forest vertices carry no color", "vertex " + std::to_string(v.id)});
    }
  }
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.is_loop()) {
      out.push_back({"no loops in tree kinds", "edge " + std::to_string(i)});
      continue;
    }
    if (!seen.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second) {
      out.push_back({"no multi-edges in tree kinds", "edge " + std::to_string(i)});
    }
  }
  if (!out.empty()) return report;
  auto comps = connected_components(g);
  if (g.edges.size() + comps.size() != g.vertices.size()) {
    out.push_back({"underlying graph is a forest", "edges"});
    return report;
  }
  if (!out.empty()) return report;
  if (is_colored_kind(g.kind)) validate_colored_components(g, out);
  return report;
}

void require_valid(const MarkedGraph& g) {
  auto report = validate(g);
  if (!report.ok()) throw Error(ErrorCode::InvalidGraph, report.summary());
}

// ---------------------------------------------------------------------------
// Stability

bool is_stable(const MarkedGraph& g) {
  require_valid(g);
  const int root = is_rooted_kind(g.kind) && g.root ? *g.root : std::numeric_limits<int>::min();
  for (const auto& v : g.vertices) {
    int val = g.valence(v.id);
    switch (g.kind) {
      case GraphKind::Modular:
        if (v.genus == 0 && val < 3) return false;
        if (v.genus == 1 && val < 1) return false;
        break;
      case GraphKind::RootedForest:
        if (v.id != root && val < 3) return false;
        break;
      case GraphKind::ColoredTree:
      case GraphKind::RootedColoredTree:
        if (v.id == root) break;
        if (v.color == Color::Colored ? val < 2 : val < 3) return false;
        break;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Canonical keys

namespace {

char color_char(Color c) {
  switch (c) {
    case Color::Zero: return 'Z';
    case Color::Colored: return 'C';
    case Color::Infinity: return 'I';
  }
  return '?';
}

std::string encode_rooted(const MarkedGraph& g, int v, int parent, bool mark_root) {
  std::string s = "(";
  s += color_char(g.vertex(v).color);
  if (mark_root) s += 'R';
  s += '|';
  auto legs = g.legs_at(v);
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(legs[i]);
  }
  s += '|';
  std::vector<std::string> kids;
  for (int ei : g.incident_edges(v)) {
    int w = g.edges[ei].other(v);
    if (w == parent) continue;
    kids.push_back(encode_rooted(g, w, v, false));
  }
  std::sort(kids.begin(), kids.end());
  for (const auto& k : kids) s += k;
  s += ')';
  return s;
}

std::string tree_kind_key(const MarkedGraph& g) {
  auto comps = connected_components(g);
  std::optional<int> designated = g.root_vertex();
  std::vector<std::string> parts;
  for (const auto& comp : comps) {
    bool is_root_comp =
        designated && std::find(comp.begin(), comp.end(), *designated) != comp.end();
    if (is_root_comp) {
      bool mark = is_rooted_kind(g.kind);
      parts.push_back("R" + encode_rooted(g, *designated, -1, mark));
      continue;
    }
    int min_label = -1;
    for (const auto& [label, v] : g.legs) {
      if (std::find(comp.begin(), comp.end(), v) != comp.end()) {
        min_label = label;
        break;
      }
    }
    if (min_label >= 0) {
      parts.push_back("L" + encode_rooted(g, g.legs.at(min_label), -1, false));
    } else {
      std::string best;
      for (int v : comp) {
        std::string s = encode_rooted(g, v, -1, false);
        if (best.empty() || s < best) best = s;
      }
      parts.push_back("U" + best);
    }
  }
  std::sort(parts.begin(), parts.end());
  std::string key = to_string(g.kind) + ":";
  for (const auto& p : parts) key += p;
  return key;
}

constexpr int kMaxModularVertices = 10;

std::string modular_key(const MarkedGraph& g) {
  const int V = static_cast<int>(g.vertices.size());
  if (V > kMaxModularVertices) {
    throw Error(ErrorCode::TooLarge, "modular canonicalization limited to 10 vertices");
  }
  // Vertices carrying legs are pinned by their smallest label; the rest are
  // permuted within classes of an isomorphism-invariant signature.
  std::vector<std::pair<int, int>> pinned;  // (min label, vertex)
  std::map<std::vector<int>, std::vector<int>> classes;
  for (const auto& v : g.vertices) {
    auto legs = g.legs_at(v.id);
    if (!legs.empty()) {
      pinned.push_back({legs.front(), v.id});
      continue;
    }
    int loops = 0;
    for (const auto& e : g.edges) loops += e.u == v.id && e.v == v.id;
    classes[{v.genus, g.valence(v.id), loops}].push_back(v.id);
  }
  std::sort(pinned.begin(), pinned.end());
  std::vector<int> prefix;
  for (auto& [label, v] : pinned) prefix.push_back(v);
  std::vector<std::vector<int>> groups;
  std::vector<std::vector<int>> signatures;
  for (auto& [sig, members] : classes) {
    groups.push_back(members);
    signatures.push_back(sig);
  }

  std::vector<int> best;
  std::vector<int> order;
  auto evaluate = [&]() {
    std::map<int, int> pos;
    for (int i = 0; i < V; ++i) pos[order[i]] = i;
    std::vector<int> code;
    for (int i = 0; i < V; ++i) {
      const Vertex& v = g.vertex(order[i]);
      code.push_back(v.genus);
      auto legs = g.legs_at(v.id);
      code.push_back(static_cast<int>(legs.size()));
      code.insert(code.end(), legs.begin(), legs.end());
    }
    std::vector<std::pair<int, int>> es;
    for (const auto& e : g.edges) {
      int a = pos[e.u], b = pos[e.v];
      es.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(es.begin(), es.end());
    code.push_back(-1);
    for (auto& [a, b] : es) {
      code.push_back(a);
      code.push_back(b);
    }
    if (best.empty() || code < best) best = std::move(code);
  };
  std::function<void(std::size_t)> recurse = [&](std::size_t gi) {
    if (gi == groups.size()) {
      evaluate();
      return;
    }
    std::vector<int> perm = groups[gi];
    std::sort(perm.begin(), perm.end());
    do {
      std::size_t base = order.size();
      order.insert(order.end(), perm.begin(), perm.end());
      recurse(gi + 1);
      order.resize(base);
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  order = prefix;
  recurse(0);

  std::string key = "modular:";
  for (const auto& sig : signatures) {
    key += "[";
    for (int x : sig) key += std::to_string(x) + ",";
    key += "]";
  }
  key += "#";
  for (int x : best) key += std::to_string(x) + ",";
  return key;
}

}  // namespace

std::string canonical_key(const MarkedGraph& g) {
  require_valid(g);
  if (g.kind == GraphKind::Modular) return modular_key(g);
  return tree_kind_key(g);
}

bool is_isomorphic(const MarkedGraph& a, const MarkedGraph& b) {
  if (a.kind != b.kind) {
    throw Error(ErrorCode::KindMismatch, to_string(a.kind) + " vs " + to_string(b.kind));
  }
  return canonical_key(a) == canonical_key(b);
}

}  // namespace moduli

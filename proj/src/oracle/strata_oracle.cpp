#include "moduli/oracle/strata_oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include <omp.h>

namespace moduli::oracle {

namespace {

std::string shape_key(const std::vector<int>& parent, int v) {
  std::vector<std::string> kids;
  for (std::size_t c = 0; c < parent.size(); ++c) {
    if (parent[c] == v) kids.push_back(shape_key(parent, static_cast<int>(c)));
  }
  std::sort(kids.begin(), kids.end());
  std::string s = "(";
  for (const auto& k : kids) s += k;
  return s + ")";
}

// Colors along any path away from the root never increase (Infinity > Colored
// > Zero) and Colored appears at most once; valid colored trees satisfy this
// because every vertex lies on some leg-to-root path.
void colorings(const std::vector<int>& parent, std::size_t i, std::vector<Color>& cur,
               std::vector<std::vector<Color>>& out) {
  if (i == parent.size()) {
    out.push_back(cur);
    return;
  }
  std::vector<Color> allowed;
  Color above = i == 0 ? Color::Infinity : cur[parent[i]];
  if (above == Color::Infinity) allowed = {Color::Zero, Color::Colored, Color::Infinity};
  else allowed = {Color::Zero};
  for (Color c : allowed) {
    cur[i] = c;
    colorings(parent, i + 1, cur, out);
  }
}

struct Shape {
  std::vector<int> parent;
  std::vector<Color> colors;
};

}  // namespace

std::vector<std::vector<int>> rooted_trees(int v) {
  if (v <= 0) return {};
  std::vector<std::vector<int>> level{{-1}};
  for (int size = 2; size <= v; ++size) {
    std::map<std::string, std::vector<int>> next;
    for (const auto& t : level) {
      for (int attach = 0; attach < size - 1; ++attach) {
        auto u = t;
        u.push_back(attach);
        next.emplace(shape_key(u, 0), u);
      }
    }
    level.clear();
    for (auto& [key, t] : next) level.push_back(std::move(t));
  }
  return level;
}

int vertex_bound(const Space& s) {
  switch (s.kind) {
    case SpaceKind::M0: return std::max(1, s.n - 2);
    case SpaceKind::FM: return std::max(1, s.n);
    case SpaceKind::MULT: return std::max(1, 2 * s.n - 1);
    case SpaceKind::SCALED: return std::max(1, 2 * s.n);
  }
  return 1;
}

std::set<std::string> brute_force_strata(const Space& space) {
  const GraphKind kind = graph_kind(space.kind);
  const bool colored = is_colored_kind(kind);
  std::vector<Shape> shapes;
  for (int v = 1; v <= vertex_bound(space); ++v) {
    for (const auto& t : rooted_trees(v)) {
      if (!colored) {
        shapes.push_back({t, std::vector<Color>(t.size(), Color::Zero)});
        continue;
      }
      std::vector<Color> cur(t.size());
      std::vector<std::vector<Color>> cs;
      colorings(t, 0, cur, cs);
      for (auto& c : cs) shapes.push_back({t, std::move(c)});
    }
  }

  std::set<std::string> result;
#pragma omp parallel
  {
    std::set<std::string> local;
#pragma omp for schedule(dynamic)
    for (std::size_t s = 0; s < shapes.size(); ++s) {
      const auto& shape = shapes[s];
      const int v = static_cast<int>(shape.parent.size());
      MarkedGraph g;
      g.kind = kind;
      std::vector<int> degree(v, 0);
      for (int i = 0; i < v; ++i) {
        g.vertices.push_back({i, 0, shape.colors[i]});
        if (i > 0) {
          g.edges.push_back({shape.parent[i], i});
          ++degree[i];
          ++degree[shape.parent[i]];
        }
      }
      if (is_rooted_kind(kind)) g.root = 0;
      if (kind == GraphKind::ColoredTree) {
        g.legs[0] = 0;
        ++degree[0];
      }
      // Legs each vertex still needs to reach its stability threshold.
      std::vector<int> deficit(v, 0);
      for (int i = 0; i < v; ++i) {
        if (is_rooted_kind(kind) && i == 0) continue;
        int threshold = colored && shape.colors[i] == Color::Colored ? 2 : 3;
        deficit[i] = std::max(0, threshold - degree[i]);
      }
      int need = 0;
      for (int d : deficit) need += d;
      if (need > space.n) continue;

      std::function<void(int, int)> place = [&](int label, int need_left) {
        if (space.n - label + 1 < need_left) return;
        if (label > space.n) {
          if (validate(g).ok() && is_stable(g)) local.insert(canonical_key(g));
          return;
        }
        for (int i = 0; i < v; ++i) {
          g.legs[label] = i;
          bool helped = deficit[i] > 0;
          if (helped) --deficit[i];
          place(label + 1, need_left - (helped ? 1 : 0));
          if (helped) ++deficit[i];
        }
        g.legs.erase(label);
      };
      place(1, need);
    }
#pragma omp critical
    result.insert(local.begin(), local.end());
  }
  return result;
}

}  // namespace moduli::oracle

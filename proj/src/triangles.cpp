#include "densechi/triangles.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "densechi/error.hpp"

namespace densechi {

Triangle::Triangle(Vertex a, Vertex b, Vertex c) : v{a, b, c} {
  std::sort(v.begin(), v.end());
  require(v[0] != v[1] && v[1] != v[2], "triangle vertices must be distinct");
}

namespace {

template <typename Visit>
void for_each_triangle(const Graph& g, Visit&& visit) {
  for (Vertex u = 0; u < g.n(); ++u) {
    auto nu = g.neighbors(u);
    auto u_hi = std::upper_bound(nu.begin(), nu.end(), u);
    for (auto it = u_hi; it != nu.end(); ++it) {
      const Vertex v = *it;
      auto nv = g.neighbors(v);
      // w > v in N(u) ∩ N(v)
      auto a = it + 1;
      auto b = std::upper_bound(nv.begin(), nv.end(), v);
      while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          visit(u, v, *a);
          ++a;
          ++b;
        }
      }
    }
  }
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

TriangleMatching finish(std::vector<Triangle> chosen, bool maximum) {
  std::sort(chosen.begin(), chosen.end());
  std::vector<Vertex> cover;
  cover.reserve(chosen.size() * 3);
  for (const auto& t : chosen) cover.insert(cover.end(), t.v.begin(), t.v.end());
  TriangleMatching m;
  m.covered = VertexSet(std::move(cover));
  m.triangles = std::move(chosen);
  m.maximum = maximum;
  return m;
}

// Exact lexicographically smallest maximum matching inside one conflict
// component. A subproblem is a sorted list of available triangles; it is
// split into vertex-disjoint pieces, solved independently (the smallest
// maximum set of a disjoint union is the union of the pieces' answers). A
// connected piece branches on its smallest vertex v: each triangle through v
// in canonical order, then "v uncovered". Every answer of an earlier branch
// is lexicographically below every equal-size answer of a later branch, so
// later branches only count when strictly larger.
class ComponentSolver {
 public:
  using Index = std::uint32_t;
  using List = std::vector<Index>;

  ComponentSolver(const std::vector<Triangle>& tris, std::uint64_t budget) : budget_(budget) {
    std::vector<Vertex> verts;
    for (const auto& t : tris) verts.insert(verts.end(), t.v.begin(), t.v.end());
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    local_.resize(tris.size());
    for (std::size_t i = 0; i < tris.size(); ++i)
      for (int k = 0; k < 3; ++k)
        local_[i][k] = static_cast<Index>(std::lower_bound(verts.begin(), verts.end(), tris[i].v[k]) - verts.begin());
    seen_.assign(verts.size(), 0);
    owner_.assign(verts.size(), 0);
    degree_.assign(verts.size(), 0);
  }

  List solve() {
    List all(local_.size());
    std::iota(all.begin(), all.end(), Index{0});
    return solve_list(all);
  }

 private:
  struct ListHash {
    std::size_t operator()(const List& l) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ l.size();
      for (Index x : l) h = (h ^ x) * 0x100000001b3ULL;
      return static_cast<std::size_t>(h);
    }
  };
  static constexpr std::size_t kMemoLimit = 1 << 18;

  bool meets(Index a, Index b) const {
    for (Index x : local_[a])
      if (x == local_[b][0] || x == local_[b][1] || x == local_[b][2]) return true;
    return false;
  }

  std::vector<List> split(const List& avail) {
    ++stamp_;
    DisjointSets dsu(avail.size());
    for (std::size_t i = 0; i < avail.size(); ++i)
      for (Index x : local_[avail[i]]) {
        if (seen_[x] == stamp_) {
          dsu.unite(owner_[x], i);
        } else {
          seen_[x] = stamp_;
          owner_[x] = static_cast<Index>(i);
        }
      }
    std::vector<List> pieces;
    std::vector<std::size_t> slot(avail.size(), ~std::size_t{0});
    for (std::size_t i = 0; i < avail.size(); ++i) {
      const std::size_t r = dsu.find(i);
      if (slot[r] == ~std::size_t{0}) {
        slot[r] = pieces.size();
        pieces.emplace_back();
      }
      pieces[slot[r]].push_back(avail[i]);
    }
    return pieces;
  }

  // min(vertices / 3, size of a greedy hitting set); every hitting-set vertex
  // lies in at most one triangle of a matching.
  std::size_t upper_bound(const List& avail) {
    if (avail.size() <= 1) return avail.size();
    ++stamp_;
    std::size_t vertices = 0;
    for (Index t : avail)
      for (Index x : local_[t]) {
        if (seen_[x] != stamp_) {
          seen_[x] = stamp_;
          degree_[x] = 0;
          ++vertices;
        }
        ++degree_[x];
      }
    ++stamp_;  // seen_ == stamp_ now marks hitting-set membership
    std::size_t hits = 0;
    for (Index t : avail) {
      const auto& l = local_[t];
      if (seen_[l[0]] == stamp_ || seen_[l[1]] == stamp_ || seen_[l[2]] == stamp_) continue;
      Index pick = l[0];
      for (Index x : l)
        if (degree_[x] > degree_[pick]) pick = x;
      seen_[pick] = stamp_;
      ++hits;
    }
    return std::min(vertices / 3, hits);
  }

  List solve_list(const List& avail) {
    if (avail.size() <= 1) return avail;
    auto pieces = split(avail);
    if (pieces.size() == 1) return solve_connected(avail);
    List out;
    for (const auto& p : pieces) {
      const List r = solve_connected(p);
      out.insert(out.end(), r.begin(), r.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  List solve_connected(const List& avail) {
    if (avail.size() <= 1) return avail;
    if (auto it = memo_.find(avail); it != memo_.end()) return it->second;
    if (++nodes_ > budget_)
      throw BudgetExceeded("triangle matching: component with " + std::to_string(local_.size()) +
                           " triangles exceeded the branch-node budget");
    const std::size_t ceiling = upper_bound(avail);
    // avail is in canonical order, so the triangles through the smallest
    // vertex form a prefix
    const Index v = local_[avail[0]][0];
    List best;
    for (std::size_t i = 0; i < avail.size() && local_[avail[i]][0] == v; ++i) {
      const Index t = avail[i];
      List rest;
      for (Index u : avail)
        if (!meets(u, t)) rest.push_back(u);
      if (!best.empty() && 1 + upper_bound(rest) <= best.size()) continue;
      List sub = solve_list(rest);
      if (best.empty() || sub.size() + 1 > best.size()) {
        sub.push_back(t);
        std::sort(sub.begin(), sub.end());
        best = std::move(sub);
      }
      if (best.size() >= ceiling) break;
    }
    if (best.size() < ceiling) {
      List rest;
      for (Index u : avail)
        if (local_[u][0] != v) rest.push_back(u);
      if (upper_bound(rest) > best.size()) {
        List sub = solve_list(rest);
        if (sub.size() > best.size()) best = std::move(sub);
      }
    }
    if (memo_.size() < kMemoLimit) memo_.emplace(avail, best);
    return best;
  }

  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::array<Index, 3>> local_;
  std::vector<std::uint64_t> seen_;
  std::vector<Index> owner_;
  std::vector<std::uint32_t> degree_;
  std::uint64_t stamp_ = 0;
  std::unordered_map<List, List, ListHash> memo_;
};

}  // namespace

std::vector<Triangle> enumerate_triangles(const Graph& g) {
  std::vector<Triangle> out;
  for_each_triangle(g, [&](Vertex a, Vertex b, Vertex c) {
    Triangle t;
    t.v = {a, b, c};
    out.push_back(t);
  });
  return out;
}

std::uint64_t count_x(const Graph& g) {
  std::uint64_t total = 0;
  for_each_triangle(g, [&](Vertex, Vertex, Vertex) { ++total; });
  return total;
}

std::uint64_t count_y(const Graph& g) {
  const auto tris = enumerate_triangles(g);
  std::vector<std::uint32_t> incidence(g.n(), 0);
  for (const auto& t : tris)
    for (Vertex x : t.v) ++incidence[x];
  std::uint64_t y = 0;
  for (const auto& t : tris)
    if (incidence[t.v[0]] > 1 || incidence[t.v[1]] > 1 || incidence[t.v[2]] > 1) ++y;
  return y;
}

std::vector<std::vector<std::size_t>> conflict_components(const std::vector<Triangle>& triangles) {
  DisjointSets dsu(triangles.size());
  Vertex max_vertex = 0;
  for (const auto& t : triangles) max_vertex = std::max(max_vertex, t.v[2]);
  constexpr std::size_t kNone = ~std::size_t{0};
  std::vector<std::size_t> first(triangles.empty() ? 0 : max_vertex + 1, kNone);
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    for (Vertex x : triangles[i].v) {
      if (first[x] == kNone)
        first[x] = i;
      else
        dsu.unite(first[x], i);
    }
  }
  // Roots are the smallest index in each set, so scanning indices in order
  // yields components ordered by smallest triangle.
  std::vector<std::size_t> slot(triangles.size(), kNone);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    const std::size_t r = dsu.find(i);
    if (slot[r] == kNone) {
      slot[r] = comps.size();
      comps.emplace_back();
    }
    comps[slot[r]].push_back(i);
  }
  return comps;
}

TriangleMatching max_triangle_matching(const std::vector<Triangle>& triangles,
                                       const TriangleSolverOptions& opts) {
  std::vector<Triangle> chosen;
  for (const auto& comp : conflict_components(triangles)) {
    if (comp.size() == 1) {
      chosen.push_back(triangles[comp[0]]);
      continue;
    }
    std::vector<Triangle> local;
    local.reserve(comp.size());
    for (std::size_t i : comp) local.push_back(triangles[i]);
    ComponentSolver solver(local, opts.node_budget);
    for (auto i : solver.solve()) chosen.push_back(local[i]);
  }
  return finish(std::move(chosen), true);
}

TriangleMatching max_triangle_matching(const Graph& g, const TriangleSolverOptions& opts) {
  return max_triangle_matching(enumerate_triangles(g), opts);
}

TriangleMatching greedy_triangle_matching(const Graph& g) {
  std::vector<char> used(g.n(), 0);
  std::vector<Triangle> chosen;
  for (const auto& t : enumerate_triangles(g)) {
    if (used[t.v[0]] || used[t.v[1]] || used[t.v[2]]) continue;
    used[t.v[0]] = used[t.v[1]] = used[t.v[2]] = 1;
    chosen.push_back(t);
  }
  return finish(std::move(chosen), false);
}

void write_triangle_matching(std::ostream& out, const TriangleMatching& m) {
  for (const auto& t : m.triangles) out << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
}

TriangleMatching read_triangle_matching(std::istream& in) {
  std::vector<Triangle> tris;
  std::uint64_t a, b, c;
  while (in >> a >> b >> c)
    tris.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b), static_cast<Vertex>(c));
  for (std::size_t i = 0; i < tris.size(); ++i)
    for (std::size_t j = i + 1; j < tris.size(); ++j)
      require(!tris[i].intersects(tris[j]), "triangle matching: triangles overlap");
  return finish(std::move(tris), false);
}

}  // namespace densechi

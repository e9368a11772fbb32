#include "densechi/chromatic.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "densechi/error.hpp"
#include "densechi/matching.hpp"

namespace densechi {

std::string_view to_string(ChiMethod m) {
  switch (m) {
    case ChiMethod::structural:
      return "structural";
    case ChiMethod::packing_exact:
      return "packing_exact";
    case ChiMethod::generic_exact:
      return "generic_exact";
  }
  return "unknown";
}

std::size_t structural_chi(std::size_t n, std::size_t s) {
  require(3 * s <= n, "structural_chi: 3s exceeds n");
  return (n - s + 1) / 2;
}

bool has_k4(const Graph& g) {
  std::vector<Vertex> common;
  for (Vertex u = 0; u < g.n(); ++u) {
    auto nu = g.neighbors(u);
    for (auto it = std::upper_bound(nu.begin(), nu.end(), u); it != nu.end(); ++it) {
      const Vertex v = *it;
      auto nv = g.neighbors(v);
      common.clear();
      std::set_intersection(it + 1, nu.end(), std::upper_bound(nv.begin(), nv.end(), v), nv.end(),
                            std::back_inserter(common));
      for (std::size_t i = 0; i < common.size(); ++i)
        for (std::size_t j = i + 1; j < common.size(); ++j)
          if (g.has_edge(common[i], common[j])) return true;
    }
  }
  return false;
}

std::optional<std::size_t> check_coloring(const Graph& g, const Coloring& colors) {
  if (colors.size() != g.n()) return std::nullopt;
  for (auto [u, v] : g.edges())
    if (colors[u] == colors[v]) return std::nullopt;
  Coloring used = colors;
  std::sort(used.begin(), used.end());
  return static_cast<std::size_t>(std::unique(used.begin(), used.end()) - used.begin());
}

namespace {

std::size_t matching_weight_without(const Graph& g, const std::vector<Triangle>& tris) {
  std::vector<Vertex> cover;
  for (const auto& t : tris) cover.insert(cover.end(), t.v.begin(), t.v.end());
  return general_max_matching(induced_remove(g, VertexSet(std::move(cover))).graph).size;
}

// A conflict component of the triangles still available at a search node.
struct Component {
  std::vector<std::size_t> members;  // indices into the triangle list, ascending
  std::vector<Vertex> vertices;      // sorted
  std::size_t s = 0;                 // maximum matching size inside the component
};

// Branch and bound over single triangles. A node has some triangles chosen,
// some excluded, and the rest available; the available ones split into
// conflict components, and each component C is relaxed to s(C) dummy
// vertices joined to all of V(C), so each triangle abc of C can be mimicked
// by the pair of edges ab, c-dummy. A maximum matching of that auxiliary
// graph therefore bounds the subtree, and is attained when its dummy edges
// can be turned back into disjoint triangles.
class PackingSearch {
 public:
  PackingSearch(const Graph& g, const std::vector<Triangle>& tris, const PackingOptions& opts)
      : g_(g), tris_(tris), opts_(opts) {}

  // Returns the best triangle set found, starting from `incumbent`.
  std::vector<Triangle> run(const std::vector<Triangle>& incumbent, std::size_t incumbent_weight,
                            std::size_t global_bound) {
    set_best(incumbent, incumbent_weight);
    global_bound_ = global_bound;
    if (best_weight_ < global_bound_) search(std::vector<State>(tris_.size(), State::available));
    return best_;
  }

 private:
  enum class State : std::uint8_t { available, chosen, excluded };
  static constexpr std::size_t kNone = ~std::size_t{0};

  void search(std::vector<State> state) {
    if (best_weight_ >= global_bound_) return;
    if (++nodes_ > opts_.node_budget)
      throw BudgetExceeded("packing: branch-and-bound exceeded " + std::to_string(opts_.node_budget) +
                           " nodes");

    std::vector<Triangle> fixed;
    std::vector<std::size_t> available;
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      if (state[i] == State::chosen) fixed.push_back(tris_[i]);
      if (state[i] == State::available) available.push_back(i);
    }
    std::vector<Triangle> avail_tris;
    for (std::size_t i : available) avail_tris.push_back(tris_[i]);
    std::vector<Component> comps;
    for (const auto& idx : conflict_components(avail_tris)) {
      Component c;
      std::vector<Triangle> local_tris;
      for (std::size_t k : idx) {
        c.members.push_back(available[k]);
        local_tris.push_back(avail_tris[k]);
        c.vertices.insert(c.vertices.end(), avail_tris[k].v.begin(), avail_tris[k].v.end());
      }
      std::sort(c.vertices.begin(), c.vertices.end());
      c.vertices.erase(std::unique(c.vertices.begin(), c.vertices.end()), c.vertices.end());
      c.s = max_triangle_matching(local_tris, opts_.triangle).size();
      comps.push_back(std::move(c));
    }

    std::vector<Vertex> cover;
    for (const auto& t : fixed) cover.insert(cover.end(), t.v.begin(), t.v.end());
    const auto rest = induced_remove(g_, VertexSet(std::move(cover)));
    const std::size_t base = rest.graph.n();
    std::vector<Vertex> local(g_.n(), kUnmatched);
    for (Vertex i = 0; i < base; ++i) local[rest.to_original[i]] = i;
    std::vector<Edge> edges = rest.graph.edges();
    std::size_t dummies = 0;
    for (const auto& c : comps)
      for (std::size_t k = 0; k < c.s; ++k, ++dummies)
        for (Vertex v : c.vertices) edges.emplace_back(local[v], static_cast<Vertex>(base + dummies));
    const Graph aux = Graph::from_edges(base + dummies, edges);

    // Warm start from the incumbent: its available triangles as pair plus
    // apex-dummy edges, then its matching edges.
    std::vector<Vertex> mate(aux.n(), kUnmatched);
    auto link = [&](Vertex x, Vertex y) {
      if (x == kUnmatched || y == kUnmatched || mate[x] != kUnmatched || mate[y] != kUnmatched) return;
      mate[x] = y;
      mate[y] = x;
    };
    std::size_t dummy_base = base;
    for (const auto& c : comps) {
      std::size_t used = 0;
      for (std::size_t t : c.members) {
        if (used == c.s || !in_best_[t]) continue;
        const auto& v = tris_[t].v;
        if (mate[local[v[0]]] != kUnmatched || mate[local[v[1]]] != kUnmatched || mate[local[v[2]]] != kUnmatched)
          continue;
        link(local[v[0]], local[v[1]]);
        link(local[v[2]], static_cast<Vertex>(dummy_base + used));
        ++used;
      }
      dummy_base += c.s;
    }
    for (auto [u, v] : best_edges_) link(local[u], local[v]);
    const Matching m = general_max_matching(aux, std::move(mate));
    const std::size_t bound = 2 * fixed.size() + m.size;
    if (bound <= best_weight_) return;

    std::vector<Triangle> realised = fixed;
    std::size_t open = kNone;
    for (std::size_t c = 0; c < comps.size() && open == kNone; ++c) {
      std::vector<Vertex> apexes;
      for (Vertex v : comps[c].vertices) {
        const Vertex mv = m.mate[local[v]];
        if (mv != kUnmatched && mv >= base) apexes.push_back(v);
      }
      auto found = realise(comps[c], apexes, m, local);
      if (!found)
        open = c;
      else
        realised.insert(realised.end(), found->begin(), found->end());
    }
    if (open == kNone) {
      set_best(realised, bound);
      return;
    }

    const std::size_t pick = comps[open].members.front();
    std::vector<State> with = state;
    with[pick] = State::chosen;
    for (std::size_t i : comps[open].members)
      if (i != pick && tris_[i].intersects(tris_[pick])) with[i] = State::excluded;
    search(std::move(with));
    state[pick] = State::excluded;
    search(std::move(state));
  }

  // Assigns each apex c a distinct matched pair ab with abc an available
  // triangle of the component (Kuhn's augmenting paths; apex sets are tiny).
  // Apexes are matched to dummies, so distinct pairs give disjoint triangles.
  std::optional<std::vector<Triangle>> realise(const Component& comp, const std::vector<Vertex>& apexes,
                                               const Matching& m, const std::vector<Vertex>& local) {
    if (apexes.empty()) return std::vector<Triangle>{};
    // options[k]: (pair key, triangle index); a pair is keyed by its smaller vertex.
    std::vector<std::vector<std::pair<Vertex, std::size_t>>> options(apexes.size());
    for (std::size_t k = 0; k < apexes.size(); ++k) {
      for (std::size_t t : comp.members) {
        const auto& tri = tris_[t];
        if (!tri.contains(apexes[k])) continue;
        Vertex a = kUnmatched, b = kUnmatched;
        for (Vertex x : tri.v)
          if (x != apexes[k]) (a == kUnmatched ? a : b) = x;
        if (m.mate[local[a]] == local[b]) options[k].emplace_back(a, t);
      }
    }
    std::vector<std::size_t> pair_owner(g_.n(), kNone);
    std::vector<std::size_t> chosen(apexes.size(), 0);
    std::function<bool(std::size_t, std::vector<char>&)> augment = [&](std::size_t k, std::vector<char>& seen) {
      for (auto [key, t] : options[k]) {
        if (seen[key]) continue;
        seen[key] = 1;
        if (pair_owner[key] == kNone || augment(pair_owner[key], seen)) {
          pair_owner[key] = k;
          chosen[k] = t;
          return true;
        }
      }
      return false;
    };
    for (std::size_t k = 0; k < apexes.size(); ++k) {
      std::vector<char> seen(g_.n(), 0);
      if (!augment(k, seen)) return std::nullopt;
    }
    std::vector<Triangle> out;
    for (std::size_t k = 0; k < apexes.size(); ++k) out.push_back(tris_[chosen[k]]);
    return out;
  }

  void set_best(const std::vector<Triangle>& tris, std::size_t weight) {
    best_ = tris;
    best_weight_ = weight;
    in_best_.assign(tris_.size(), 0);
    std::vector<Vertex> cover;
    for (const auto& t : best_) {
      in_best_[static_cast<std::size_t>(std::lower_bound(tris_.begin(), tris_.end(), t) - tris_.begin())] = 1;
      cover.insert(cover.end(), t.v.begin(), t.v.end());
    }
    const auto rest = induced_remove(g_, VertexSet(std::move(cover)));
    best_edges_.clear();
    for (auto [u, v] : general_max_matching(rest.graph).edges())
      best_edges_.emplace_back(rest.to_original[u], rest.to_original[v]);
  }

  const Graph& g_;
  const std::vector<Triangle>& tris_;
  const PackingOptions& opts_;
  std::vector<Triangle> best_;
  std::vector<char> in_best_;
  std::vector<Edge> best_edges_;
  std::size_t best_weight_ = 0;
  std::size_t global_bound_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace

Packing max_weight_packing(const Graph& g, const PackingOptions& opts) {
  const auto tris = enumerate_triangles(g);
  const auto s = max_triangle_matching(tris, opts.triangle);
  // Any packing using k triangles has weight 2k + nu(G - V(T)) <= floor((n + k) / 2).
  const std::size_t global_bound = (g.n() + s.size()) / 2;
  const std::size_t start = 2 * s.size() + matching_weight_without(g, s.triangles);

  std::vector<Triangle> best = s.triangles;
  if (start < global_bound) {
    PackingSearch search(g, tris, opts);
    best = search.run(s.triangles, start, global_bound);
  }
  std::sort(best.begin(), best.end());

  Packing p;
  p.triangles = best;
  std::vector<Vertex> cover;
  for (const auto& t : best) cover.insert(cover.end(), t.v.begin(), t.v.end());
  const auto rest = induced_remove(g, VertexSet(std::move(cover)));
  for (auto [u, v] : general_max_matching(rest.graph).edges())
    p.edges.emplace_back(rest.to_original[u], rest.to_original[v]);
  return p;
}

ChiResult packing_chi_from_complement(const Graph& complement_graph, const PackingOptions& opts) {
  if (has_k4(complement_graph))
    throw K4Present("packing_chi: complement contains K4, colour classes are not limited to triangles");
  const Packing p = max_weight_packing(complement_graph, opts);
  const std::size_t n = complement_graph.n();

  Coloring colors(n, 0);
  std::vector<char> done(n, 0);
  std::uint32_t next = 0;
  for (const auto& t : p.triangles) {
    for (Vertex x : t.v) {
      colors[x] = next;
      done[x] = 1;
    }
    ++next;
  }
  for (auto [u, v] : p.edges) {
    colors[u] = colors[v] = next++;
    done[u] = done[v] = 1;
  }
  for (Vertex v = 0; v < n; ++v)
    if (!done[v]) colors[v] = next++;

  // Every colour class must be a clique of the complement, i.e. independent
  // in the dense graph.
  std::vector<std::vector<Vertex>> classes(next);
  for (Vertex v = 0; v < n; ++v) classes[colors[v]].push_back(v);
  for (const auto& cls : classes)
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j)
        if (!complement_graph.has_edge(cls[i], cls[j]))
          throw std::logic_error("packing_chi: assembled colouring is not proper");

  ChiResult r;
  r.chi = n - p.weight();
  r.method = ChiMethod::packing_exact;
  if (r.chi != next) throw std::logic_error("packing_chi: certificate size mismatch");
  r.certificate = std::move(colors);
  return r;
}

ChiResult packing_chi(const Graph& g_dense, const PackingOptions& opts) {
  return packing_chi_from_complement(complement(g_dense), opts);
}

namespace {

class Dsatur {
 public:
  explicit Dsatur(const Graph& g) : g_(g), color_(g.n(), kNone), best_(g.n()) {
    // Greedy DSATUR run gives the first upper bound.
    for (std::size_t step = 0; step < g.n(); ++step) {
      const Vertex v = pick();
      color_[v] = smallest_free(v);
    }
    best_ = color_;
    best_k_ = count(color_);
    std::fill(color_.begin(), color_.end(), kNone);
  }

  Coloring solve() {
    if (g_.n() == 0) return {};
    branch(0, 0);
    return best_;
  }

 private:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};

  static std::size_t count(const Coloring& c) {
    std::uint32_t m = 0;
    for (auto x : c) m = std::max(m, x + 1);
    return m;
  }

  std::size_t saturation(Vertex v) const {
    std::vector<char> seen(g_.n(), 0);
    std::size_t k = 0;
    for (Vertex w : g_.neighbors(v)) {
      const auto c = color_[w];
      if (c != kNone && !seen[c]) {
        seen[c] = 1;
        ++k;
      }
    }
    return k;
  }

  Vertex pick() const {
    Vertex best = kNone;
    std::size_t bs = 0, bd = 0;
    for (Vertex v = 0; v < g_.n(); ++v) {
      if (color_[v] != kNone) continue;
      const std::size_t s = saturation(v), d = g_.degree(v);
      if (best == kNone || s > bs || (s == bs && d > bd)) {
        best = v;
        bs = s;
        bd = d;
      }
    }
    return best;
  }

  bool usable(Vertex v, std::uint32_t c) const {
    for (Vertex w : g_.neighbors(v))
      if (color_[w] == c) return false;
    return true;
  }

  std::uint32_t smallest_free(Vertex v) const {
    std::uint32_t c = 0;
    while (!usable(v, c)) ++c;
    return c;
  }

  void branch(std::size_t colored, std::uint32_t used) {
    if (used >= best_k_) return;
    if (colored == g_.n()) {
      best_ = color_;
      best_k_ = used;
      return;
    }
    const Vertex v = pick();
    for (std::uint32_t c = 0; c <= used; ++c) {
      if (c == used && used + 1 >= best_k_) break;  // a new colour cannot beat the incumbent
      if (!usable(v, c)) continue;
      color_[v] = c;
      branch(colored + 1, std::max<std::uint32_t>(used, c + 1));
      color_[v] = kNone;
    }
  }

  const Graph& g_;
  Coloring color_;
  Coloring best_;
  std::size_t best_k_ = 0;
};

}  // namespace

ChiResult generic_exact_chi(const Graph& g, std::size_t max_vertices) {
  require(g.n() <= max_vertices,
          "generic_exact_chi: " + std::to_string(g.n()) + " vertices exceeds cap " + std::to_string(max_vertices));
  Dsatur solver(g);
  Coloring c = solver.solve();
  const auto k = check_coloring(g, c);
  if (!k) throw std::logic_error("generic_exact_chi: produced colouring is not proper");
  ChiResult r;
  r.chi = *k;
  r.method = ChiMethod::generic_exact;
  r.certificate = std::move(c);
  return r;
}

FormulaCheck verify_structural_formula(const Graph& g_complement, const PackingOptions& opts) {
  FormulaCheck f;
  const auto s = max_triangle_matching(g_complement, opts.triangle);
  f.chi_structural = structural_chi(g_complement.n(), s.size());
  f.chi_exact = packing_chi_from_complement(g_complement, opts).chi;
  f.agree = f.chi_structural == f.chi_exact;
  return f;
}

}  // namespace densechi

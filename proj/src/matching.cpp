#include "densechi/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "densechi/chromatic.hpp"
#include "densechi/error.hpp"

namespace densechi {

Bipartition random_equipartition(std::size_t m, RandomSource& rng) {
  std::vector<Vertex> order(m);
  std::iota(order.begin(), order.end(), Vertex{0});
  for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  const std::size_t half = m / 2;
  Bipartition part;
  part.a = VertexSet(std::vector<Vertex>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half)));
  part.b = VertexSet(std::vector<Vertex>(order.begin() + static_cast<std::ptrdiff_t>(half), order.end()));
  return part;
}

namespace {

constexpr std::uint32_t kNone = ~std::uint32_t{0};
constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

// Bipartite A-B restriction of g with local indices on each side.
struct SideGraph {
  std::vector<Vertex> a_vertices, b_vertices;
  std::vector<std::vector<std::uint32_t>> adj;  // A-local -> B-local

  SideGraph(const Graph& g, const Bipartition& part)
      : a_vertices(part.a.begin(), part.a.end()), b_vertices(part.b.begin(), part.b.end()) {
    require(set_intersection(part.a, part.b).empty(), "bipartition sides overlap");
    std::vector<std::uint32_t> b_index(g.n(), kNone);
    for (std::uint32_t j = 0; j < b_vertices.size(); ++j) {
      require(b_vertices[j] < g.n(), "bipartition vertex out of range");
      b_index[b_vertices[j]] = j;
    }
    adj.resize(a_vertices.size());
    for (std::uint32_t i = 0; i < a_vertices.size(); ++i) {
      require(a_vertices[i] < g.n(), "bipartition vertex out of range");
      for (Vertex w : g.neighbors(a_vertices[i]))
        if (b_index[w] != kNone) adj[i].push_back(b_index[w]);
    }
  }
};

struct HopcroftKarp {
  const SideGraph& sg;
  std::vector<std::uint32_t> match_a, match_b, dist, it;
  std::uint32_t free_layer = kInf;

  explicit HopcroftKarp(const SideGraph& s)
      : sg(s),
        match_a(s.a_vertices.size(), kNone),
        match_b(s.b_vertices.size(), kNone),
        dist(s.a_vertices.size()),
        it(s.a_vertices.size()) {}

  bool bfs() {
    std::vector<std::uint32_t> queue;
    for (std::uint32_t a = 0; a < match_a.size(); ++a) {
      if (match_a[a] == kNone) {
        dist[a] = 0;
        queue.push_back(a);
      } else {
        dist[a] = kInf;
      }
    }
    free_layer = kInf;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t x = queue[head];
      if (dist[x] + 1 > free_layer) break;
      for (std::uint32_t b : sg.adj[x]) {
        const std::uint32_t y = match_b[b];
        if (y == kNone) {
          if (free_layer == kInf) free_layer = dist[x] + 1;
        } else if (dist[y] == kInf) {
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
      }
    }
    return free_layer != kInf;
  }

  bool dfs(std::uint32_t root) {
    std::vector<std::uint32_t> stack{root};
    while (!stack.empty()) {
      const std::uint32_t x = stack.back();
      if (it[x] == sg.adj[x].size()) {
        dist[x] = kInf;
        stack.pop_back();
        if (!stack.empty()) ++it[stack.back()];
        continue;
      }
      const std::uint32_t b = sg.adj[x][it[x]];
      const std::uint32_t y = match_b[b];
      if (y == kNone) {
        if (dist[x] + 1 == free_layer) {
          for (auto k = stack.size(); k-- > 0;) {
            const std::uint32_t u = stack[k];
            const std::uint32_t ub = sg.adj[u][it[u]];
            match_a[u] = ub;
            match_b[ub] = u;
          }
          return true;
        }
        ++it[x];
      } else if (dist[y] == dist[x] + 1) {
        stack.push_back(y);
      } else {
        ++it[x];
      }
    }
    return false;
  }

  void run() {
    while (bfs()) {
      std::fill(it.begin(), it.end(), 0);
      for (std::uint32_t a = 0; a < match_a.size(); ++a)
        if (match_a[a] == kNone) dfs(a);
    }
  }
};

}  // namespace

std::vector<Edge> bipartite_max_matching(const Graph& g, const Bipartition& part) {
  SideGraph sg(g, part);
  HopcroftKarp hk(sg);
  hk.run();
  std::vector<Edge> out;
  for (std::uint32_t a = 0; a < hk.match_a.size(); ++a)
    if (hk.match_a[a] != kNone) out.emplace_back(sg.a_vertices[a], sg.b_vertices[hk.match_a[a]]);
  return out;
}

std::optional<HallWitness> hall_witness(const Graph& g, const Bipartition& part) {
  SideGraph sg(g, part);
  HopcroftKarp hk(sg);
  hk.run();
  std::vector<char> seen_a(sg.a_vertices.size(), 0), seen_b(sg.b_vertices.size(), 0);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t a = 0; a < hk.match_a.size(); ++a)
    if (hk.match_a[a] == kNone) {
      seen_a[a] = 1;
      queue.push_back(a);
    }
  if (queue.empty()) return std::nullopt;
  const std::size_t free_count = queue.size();
  std::size_t reached_b = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (std::uint32_t b : sg.adj[queue[head]]) {
      if (seen_b[b]) continue;
      seen_b[b] = 1;
      ++reached_b;
      const std::uint32_t y = hk.match_b[b];  // matched, or the matching was not maximum
      if (!seen_a[y]) {
        seen_a[y] = 1;
        queue.push_back(y);
      }
    }
  }
  HallWitness w;
  std::vector<Vertex> t;
  for (std::uint32_t a : queue) t.push_back(sg.a_vertices[a]);
  w.t = VertexSet(std::move(t));
  w.deficiency = w.t.size() - reached_b;
  (void)free_count;
  return w;
}

std::vector<Edge> Matching::edges() const {
  std::vector<Edge> out;
  for (Vertex v = 0; v < mate.size(); ++v)
    if (mate[v] != kUnmatched && v < mate[v]) out.emplace_back(v, mate[v]);
  return out;
}

namespace {

// Edmonds' blossom algorithm. Blossoms are contracted implicitly through a
// union-find over blossom bases; a search is a BFS from a single exposed root.
class Blossom {
 public:
  explicit Blossom(const Graph& g)
      : g_(g),
        mate_(g.n(), kUnmatched),
        label_(g.n(), kUnlabeled),
        parent_(g.n(), kUnmatched),
        base_(g.n()),
        stamp_(g.n(), 0) {
    std::iota(base_.begin(), base_.end(), Vertex{0});
  }

  void set_mates(std::vector<Vertex> mate) { mate_ = std::move(mate); }

  void greedy_init() {
    std::vector<Vertex> order(g_.n());
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex a, Vertex b) { return g_.degree(a) < g_.degree(b); });
    for (Vertex v : order) {
      if (mate_[v] != kUnmatched) continue;
      Vertex pick = kUnmatched;
      for (Vertex w : g_.neighbors(v))
        if (mate_[w] == kUnmatched && (pick == kUnmatched || g_.degree(w) < g_.degree(pick))) pick = w;
      if (pick != kUnmatched) {
        mate_[v] = pick;
        mate_[pick] = v;
      }
    }
  }

  Matching run() {
    for (Vertex v = 0; v < g_.n(); ++v)
      if (mate_[v] == kUnmatched && g_.degree(v) > 0) search(v);
    Matching m;
    m.mate = std::move(mate_);
    for (Vertex v = 0; v < m.mate.size(); ++v)
      if (m.mate[v] != kUnmatched && v < m.mate[v]) ++m.size;
    return m;
  }

 private:
  static constexpr char kUnlabeled = -1, kEven = 0, kOdd = 1;

  Vertex find(Vertex x) {
    while (base_[x] != x) x = base_[x] = base_[base_[x]];
    return x;
  }

  void touch(Vertex x) {
    touched_.push_back(x);
    base_[x] = x;
  }

  Vertex lca(Vertex a, Vertex b) {
    ++timer_;
    for (;;) {
      a = find(a);
      stamp_[a] = timer_;
      if (mate_[a] == kUnmatched) break;
      a = parent_[mate_[a]];
    }
    for (;;) {
      b = find(b);
      if (stamp_[b] == timer_) return b;
      b = parent_[mate_[b]];
    }
  }

  void contract(Vertex v, Vertex w, Vertex a) {
    while (find(v) != a) {
      parent_[v] = w;
      w = mate_[v];
      if (label_[w] == kOdd) {
        label_[w] = kEven;
        queue_.push_back(w);
      }
      // only bases are relinked; an inner blossom joins when the walk reaches its base
      if (find(v) == v) base_[v] = a;
      if (find(w) == w) base_[w] = a;
      v = parent_[w];
    }
  }

  void augment(Vertex x) {
    while (x != kUnmatched) {
      const Vertex pv = parent_[x];
      const Vertex next = mate_[pv];
      mate_[x] = pv;
      mate_[pv] = x;
      x = next;
    }
  }

  bool search(Vertex root) {
    for (Vertex x : touched_) label_[x] = kUnlabeled;
    touched_.clear();
    queue_.clear();
    touch(root);
    label_[root] = kEven;
    parent_[root] = kUnmatched;
    queue_.push_back(root);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const Vertex v = queue_[head];
      for (Vertex x : g_.neighbors(v)) {
        if (label_[x] == kUnlabeled) {
          touch(x);
          label_[x] = kOdd;
          parent_[x] = v;
          if (mate_[x] == kUnmatched) {
            augment(x);
            return true;
          }
          const Vertex m = mate_[x];
          touch(m);
          label_[m] = kEven;
          queue_.push_back(m);
        } else if (label_[x] == kEven && find(v) != find(x)) {
          const Vertex a = lca(find(v), find(x));
          contract(x, v, a);
          contract(v, x, a);
        }
      }
    }
    return false;
  }

  const Graph& g_;
  std::vector<Vertex> mate_;
  std::vector<char> label_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> base_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t timer_ = 0;
  std::vector<Vertex> queue_, touched_;
};

}  // namespace

Matching general_max_matching(const Graph& g) {
  Blossom b(g);
  b.greedy_init();
  return b.run();
}

Matching general_max_matching(const Graph& g, std::vector<Vertex> initial_mate) {
  require(initial_mate.size() == g.n(), "warm-start matching has wrong size");
  for (Vertex v = 0; v < g.n(); ++v) {
    const Vertex m = initial_mate[v];
    if (m == kUnmatched) continue;
    require(m < g.n() && initial_mate[m] == v && g.has_edge(v, m), "warm-start is not a matching");
  }
  Blossom b(g);
  b.set_mates(std::move(initial_mate));
  b.greedy_init();
  return b.run();
}

StructureReport structure_check(const Graph& g, RandomSource& rng, const StructureOptions& opts) {
  return structure_check(g, max_triangle_matching(g, opts.triangle), rng, opts);
}

StructureReport structure_check(const Graph& g, const TriangleMatching& s, RandomSource& rng,
                                const StructureOptions& opts) {
  StructureReport r;
  r.n = g.n();
  r.q = opts.q;
  r.seed = opts.seed;
  r.s = s.size();
  r.chi_structural = structural_chi(g.n(), r.s);

  const auto rest = induced_remove(g, s.covered);
  const auto m = general_max_matching(rest.graph);
  r.deficiency = rest.graph.n() - 2 * m.size;
  r.near_perfect = r.deficiency <= 1;

  const int attempts = std::max(1, opts.equipartition_attempts);
  for (int k = 0; k < attempts; ++k) {
    r.equipartition_attempts = k + 1;
    const auto part = random_equipartition(rest.graph.n(), rng);
    const auto w = hall_witness(rest.graph, part);
    if (!w) {
      r.equipartition_near_perfect = true;
      r.bipartite_matching_size = part.a.size();
      r.witness_size.reset();
      r.witness_class.clear();
      break;
    }
    r.bipartite_matching_size = part.a.size() - w->deficiency;
    r.witness_size = w->t.size();
    const double scale = opts.q > 0.0 ? opts.hall_c / opts.q : std::numeric_limits<double>::infinity();
    const double t = static_cast<double>(w->t.size());
    if (t <= scale)
      r.witness_class = "small";
    else if (static_cast<double>(part.a.size()) - t <= scale)
      r.witness_class = "huge";
    else
      r.witness_class = "medium";
  }
  return r;
}

}  // namespace densechi

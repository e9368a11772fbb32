#include "densechi/martingale.hpp"

#include <cmath>

#include "densechi/error.hpp"
#include "densechi/triangles.hpp"

namespace densechi {

ExposurePrefix prefix_of(const Graph& full, std::size_t i) {
  require(i <= full.n(), "prefix_of: prefix longer than the graph");
  std::vector<Vertex> later;
  for (auto v = static_cast<Vertex>(i); v < full.n(); ++v) later.push_back(v);
  return {i, induced_remove(full, VertexSet(std::move(later))).graph};
}

ExposureClass classify_prefix(const ExposurePrefix& prefix, std::size_t n, double q) {
  require(prefix.g.n() == prefix.i, "classify_prefix: prefix graph must have i vertices");
  const double cap = 3.0 * q * static_cast<double>(n);
  ExposureClass c;
  c.in_N = true;
  for (Vertex v = 0; v < prefix.i && c.in_N; ++v) {
    std::size_t back = 0;
    for (Vertex w : prefix.g.neighbors(v))
      if (w < v) ++back;
    if (static_cast<double>(back) > cap) c.in_N = false;
  }
  if (c.in_N && prefix.i > 0) {
    const auto last = static_cast<Vertex>(prefix.i - 1);
    auto nb = prefix.g.neighbors(last);
    for (std::size_t a = 0; a < nb.size() && !c.in_N_star; ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        if (prefix.g.has_edge(nb[a], nb[b])) {
          c.in_N_star = true;
          break;
        }
  }
  return c;
}

std::vector<std::uint64_t> completion_tally(const ExposurePrefix& prefix, std::size_t n) {
  require(prefix.g.n() == prefix.i && prefix.i <= n, "completion_tally: malformed prefix");
  require(n <= 64, "completion_tally: more than 64 vertices");
  std::vector<Edge> slots;
  for (auto b = static_cast<Vertex>(prefix.i); b < n; ++b)
    for (Vertex a = 0; a < b; ++a) slots.emplace_back(a, b);
  require(slots.size() <= kMaxExhaustiveSlots,
          "exact_X: " + std::to_string(slots.size()) + " unexposed pairs exceeds the enumeration cap");

  SmallGraph g(n);
  for (auto [a, b] : prefix.g.edges()) g.add_edge(a, b);
  std::vector<std::uint64_t> tally(slots.size() + 1, 0);
  // Gray-code walk: one edge toggles per step.
  const std::uint64_t total = std::uint64_t{1} << slots.size();
  std::size_t edges = 0;
  for (std::uint64_t k = 0; k < total; ++k) {
    if (k > 0) {
      const auto bit = static_cast<std::size_t>(std::countr_zero(k));
      auto [a, b] = slots[bit];
      g.adj[a] ^= SmallGraph::Mask{1} << b;
      g.adj[b] ^= SmallGraph::Mask{1} << a;
      if (g.has_edge(a, b))
        ++edges;
      else
        --edges;
    }
    tally[edges] += static_cast<std::uint64_t>(small_triangle_matching_size(g));
  }
  return tally;
}

std::vector<PrefixLevel> all_prefix_tallies(std::size_t n) {
  require(n <= kMaxExactQuadraticVertices, "exact_quadratic_variation: too many vertices");
  std::vector<Edge> order;
  for (Vertex b = 1; b < n; ++b)
    for (Vertex a = 0; a < b; ++a) order.emplace_back(a, b);
  std::vector<PrefixLevel> levels(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    auto& level = levels[i];
    level.pairs = i == 0 ? 0 : i * (i - 1) / 2;
    level.tally.resize(std::size_t{1} << level.pairs);
    for (std::size_t mask = 0; mask < level.tally.size(); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t bit = 0; bit < level.pairs; ++bit)
        if ((mask >> bit) & 1U) edges.push_back(order[bit]);
      level.tally[mask] = completion_tally({i, Graph::from_edges(i, edges)}, n);
    }
  }
  return levels;
}

LastVertexTable last_vertex_table(const SmallGraph& g) {
  require(g.n() + 1 <= kMaxSingleStepVertices, "single-step enumeration: too many vertices");
  LastVertexTable t;
  t.k = g.n();
  t.s_base = small_triangle_matching_size(g);
  const SmallGraph::Mask all = (SmallGraph::Mask{1} << t.k) - 1;
  // good[a] holds every b with ab an edge and s(G - a - b) = s(G).
  std::vector<SmallGraph::Mask> good(t.k, 0);
  for (std::size_t a = 0; a < t.k; ++a)
    for (std::size_t b = a + 1; b < t.k; ++b) {
      if (!g.has_edge(a, b)) continue;
      const SmallGraph::Mask alive = all & ~(SmallGraph::Mask{1} << a) & ~(SmallGraph::Mask{1} << b);
      if (small_triangle_matching_size(g, alive) == t.s_base) {
        good[a] |= SmallGraph::Mask{1} << b;
        good[b] |= SmallGraph::Mask{1} << a;
      }
    }
  t.gain.assign(std::size_t{1} << t.k, 0);
  for (std::size_t mask = 1; mask < t.gain.size(); ++mask) {
    const auto a = static_cast<std::size_t>(std::countr_zero(mask));
    t.gain[mask] = t.gain[mask & (mask - 1)] | static_cast<std::uint8_t>((good[a] & mask) != 0);
  }
  return t;
}

Graph sample_completion(const ExposurePrefix& prefix, std::size_t n, double q, RandomSource& rng) {
  require(prefix.g.n() == prefix.i && prefix.i <= n, "sample_completion: malformed prefix");
  require(q >= 0.0 && q <= 1.0, "sample_completion: q outside [0,1]");
  std::vector<Edge> edges = prefix.g.edges();
  for (auto b = static_cast<Vertex>(prefix.i); b < n; ++b)
    for (Vertex a = 0; a < b; ++a)
      if (rng.bernoulli(q)) edges.emplace_back(a, b);
  return Graph::from_edges(n, edges);
}

MartingaleEstimate estimate_X(const ExposurePrefix& prefix, std::size_t n, double q, std::size_t inner_samples,
                              RandomSource& rng) {
  require(inner_samples >= 1, "estimate_X: need at least one sample");
  MartingaleEstimate e;
  if (prefix.i == n) {
    e.value = static_cast<double>(max_triangle_matching(prefix.g).size());
    e.inner_samples = inner_samples;
    return e;
  }
  SampleStats s;
  for (std::size_t k = 0; k < inner_samples; ++k)
    s.add(static_cast<double>(max_triangle_matching(sample_completion(prefix, n, q, rng)).size()));
  e.value = s.mean();
  e.std_error = s.mean_standard_error();
  e.inner_samples = inner_samples;
  return e;
}

QuadraticVariationEstimate estimate_quadratic_variation(std::size_t n, double q, std::size_t outer_trials,
                                                        std::size_t inner_samples, RandomSource& rng) {
  require(outer_trials >= 1, "estimate_quadratic_variation: need at least one outer trial");
  SampleStats per_path;
  for (std::size_t t = 0; t < outer_trials; ++t) {
    RandomSource path = rng.child(t);
    const Graph full = sample_gnq(n, q, path);
    double v = 0.0;
    MartingaleEstimate prev;
    for (std::size_t i = 0; i <= n; ++i) {
      RandomSource inner = path.child(i + 1);
      const MartingaleEstimate cur = estimate_X(prefix_of(full, i), n, q, inner_samples, inner);
      if (i > 0) {
        const double d = cur.value - prev.value;
        v += d * d - cur.std_error * cur.std_error - prev.std_error * prev.std_error;
      }
      prev = cur;
    }
    per_path.add(v);
  }
  return {per_path.mean(), per_path.mean_standard_error(), outer_trials};
}

double freedman_bound(double t, double sigma2, double r) {
  require(t > 0.0 && sigma2 > 0.0 && r > 0.0, "freedman_bound: inputs must be positive");
  return std::exp(-t * t / (2.0 * sigma2 + r * t));
}

std::string class_label(const ExposureClass& c) {
  if (c.in_N_star) return "N_star";
  if (c.in_N) return "N";
  return "outside";
}

std::vector<IncrementRecord> trace_increments(const Graph& full, double q, std::size_t inner_samples,
                                              RandomSource& rng) {
  const std::size_t n = full.n();
  std::vector<IncrementRecord> out;
  MartingaleEstimate prev;
  for (std::size_t i = 0; i <= n; ++i) {
    RandomSource inner = rng.child(i);
    const auto prefix = prefix_of(full, i);
    const MartingaleEstimate cur = estimate_X(prefix, n, q, inner_samples, inner);
    if (i > 0) {
      IncrementRecord r;
      r.i = i;
      r.increment = cur.value - prev.value;
      r.std_error = std::sqrt(cur.std_error * cur.std_error + prev.std_error * prev.std_error);
      r.cls = classify_prefix(prefix, n, q);
      out.push_back(r);
    }
    prev = cur;
  }
  return out;
}

IncrementScaleCheck check_increment_scale(const Graph& full, double q) {
  const std::size_t n = full.n();
  require(n >= 1, "check_increment_scale: empty graph");
  IncrementScaleCheck c;
  c.cls = classify_prefix(prefix_of(full, n), n, q);
  c.increment = exact_single_step(full, q).increment();
  const double nd = static_cast<double>(n);
  c.bound = 7.0 * nd * nd * q * q * q;
  c.applicable = c.cls.in_N && !c.cls.in_N_star;
  c.violated = c.applicable && std::abs(c.increment) > c.bound;
  return c;
}

}  // namespace densechi

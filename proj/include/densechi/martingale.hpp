#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "densechi/graph.hpp"
#include "densechi/random.hpp"
#include "densechi/small_graph.hpp"
#include "densechi/stats.hpp"

namespace densechi {

/// The subgraph induced by the first i vertices under the natural vertex
/// order; the graph has exactly i vertices.
struct ExposurePrefix {
  std::size_t i = 0;
  Graph g;
};

ExposurePrefix prefix_of(const Graph& full, std::size_t i);

struct ExposureClass {
  bool in_N = false;       // every exposed vertex has backward degree <= 3qn
  bool in_N_star = false;  // in_N and the last exposed vertex is on a triangle
};

ExposureClass classify_prefix(const ExposurePrefix& prefix, std::size_t n, double q);

/// Largest number of unexposed pairs exact_X will enumerate.
inline constexpr std::size_t kMaxExhaustiveSlots = 25;

/// tally[e] = sum of s over all completions of the prefix to n vertices that
/// add exactly e edges; tally.size() - 1 is the number of unexposed pairs.
std::vector<std::uint64_t> completion_tally(const ExposurePrefix& prefix, std::size_t n);

/// sum_e tally[e] q^e (1-q)^(slots-e).
template <typename Scalar>
Scalar weighted_tally(const std::vector<std::uint64_t>& tally, const Scalar& q) {
  const std::size_t slots = tally.size() - 1;
  Scalar total = 0;
  for (std::size_t e = 0; e <= slots; ++e) {
    if (tally[e] == 0) continue;
    Scalar w = Scalar(tally[e]);
    for (std::size_t k = 0; k < e; ++k) w *= q;
    for (std::size_t k = e; k < slots; ++k) w *= (1 - q);
    total += w;
  }
  return total;
}

/// X_i = E[s(G) | G_i] by exhaustive enumeration of the unexposed pairs.
template <typename Scalar = double>
Scalar exact_X(const ExposurePrefix& prefix, std::size_t n, const Scalar& q) {
  return weighted_tally(completion_tally(prefix, n), q);
}

/// Exposing the last vertex v of a graph G + v on top of G: gain[N] =
/// s(G + v with neighbourhood N) - s(G), N a bitmask over V(G). Uses
/// s(G + v) = s(G) + [some edge ab inside N has s(G - a - b) = s(G)].
struct LastVertexTable {
  int s_base = 0;
  std::size_t k = 0;  // |V(G)|
  std::vector<std::uint8_t> gain;
};

inline constexpr std::size_t kMaxSingleStepVertices = 20;

LastVertexTable last_vertex_table(const SmallGraph& g);

/// E over the last vertex's neighbourhood of s(G + v).
template <typename Scalar = double>
Scalar expected_after_last(const LastVertexTable& t, const Scalar& q) {
  std::vector<std::uint64_t> tally(t.k + 1, 0);
  for (std::size_t mask = 0; mask < t.gain.size(); ++mask)
    tally[static_cast<std::size_t>(std::popcount(mask))] += t.gain[mask];
  return Scalar(t.s_base) + weighted_tally(tally, q);
}

/// X_{n-1} and X_n = s(G) for a full graph with at most 20 vertices.
template <typename Scalar = double>
struct SingleStep {
  Scalar x_prev;
  Scalar x_last;
  Scalar increment() const { return x_last - x_prev; }
};

template <typename Scalar = double>
SingleStep<Scalar> exact_single_step(const Graph& full, const Scalar& q) {
  const std::size_t n = full.n();
  SmallGraph sg = SmallGraph::from_graph(full);
  std::size_t mask = 0;
  for (Vertex w : full.neighbors(static_cast<Vertex>(n - 1))) mask |= std::size_t{1} << w;
  sg.clear_vertex_edges(n - 1);
  sg.adj.pop_back();
  const LastVertexTable t = last_vertex_table(sg);
  return {expected_after_last(t, q), Scalar(t.s_base + t.gain[mask])};
}

struct MartingaleEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t inner_samples = 0;
};

/// Random completion of the prefix to G(n, q).
Graph sample_completion(const ExposurePrefix& prefix, std::size_t n, double q, RandomSource& rng);

/// Monte Carlo X_i: mean of s over inner_samples random completions.
MartingaleEstimate estimate_X(const ExposurePrefix& prefix, std::size_t n, double q, std::size_t inner_samples,
                              RandomSource& rng);

struct QuadraticVariationEstimate {
  double value = 0.0;  // estimate of E[V_n]
  double std_error = 0.0;
  std::size_t outer_trials = 0;
};

/// Sum over i of (X_i - X_{i-1})^2 along sampled exposure paths, each squared
/// increment debiased by subtracting both estimators' squared standard errors.
QuadraticVariationEstimate estimate_quadratic_variation(std::size_t n, double q, std::size_t outer_trials,
                                                        std::size_t inner_samples, RandomSource& rng);

/// Completion tallies for every possible prefix on i vertices, i = 0..n.
/// Prefix masks list the pairs in exposure order (0,1), (0,2), (1,2), (0,3), ...
/// so the first C(i-1, 2) bits of a level-i mask encode its parent prefix.
struct PrefixLevel {
  std::size_t pairs = 0;  // C(i, 2)
  std::vector<std::vector<std::uint64_t>> tally;  // indexed by prefix mask
};

inline constexpr std::size_t kMaxExactQuadraticVertices = 6;

std::vector<PrefixLevel> all_prefix_tallies(std::size_t n);

/// E[V_n] = sum_i E[(X_i - X_{i-1})^2] exactly, over all graphs on n <= 6 vertices.
template <typename Scalar = double>
Scalar exact_quadratic_variation(std::size_t n, const Scalar& q) {
  const auto levels = all_prefix_tallies(n);
  std::vector<Scalar> prev{weighted_tally(levels[0].tally[0], q)};
  Scalar total = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& level = levels[i];
    const std::size_t parent_bits = levels[i - 1].pairs;
    std::vector<Scalar> cur(level.tally.size());
    for (std::size_t mask = 0; mask < level.tally.size(); ++mask) {
      cur[mask] = weighted_tally(level.tally[mask], q);
      const auto edges = static_cast<std::size_t>(std::popcount(mask));
      Scalar p = 1;
      for (std::size_t k = 0; k < edges; ++k) p *= q;
      for (std::size_t k = edges; k < level.pairs; ++k) p *= (1 - q);
      const Scalar d = cur[mask] - prev[mask & ((std::size_t{1} << parent_bits) - 1)];
      total += p * d * d;
    }
    prev = std::move(cur);
  }
  return total;
}

/// exp(-t^2 / (2 sigma2 + r t)); all inputs positive.
double freedman_bound(double t, double sigma2, double r);

struct IncrementRecord {
  std::size_t i = 0;
  double increment = 0.0;
  double std_error = 0.0;
  ExposureClass cls;
};

std::string class_label(const ExposureClass& c);

/// Estimated increments X_i - X_{i-1}, i = 1..n, along one sampled graph.
std::vector<IncrementRecord> trace_increments(const Graph& full, double q, std::size_t inner_samples,
                                              RandomSource& rng);

/// Exact last-step increment on a small graph, compared with 7 n^2 q^3 when
/// the prefix is in N but not in N*.
struct IncrementScaleCheck {
  ExposureClass cls;
  double increment = 0.0;
  double bound = 0.0;       // 7 n^2 q^3
  bool applicable = false;  // in_N && !in_N_star
  bool violated = false;
};

IncrementScaleCheck check_increment_scale(const Graph& full, double q);

}  // namespace densechi

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "densechi/graph.hpp"
#include "densechi/random.hpp"
#include "densechi/stats.hpp"
#include "densechi/triangles.hpp"

namespace densechi {

/// q(n) = coeff * n^{-exponent}.
struct QFamily {
  double coeff = 1.0;
  double exponent = 0.75;

  double operator()(double n) const;
};

/// r(n) = |q(n+1) - q(n)| q(n)^2 n^3; the family is smooth iff r(n) -> 0.
double smoothness_score(const QFamily& f, std::size_t n);

/// r(n) for a tabulated q: rows (n, q(n)) with consecutive n. One score per
/// adjacent pair, indexed by the smaller n.
std::vector<std::pair<std::size_t, double>> smoothness_scores(const std::vector<std::pair<std::size_t, double>>& table);

struct SmoothnessVerdict {
  double slope = 0.0;  // least-squares slope of log r against log n
  bool smooth = false;
  std::vector<std::pair<std::size_t, double>> samples;
};

/// Fits log r(n) on a geometric grid over [n_lo, n_hi]; smooth iff the slope
/// is below -0.01 (a constant r is not smooth).
SmoothnessVerdict smoothness_verdict(const QFamily& f, std::size_t n_lo = 1000, std::size_t n_hi = 1'000'000,
                                     std::size_t points = 25);
SmoothnessVerdict smoothness_verdict(const std::vector<std::pair<std::size_t, double>>& scores);

inline constexpr double kSmoothSlopeThreshold = -0.01;

/// 3 floor(eps n^{3/2} q^{3/2}).
std::size_t alpha(std::size_t n, double eps, double q);

struct PlantedGraph {
  Graph graph;
  Triangle planted;
};

/// g plus the three edges of a uniformly random 3-subset.
PlantedGraph plant_triangle(const Graph& g, RandomSource& rng);

/// K3(h) / (C(n+3, 3) q^3): the density of the planted law against G(n+3, q).
double planted_density_ratio(const Graph& h, std::size_t n_plus_3, double q);

/// E[K3]^{-1/2} with E[K3] = C(n+3, 3) q^3, evaluated in exact arithmetic.
double tv_bound_planted(std::size_t n, double q);

struct PlantedReport {
  std::size_t n = 0;  // G(n+3, q) is sampled; Q - T has n vertices
  double q = 0.0;
  std::size_t trials = 0;
  std::size_t plus_one_holds = 0;  // s(Q) >= s(Q - T) + 1
  SampleStats k3_planted;          // K3(Q)
  SampleStats k3_reweighted;       // K3(G) * ratio(G), G ~ G(n+3, q)
  double k3_planted_exact = 0.0;   // E[K3^2] / E[K3]
  SampleStats s_large;             // s(Q)
  SampleStats s_small;             // s(Q - T)
  SampleStats s_reweighted;        // s(G) * ratio(G)
  double tv_bound = 0.0;
  std::size_t sandwich_ok = 0;

  double plus_one_frequency() const {
    return trials == 0 ? 0.0 : static_cast<double>(plus_one_holds) / static_cast<double>(trials);
  }
};

struct PlantedTrial {
  std::size_t s_large = 0, s_small = 0;
  std::uint64_t k3_planted = 0, k3_plain = 0, s_plain = 0;
  double ratio = 0.0;
  bool sandwich_ok = false;  // on both Q and G
};

/// One coupled draw from a single stream: G ~ G(n+3, q), Q = G + random triangle.
PlantedTrial planted_trial(std::size_t n, double q, RandomSource& rng, const TriangleSolverOptions& opts = {});

/// Folds trials (in trial order) into a report.
PlantedReport summarize_planted(std::size_t n, double q, const std::vector<PlantedTrial>& trials);

/// (q_hi - q_lo) / (1 - q_lo): the sprinkling probability with
/// G(m, q_hi) ~ G(m, q_lo) ∪ G(m, x). Zero when q_hi <= q_lo.
double sprinkle_x(double q_lo, double q_hi);

/// q_lo + x (1 - q_lo) == q_hi in exact rational arithmetic, for the doubles given.
bool sprinkle_union_law_exact(double q_lo, double q_hi);

/// E[|K3(H ∪ G(m, x)) \ K3(H)| given H]: triples with j edges of H contribute x^{3-j}.
double expected_new_triangles(const Graph& h, double x);

/// C(m,3) x^3 + e(H) x^2 m + m Delta(H)^2 x.
double new_triangle_upper_bound(const Graph& h, double x);

struct SprinkleParams {
  std::size_t n_prime = 0;
  std::size_t n = 0;     // base size with n + alpha(n) <= n_prime
  double q_n = 0.0;      // q(n), edge probability of the union
  double q_nprime = 0.0; // q(n'), edge probability of H
  double eps = 0.1;

  double x() const { return sprinkle_x(q_nprime, q_n); }
  double degree_cap() const { return 2.0 * static_cast<double>(n) * q_n; }
};

/// Largest n with n + alpha(n) <= n_prime.
std::size_t base_size_for(std::size_t n_prime, const QFamily& f, double eps);

SprinkleParams sprinkle_params(std::size_t n_prime, const QFamily& f, double eps);

struct SprinkleTrial {
  std::size_t s_small = 0;  // s(H)
  std::size_t s_large = 0;  // s(G), G = H ∪ sprinkle
  std::uint64_t new_triangles = 0;
  double expected_new = 0.0;
  std::size_t max_degree = 0;  // of H
  bool degree_ok = false;      // Delta(H) <= 2 n q(n)
  bool few_new = false;        // new triangles <= eps^3 d^{3/2}
  bool s_close = false;        // s(G) <= s(H) + eps alpha(n)
  bool s_diff_ok = false;      // s(G) - s(H) <= new triangles
  bool sandwich_ok = false;    // on both H and G
};

SprinkleTrial sprinkle_trial(const SprinkleParams& p, RandomSource& rng, const TriangleSolverOptions& opts = {});

struct SprinkleReport {
  SprinkleParams params;
  std::size_t trials = 0;
  std::size_t degree_ok = 0, few_new = 0, s_close = 0, s_diff_ok = 0, sandwich_ok = 0;
  SampleStats new_minus_expected;
  double mean_expected = 0.0;
  double standard_error = 0.0;  // sqrt(max(sample var, mean expected) / trials)
  bool union_law_exact = false;
};

SprinkleReport summarize_sprinkle(const SprinkleParams& p, const std::vector<SprinkleTrial>& trials);

/// n_0 < n_1 < ... with n_k = n_{k-1} + alpha(n_{k-1}), stopping at the last
/// n_k <= 2 n_0. Throws if alpha vanishes.
std::vector<std::size_t> chain_schedule(std::size_t n0, const QFamily& f, double eps);
std::vector<std::size_t> chain_schedule(std::size_t n0, const std::function<std::size_t(std::size_t)>& step);

}  // namespace densechi

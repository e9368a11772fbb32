#include "densechi/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "densechi/error.hpp"

namespace densechi {

double QFamily::operator()(double n) const { return coeff * std::pow(n, -exponent); }

double smoothness_score(const QFamily& f, std::size_t n) {
  require(n >= 2, "smoothness_score: n must be at least 2");
  const double nd = static_cast<double>(n);
  const double q = f(nd);
  // q(n+1) - q(n) = q(n) ((1 + 1/n)^{-a} - 1), kept accurate for large n.
  const double diff = q * std::expm1(-f.exponent * std::log1p(1.0 / nd));
  return std::abs(diff) * q * q * nd * nd * nd;
}

std::vector<std::pair<std::size_t, double>> smoothness_scores(
    const std::vector<std::pair<std::size_t, double>>& table) {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t k = 0; k + 1 < table.size(); ++k) {
    const auto [n, q] = table[k];
    require(table[k + 1].first == n + 1, "smoothness table: rows must have consecutive n");
    const double nd = static_cast<double>(n);
    out.emplace_back(n, std::abs(table[k + 1].second - q) * q * q * nd * nd * nd);
  }
  return out;
}

SmoothnessVerdict smoothness_verdict(const std::vector<std::pair<std::size_t, double>>& scores) {
  SmoothnessVerdict v;
  v.samples = scores;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (auto [n, r] : scores) {
    if (!(r > 0.0)) continue;
    const double x = std::log(static_cast<double>(n)), y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1;
  }
  require(m >= 2, "smoothness_verdict: need at least two positive scores");
  v.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  v.smooth = v.slope < kSmoothSlopeThreshold;
  return v;
}

SmoothnessVerdict smoothness_verdict(const QFamily& f, std::size_t n_lo, std::size_t n_hi, std::size_t points) {
  require(n_lo >= 2 && n_hi > n_lo && points >= 2, "smoothness_verdict: bad grid");
  std::vector<std::pair<std::size_t, double>> scores;
  const double ratio = std::log(static_cast<double>(n_hi) / static_cast<double>(n_lo));
  for (std::size_t k = 0; k < points; ++k) {
    const auto n = static_cast<std::size_t>(
        std::llround(static_cast<double>(n_lo) * std::exp(ratio * static_cast<double>(k) / static_cast<double>(points - 1))));
    scores.emplace_back(n, smoothness_score(f, n));
  }
  return smoothness_verdict(scores);
}

std::size_t alpha(std::size_t n, double eps, double q) {
  require(eps > 0.0 && q >= 0.0, "alpha: invalid parameters");
  const double v = eps * std::pow(static_cast<double>(n) * q, 1.5);
  return 3 * static_cast<std::size_t>(std::floor(v));
}

PlantedGraph plant_triangle(const Graph& g, RandomSource& rng) {
  const std::size_t n = g.n();
  require(n >= 3, "plant_triangle: need at least three vertices");
  const auto a = static_cast<Vertex>(rng.below(n));
  Vertex b, c;
  do b = static_cast<Vertex>(rng.below(n));
  while (b == a);
  do c = static_cast<Vertex>(rng.below(n));
  while (c == a || c == b);
  std::vector<Edge> edges = g.edges();
  edges.emplace_back(a, b);
  edges.emplace_back(a, c);
  edges.emplace_back(b, c);
  return {Graph::from_edges(n, edges), Triangle(a, b, c)};
}

namespace {

Rational choose3(std::size_t m) {
  if (m < 3) return 0;
  return Rational(m) * (m - 1) * (m - 2) / 6;
}

}  // namespace

double planted_density_ratio(const Graph& h, std::size_t n_plus_3, double q) {
  require(q > 0.0 && q <= 1.0, "planted_density_ratio: q must lie in (0,1]");
  require(h.n() == n_plus_3, "planted_density_ratio: graph size does not match");
  require(n_plus_3 >= 3, "planted_density_ratio: need at least three vertices");
  const double expected = (choose3(n_plus_3) * Rational(q) * Rational(q) * Rational(q)).convert_to<double>();
  return static_cast<double>(count_x(h)) / expected;
}

double tv_bound_planted(std::size_t n, double q) {
  const Rational rq(q);
  const Rational expected = choose3(n + 3) * rq * rq * rq;
  require(expected > 0, "tv_bound_planted: expected triangle count is zero");
  return 1.0 / std::sqrt(expected.convert_to<double>());
}

PlantedTrial planted_trial(std::size_t n, double q, RandomSource& rng, const TriangleSolverOptions& opts) {
  RandomSource graph_rng = rng.child(0), plant_rng = rng.child(1);
  const Graph g = sample_gnq(n + 3, q, graph_rng);
  const auto planted = plant_triangle(g, plant_rng);
  const VertexSet t{planted.planted.v[0], planted.planted.v[1], planted.planted.v[2]};

  PlantedTrial r;
  r.s_large = max_triangle_matching(planted.graph, opts).size();
  r.s_small = max_triangle_matching(induced_remove(planted.graph, t).graph, opts).size();
  r.k3_planted = count_x(planted.graph);
  r.k3_plain = count_x(g);
  r.s_plain = max_triangle_matching(g, opts).size();
  r.ratio = planted_density_ratio(g, n + 3, q);
  r.sandwich_ok = sandwich_holds(r.s_large, r.k3_planted, count_y(planted.graph)) &&
                  sandwich_holds(r.s_plain, r.k3_plain, count_y(g));
  return r;
}

PlantedReport summarize_planted(std::size_t n, double q, const std::vector<PlantedTrial>& trials) {
  PlantedReport rep;
  rep.n = n;
  rep.q = q;
  rep.trials = trials.size();
  for (const auto& t : trials) {
    if (t.s_large >= t.s_small + 1) ++rep.plus_one_holds;
    rep.sandwich_ok += t.sandwich_ok;
    rep.k3_planted.add(static_cast<double>(t.k3_planted));
    rep.k3_reweighted.add(static_cast<double>(t.k3_plain) * t.ratio);
    rep.s_large.add(static_cast<double>(t.s_large));
    rep.s_small.add(static_cast<double>(t.s_small));
    rep.s_reweighted.add(static_cast<double>(t.s_plain) * t.ratio);
  }
  const auto m = exact_triangle_moments_rational(n + 3, Rational(q));
  if (m.mean > 0) rep.k3_planted_exact = ((m.variance + m.mean * m.mean) / m.mean).convert_to<double>();
  rep.tv_bound = tv_bound_planted(n, q);
  return rep;
}

double sprinkle_x(double q_lo, double q_hi) {
  require(q_lo >= 0.0 && q_lo < 1.0 && q_hi >= 0.0 && q_hi < 1.0, "sprinkle_x: probabilities must lie in [0,1)");
  if (q_hi <= q_lo) return 0.0;
  return (q_hi - q_lo) / (1.0 - q_lo);
}

bool sprinkle_union_law_exact(double q_lo, double q_hi) {
  require(q_lo >= 0.0 && q_lo < 1.0 && q_hi >= q_lo && q_hi < 1.0, "sprinkle_union_law_exact: need 0 <= q_lo <= q_hi < 1");
  const Rational lo(q_lo), hi(q_hi);
  const Rational x = (hi - lo) / (1 - lo);
  // An edge is absent from the union iff it is absent from both graphs.
  return 1 - (1 - lo) * (1 - x) == hi && lo + x * (1 - lo) == hi;
}

double expected_new_triangles(const Graph& h, double x) {
  require(x >= 0.0 && x <= 1.0, "expected_new_triangles: x outside [0,1]");
  const std::size_t m = h.n();
  Rational k3 = count_x(h);
  Rational cherries = 0;
  for (Vertex v = 0; v < m; ++v) {
    const Rational d = h.degree(v);
    cherries += d * (d - 1) / 2;
  }
  const Rational two = cherries - 3 * k3;  // triples with exactly two edges of H
  const Rational one = Rational(h.edge_count()) * (m >= 2 ? m - 2 : 0) - 2 * two - 3 * k3;
  const Rational zero = choose3(m) - one - two - k3;
  const Rational rx(x);
  return (zero * rx * rx * rx + one * rx * rx + two * rx).convert_to<double>();
}

double new_triangle_upper_bound(const Graph& h, double x) {
  const double m = static_cast<double>(h.n());
  const double delta = static_cast<double>(h.max_degree());
  return choose3(h.n()).convert_to<double>() * x * x * x + static_cast<double>(h.edge_count()) * x * x * m +
         m * delta * delta * x;
}

std::size_t base_size_for(std::size_t n_prime, const QFamily& f, double eps) {
  require(n_prime >= 2, "base_size_for: n' too small");
  std::size_t n = n_prime;
  while (n > 1 && n + alpha(n, eps, f(static_cast<double>(n))) > n_prime) --n;
  return n;
}

SprinkleParams sprinkle_params(std::size_t n_prime, const QFamily& f, double eps) {
  SprinkleParams p;
  p.n_prime = n_prime;
  p.n = base_size_for(n_prime, f, eps);
  p.q_n = f(static_cast<double>(p.n));
  p.q_nprime = f(static_cast<double>(n_prime));
  p.eps = eps;
  require(p.q_n > 0.0 && p.q_n < 1.0 && p.q_nprime > 0.0 && p.q_nprime < 1.0,
          "sprinkle_params: q family leaves (0,1) on this range");
  return p;
}

SprinkleTrial sprinkle_trial(const SprinkleParams& p, RandomSource& rng, const TriangleSolverOptions& opts) {
  RandomSource h_rng = rng.child(0), x_rng = rng.child(1);
  const double x = p.x();
  const Graph h = sample_gnq(p.n_prime, p.q_nprime, h_rng);
  const Graph g = union_graphs(h, sample_gnq(p.n_prime, x, x_rng));

  SprinkleTrial t;
  t.s_small = max_triangle_matching(h, opts).size();
  t.s_large = max_triangle_matching(g, opts).size();
  const std::uint64_t x_small = count_x(h), x_large = count_x(g);
  t.new_triangles = x_large - x_small;
  t.sandwich_ok = sandwich_holds(t.s_small, x_small, count_y(h)) && sandwich_holds(t.s_large, x_large, count_y(g));
  t.expected_new = expected_new_triangles(h, x);
  t.max_degree = h.max_degree();
  const double d = p.degree_cap();
  t.degree_ok = static_cast<double>(t.max_degree) <= d;
  t.few_new = static_cast<double>(t.new_triangles) <= p.eps * p.eps * p.eps * std::pow(d, 1.5);
  t.s_close = static_cast<double>(t.s_large) <=
              static_cast<double>(t.s_small) + p.eps * static_cast<double>(alpha(p.n, p.eps, p.q_n));
  t.s_diff_ok = t.s_large <= t.s_small + t.new_triangles;
  return t;
}

SprinkleReport summarize_sprinkle(const SprinkleParams& p, const std::vector<SprinkleTrial>& trials) {
  SprinkleReport r;
  r.params = p;
  r.trials = trials.size();
  double expected_sum = 0.0;
  for (const auto& t : trials) {
    r.degree_ok += t.degree_ok;
    r.few_new += t.few_new;
    r.s_close += t.s_close;
    r.s_diff_ok += t.s_diff_ok;
    r.sandwich_ok += t.sandwich_ok;
    r.new_minus_expected.add(static_cast<double>(t.new_triangles) - t.expected_new);
    expected_sum += t.expected_new;
  }
  if (!trials.empty()) {
    const double m = static_cast<double>(trials.size());
    r.mean_expected = expected_sum / m;
    // Poisson-scale floor: the count is a sum of rare, weakly dependent
    // indicators, so its variance is at least of the order of its mean.
    r.standard_error = std::sqrt(std::max(r.new_minus_expected.variance(), r.mean_expected) / m);
  }
  r.union_law_exact = sprinkle_union_law_exact(p.q_nprime, p.q_n);
  return r;
}

std::vector<std::size_t> chain_schedule(std::size_t n0, const std::function<std::size_t(std::size_t)>& step) {
  std::vector<std::size_t> out{n0};
  for (;;) {
    const std::size_t a = step(out.back());
    require(a > 0, "chain_schedule: alpha vanished at n = " + std::to_string(out.back()));
    const std::size_t next = out.back() + a;
    if (next > 2 * n0) break;
    out.push_back(next);
  }
  return out;
}

std::vector<std::size_t> chain_schedule(std::size_t n0, const QFamily& f, double eps) {
  return chain_schedule(n0, [&](std::size_t n) { return alpha(n, eps, f(static_cast<double>(n))); });
}

}  // namespace densechi

#include <doctest.h>

#include <cmath>

#include "brute.hpp"
#include "densechi/coupling.hpp"
#include "densechi/error.hpp"

using namespace densechi;

namespace {

Graph graph_from_mask(std::size_t n, std::uint32_t mask) {
  std::vector<Edge> e;
  std::size_t k = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v, ++k)
      if ((mask >> k) & 1U) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

double brute_expected_new(const Graph& h, double x) {
  double total = 0.0;
  const std::size_t m = h.n();
  for (Vertex a = 0; a < m; ++a)
    for (Vertex b = a + 1; b < m; ++b)
      for (Vertex c = b + 1; c < m; ++c) {
        const int j = h.has_edge(a, b) + h.has_edge(a, c) + h.has_edge(b, c);
        if (j < 3) total += std::pow(x, 3 - j);
      }
  return total;
}

}  // namespace

TEST_CASE("smoothness verdicts on power families") {
  CHECK(smoothness_verdict(QFamily{1.0, 0.7}).smooth);
  CHECK(smoothness_verdict(QFamily{1.0, 0.8}).smooth);
  CHECK_FALSE(smoothness_verdict(QFamily{1.0, 0.6}).smooth);
  const auto boundary = smoothness_verdict(QFamily{2.0, 2.0 / 3.0});
  CHECK_FALSE(boundary.smooth);
  CHECK(std::abs(boundary.slope) < 1e-3);
  // r(n) tends to (2/3) c^3 at the boundary exponent
  CHECK(smoothness_score(QFamily{2.0, 2.0 / 3.0}, 1'000'000) == doctest::Approx(16.0 / 3.0).epsilon(1e-4));
  CHECK(smoothness_verdict(QFamily{1.0, 0.6}).slope > 0.0);
  CHECK(smoothness_verdict(QFamily{1.0, 0.7}).slope < 0.0);
  CHECK_THROWS_AS(smoothness_score(QFamily{}, 1), ParameterError);
}

TEST_CASE("smoothness from a tabulated q") {
  std::vector<std::pair<std::size_t, double>> table;
  const QFamily f{1.0, 0.75};
  for (std::size_t n = 1000; n <= 1010; ++n) table.emplace_back(n, f(static_cast<double>(n)));
  const auto scores = smoothness_scores(table);
  REQUIRE(scores.size() == 10);
  for (const auto& [n, r] : scores) CHECK(r == doctest::Approx(smoothness_score(f, n)).epsilon(1e-9));
  table.pop_back();
  table.emplace_back(2000, 0.01);
  CHECK_THROWS_AS(smoothness_scores(table), ParameterError);
}

TEST_CASE("alpha") {
  CHECK(alpha(10'000, 0.1, 1e-3) == 9);
  CHECK(alpha(1'000'000, 0.1, 1e-4) == 300);
  CHECK(alpha(100, 1e-6, 0.01) == 0);
}

TEST_CASE("planting a triangle") {
  RandomSource rng(1, 0);
  for (int k = 0; k < 10; ++k) {
    const auto p = plant_triangle(Graph(3), rng);
    CHECK(p.graph == brute::complete(3));
  }
  const Graph k6 = brute::complete(6);
  const auto same = plant_triangle(k6, rng);
  CHECK(same.graph == k6);
  CHECK(k6.has_edge(same.planted.v[0], same.planted.v[1]));
  CHECK_THROWS_AS(plant_triangle(Graph(2), rng), ParameterError);
}

TEST_CASE("planted density ratio") {
  CHECK(planted_density_ratio(brute::complete(3), 3, 0.4) == doctest::Approx(1.0 / 0.064));
  CHECK(planted_density_ratio(brute::cycle(5), 5, 0.4) == 0.0);
  CHECK_THROWS_AS(planted_density_ratio(brute::complete(3), 3, 0.0), ParameterError);
}

TEST_CASE("reweighting reproduces the planted law exactly on four vertices") {
  // Planted law: G ~ G(4, q) plus a uniform 3-subset. Compare E[f(Q)] with
  // E[f(G) ratio(G)] for f = K3 and f = s by enumerating all 64 graphs.
  const double q = 0.35;
  double planted_k3 = 0, planted_s = 0, weighted_k3 = 0, weighted_s = 0;
  const std::vector<brute::Tri> subsets{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (std::uint32_t mask = 0; mask < 64; ++mask) {
    const Graph g = graph_from_mask(4, mask);
    const double p = std::pow(q, g.edge_count()) * std::pow(1 - q, 6 - g.edge_count());
    for (const auto& t : subsets) {
      std::vector<Edge> e = g.edges();
      e.insert(e.end(), {{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}});
      const Graph planted = Graph::from_edges(4, e);
      planted_k3 += p / 4 * static_cast<double>(brute::triangles(planted).size());
      planted_s += p / 4 * static_cast<double>(brute::max_disjoint_triangles(planted));
    }
    const double r = planted_density_ratio(g, 4, q);
    weighted_k3 += p * r * static_cast<double>(brute::triangles(g).size());
    weighted_s += p * r * static_cast<double>(brute::max_disjoint_triangles(g));
  }
  CHECK(weighted_k3 == doctest::Approx(planted_k3).epsilon(1e-12));
  CHECK(weighted_s == doctest::Approx(planted_s).epsilon(1e-12));
}

TEST_CASE("planted trials keep the +1 gap") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    RandomSource rng(3, i);
    const auto t = planted_trial(30, 0.15, rng);
    CHECK(t.s_large >= t.s_small + 1);
    CHECK(t.sandwich_ok);
  }
  RandomSource rng(3, 0);
  const auto full = planted_trial(9, 1.0, rng);
  CHECK(full.s_large == 4);
  CHECK(full.s_small == 3);
}

TEST_CASE("total variation bound") {
  CHECK(tv_bound_planted(0, 1.0) == doctest::Approx(1.0));
  CHECK(tv_bound_planted(7, std::cbrt(100.0 / 120.0)) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(tv_bound_planted(10, 0.0), ParameterError);
  const double big = tv_bound_planted(50000, 4.5e-4);
  const double expected = 50003.0 * 50002.0 * 50001.0 / 6.0 * std::pow(4.5e-4, 3);
  CHECK(big == doctest::Approx(1.0 / std::sqrt(expected)).epsilon(1e-12));
}

TEST_CASE("sprinkling probability and union law") {
  CHECK(sprinkle_x(0.009, 0.01) == doctest::Approx(0.001 / 0.991).epsilon(1e-12));
  CHECK(sprinkle_x(0.3, 0.3) == 0.0);
  CHECK(sprinkle_x(0.3, 0.2) == 0.0);
  CHECK(sprinkle_x(0.0, 0.2) == 0.2);
  CHECK_THROWS_AS(sprinkle_x(0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(sprinkle_x(-0.1, 0.2), ParameterError);
  CHECK(sprinkle_union_law_exact(0.009, 0.01));
  CHECK(sprinkle_union_law_exact(0.0, 0.0));

  // pair-level check of the union law
  const double lo = 0.3, hi = 0.5, x = sprinkle_x(lo, hi);
  int present = 0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    RandomSource a(11, static_cast<std::uint64_t>(k));
    RandomSource b = a.child(1);
    present += union_graphs(sample_gnq(2, lo, a), sample_gnq(2, x, b)).edge_count();
  }
  const double se = std::sqrt(hi * (1 - hi) / draws);
  CHECK(std::abs(present / static_cast<double>(draws) - hi) <= 4 * se);
}

TEST_CASE("expected new triangles") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph h = brute::random_graph(9, 0.35, seed);
    for (double x : {0.0, 0.1, 0.5, 1.0})
      CHECK(expected_new_triangles(h, x) == doctest::Approx(brute_expected_new(h, x)).epsilon(1e-12));
    CHECK(expected_new_triangles(h, 0.2) <= new_triangle_upper_bound(h, 0.2));
  }
}

TEST_CASE("sprinkling with nothing to add") {
  SprinkleParams p;
  p.n_prime = p.n = 150;
  p.q_n = p.q_nprime = 0.05;
  for (std::uint64_t i = 0; i < 5; ++i) {
    RandomSource rng(8, i);
    const auto t = sprinkle_trial(p, rng);
    CHECK(t.new_triangles == 0);
    CHECK(t.s_large == t.s_small);
    CHECK(t.s_diff_ok);
    CHECK(t.s_close);
    CHECK(t.few_new);
  }
}

TEST_CASE("sprinkle parameters") {
  const QFamily f{1.0, 0.75};
  const auto p = sprinkle_params(20000, f, 0.1);
  CHECK(p.n + alpha(p.n, 0.1, f(static_cast<double>(p.n))) <= 20000);
  CHECK(p.n + 1 + alpha(p.n + 1, 0.1, f(static_cast<double>(p.n + 1))) > 20000);
  CHECK(p.q_n >= p.q_nprime);
  CHECK(p.x() > 0.0);
}

TEST_CASE("chain schedule") {
  const auto chain = chain_schedule(100, [](std::size_t) { return std::size_t{9}; });
  REQUIRE(chain.size() == 12);
  for (std::size_t k = 0; k < chain.size(); ++k) CHECK(chain[k] == 100 + 9 * k);
  CHECK(chain.back() == 199);
  CHECK_THROWS_AS(chain_schedule(100, [](std::size_t) { return std::size_t{0}; }), ParameterError);

  const auto fam = chain_schedule(10000, QFamily{1.0, 0.75}, 0.1);
  for (std::size_t k = 1; k < fam.size(); ++k) CHECK(fam[k] > fam[k - 1]);
  CHECK(fam.back() <= 20000);
}

#include <doctest.h>

#include <cmath>

#include "brute.hpp"
#include "densechi/error.hpp"
#include "densechi/martingale.hpp"

using namespace densechi;

namespace {

// E[s(G) | first i vertices exposed], summing over every completion.
Rational brute_X(const Graph& full, std::size_t i, const Rational& q) {
  const std::size_t n = full.n();
  std::vector<Edge> fixed, open;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      if (v < i) {
        if (full.has_edge(u, v)) fixed.emplace_back(u, v);
      } else {
        open.emplace_back(u, v);
      }
    }
  Rational total = 0;
  for (std::uint32_t mask = 0; mask < (1U << open.size()); ++mask) {
    std::vector<Edge> e = fixed;
    Rational w = 1;
    for (std::size_t k = 0; k < open.size(); ++k) {
      if ((mask >> k) & 1U) {
        e.push_back(open[k]);
        w *= q;
      } else {
        w *= 1 - q;
      }
    }
    total += w * static_cast<int>(brute::max_disjoint_triangles(Graph::from_edges(n, e)));
  }
  return total;
}

Graph graph_from_mask(std::size_t n, std::uint32_t mask) {
  std::vector<Edge> e;
  std::size_t k = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v, ++k)
      if ((mask >> k) & 1U) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

Rational brute_quadratic_variation(std::size_t n, const Rational& q) {
  const std::size_t pairs = n * (n - 1) / 2;
  Rational total = 0;
  for (std::uint32_t mask = 0; mask < (1U << pairs); ++mask) {
    const Graph g = graph_from_mask(n, mask);
    Rational p = 1;
    for (std::size_t k = 0; k < pairs; ++k) p *= ((mask >> k) & 1U) ? q : 1 - q;
    for (std::size_t i = 1; i <= n; ++i) {
      const Rational d = brute_X(g, i, q) - brute_X(g, i - 1, q);
      total += p * d * d;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("exposure classes") {
  const auto single = classify_prefix({1, Graph(1)}, 10, 0.5);
  CHECK(single.in_N);
  CHECK_FALSE(single.in_N_star);

  const auto tri = classify_prefix({3, brute::complete(3)}, 10, 0.1);  // 3qn = 3
  CHECK(tri.in_N);
  CHECK(tri.in_N_star);

  const auto heavy = classify_prefix({2, brute::complete(2)}, 10, 0.01);  // 3qn = 0.3
  CHECK_FALSE(heavy.in_N);
  CHECK_FALSE(heavy.in_N_star);

  CHECK_THROWS_AS(classify_prefix({3, Graph(2)}, 10, 0.1), ParameterError);
}

TEST_CASE("exact conditional expectation examples") {
  const Rational half(1, 2);
  CHECK(exact_X(ExposurePrefix{0, Graph(0)}, 3, half) == Rational(1, 8));
  CHECK(exact_X(ExposurePrefix{2, brute::complete(2)}, 3, half) == Rational(1, 4));
  CHECK(exact_X(ExposurePrefix{3, brute::complete(3)}, 3, half) == 1);
  CHECK(exact_X(ExposurePrefix{0, Graph(0)}, 3, 0.5) == doctest::Approx(0.125));
  CHECK_THROWS_AS(completion_tally({0, Graph(0)}, 9), ParameterError);  // 36 open pairs
}

TEST_CASE("exact conditional expectation against brute force, with telescoping ends") {
  const Rational q(3, 10);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 3 + seed % 3;
    const Graph g = brute::random_graph(n, 0.5, seed);
    CAPTURE(seed);
    for (std::size_t i = 0; i <= n; ++i) CHECK(exact_X(prefix_of(g, i), n, q) == brute_X(g, i, q));
    CHECK(exact_X(prefix_of(g, n), n, q) == static_cast<int>(brute::max_disjoint_triangles(g)));
  }
}

TEST_CASE("single step matches the exhaustive conditional expectation") {
  const Rational q(1, 4);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 4;
    const Graph g = brute::random_graph(n, 0.6, seed);
    CAPTURE(seed);
    const auto step = exact_single_step(g, q);
    CHECK(step.x_prev == brute_X(g, n - 1, q));
    CHECK(step.x_last == static_cast<int>(brute::max_disjoint_triangles(g)));
    CHECK(abs(step.increment()) <= 1);
  }
}

TEST_CASE("bitmask triangle matching agrees with brute force") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Graph g = brute::random_graph(3 + seed % 10, 0.5, seed);
    CHECK(small_triangle_matching_size(SmallGraph::from_graph(g)) ==
          static_cast<int>(brute::max_disjoint_triangles(g)));
    CHECK(SmallGraph::from_graph(g).to_graph() == g);
  }
}

TEST_CASE("Monte Carlo conditional expectation") {
  RandomSource rng(4, 0);
  const Graph g = brute::complete(6);
  const auto full = estimate_X(prefix_of(g, 6), 6, 0.3, 50, rng);
  CHECK(full.value == 2.0);
  CHECK(full.std_error == 0.0);

  const auto none = estimate_X(prefix_of(g, 3), 6, 0.0, 50, rng);
  CHECK(none.value == 1.0);
  CHECK(none.std_error == 0.0);

  const auto est = estimate_X({0, Graph(0)}, 3, 0.5, 100000, rng);
  CHECK(std::abs(est.value - 0.125) <= 3.0 * est.std_error);
  CHECK_THROWS_AS(estimate_X({0, Graph(0)}, 3, 0.5, 0, rng), ParameterError);
}

TEST_CASE("quadratic variation") {
  CHECK(exact_quadratic_variation(5, Rational(0)) == 0);
  CHECK(exact_quadratic_variation(5, Rational(1)) == 0);
  for (std::size_t n : {3u, 4u}) {
    const Rational q(1, 2);
    CHECK(exact_quadratic_variation(n, q) == brute_quadratic_variation(n, q));
  }
  CHECK(exact_quadratic_variation(3, 0.5) == doctest::Approx(7.0 / 64.0));  // Var of Bernoulli(1/8)

  RandomSource rng(5, 0);
  const auto zero = estimate_quadratic_variation(6, 0.0, 10, 20, rng);
  CHECK(zero.value == 0.0);
  const auto est = estimate_quadratic_variation(5, 0.5, 400, 200, rng);
  const double exact = exact_quadratic_variation(5, 0.5);
  CHECK(std::abs(est.value - exact) <= 4.0 * est.std_error);
}

TEST_CASE("Freedman bound") {
  CHECK(freedman_bound(2, 1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(freedman_bound(1e-9, 1, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(freedman_bound(1, 0, 1), ParameterError);
}

TEST_CASE("increment traces and the scale check") {
  RandomSource rng(6, 0);
  const Graph g = brute::random_graph(9, 0.4, 2);
  const auto trace = trace_increments(g, 0.4, 100, rng);
  REQUIRE(trace.size() == 9);
  for (std::size_t k = 0; k < trace.size(); ++k) CHECK(trace[k].i == k + 1);
  CHECK(class_label({true, true}) != class_label({true, false}));

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph h = brute::random_graph(8, 0.3, seed);
    const auto c = check_increment_scale(h, 0.3);
    CHECK(c.bound == doctest::Approx(7.0 * 64.0 * 0.027));
    CHECK(c.applicable == (c.cls.in_N && !c.cls.in_N_star));
    CHECK(std::abs(c.increment) <= 1.0);
  }
}

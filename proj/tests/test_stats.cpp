#include <doctest.h>

#include <cmath>
#include <random>

#include "brute.hpp"
#include "densechi/error.hpp"
#include "densechi/stats.hpp"
#include "densechi/triangles.hpp"

using namespace densechi;

namespace {

bool close(double a, double b, double rel = 1e-10) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

bool same_moments(const SampleStats& a, const SampleStats& b) {
  return a.count() == b.count() && close(a.mean(), b.mean()) && close(a.m2(), b.m2()) && close(a.m3(), b.m3()) &&
         close(a.m4(), b.m4()) && a.min() == b.min() && a.max() == b.max();
}

// Exact mean and variance of the triangle count over all graphs on n vertices.
std::pair<Rational, Rational> brute_triangle_moments(std::size_t n, const Rational& q) {
  const std::size_t pairs = n * (n - 1) / 2;
  Rational m1 = 0, m2 = 0;
  for (std::uint32_t mask = 0; mask < (1U << pairs); ++mask) {
    std::vector<Edge> e;
    std::size_t k = 0;
    Rational p = 1;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v, ++k) {
        if ((mask >> k) & 1U) {
          e.emplace_back(u, v);
          p *= q;
        } else {
          p *= 1 - q;
        }
      }
    const auto x = static_cast<long>(brute::triangles(Graph::from_edges(n, e)).size());
    m1 += p * x;
    m2 += p * x * x;
  }
  return {m1, m2 - m1 * m1};
}

}  // namespace

TEST_CASE("sample stats basics") {
  SampleStats s(true);
  for (double x : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) s.add(x);
  CHECK(s.count() == 8);
  CHECK(s.mean() == doctest::Approx(5.0));
  CHECK(s.variance() == doctest::Approx(32.0 / 7.0));
  CHECK(s.min() == 2.0);
  CHECK(s.max() == 9.0);
  CHECK(s.quantile(0.0) == 2.0);
  CHECK(s.quantile(1.0) == 9.0);
  CHECK(s.quantile(0.5) == doctest::Approx(4.5));
  CHECK_THROWS_AS(s.quantile(1.5), ParameterError);
  CHECK_THROWS_AS(SampleStats().quantile(0.5), ParameterError);
  CHECK(SampleStats().variance() == 0.0);
}

TEST_CASE("sample stats merge is order independent") {
  RandomSource rng(1, 0);
  std::vector<double> data(5000);
  for (auto& x : data) x = std::exp(3.0 * rng.uniform01()) - 4.0;

  SampleStats sequential;
  for (double x : data) sequential.add(x);

  for (int round = 0; round < 20; ++round) {
    std::vector<SampleStats> shards(1 + rng.below(7));
    for (double x : data) shards[rng.below(shards.size())].add(x);
    SampleStats forward, backward;
    for (const auto& sh : shards) forward.merge(sh);
    for (auto it = shards.rbegin(); it != shards.rend(); ++it) backward.merge(*it);
    CHECK(same_moments(forward, sequential));
    CHECK(same_moments(backward, sequential));
    if (shards.size() >= 2) {
      SampleStats ab = shards[0], ba = shards[1];
      ab.merge(shards[1]);
      ba.merge(shards[0]);
      CHECK(same_moments(ab, ba));
    }
  }
}

TEST_CASE("ks distance") {
  const std::vector<double> zero{0.0};
  CHECK(ks_distance(zero) == doctest::Approx(0.5));
  const std::vector<double> far(10, 10.0);
  CHECK(ks_distance(far) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}), ParameterError);

  RandomSource rng(2, 0);
  std::normal_distribution<double> normal;
  std::vector<double> draws(100000);
  for (auto& x : draws) x = normal(rng);
  std::sort(draws.begin(), draws.end());
  CHECK(ks_distance(draws) <= 0.01);
}

TEST_CASE("skewness") {
  CHECK(skewness(std::vector<double>{-1.0, 0.0, 1.0}) == doctest::Approx(0.0));
  CHECK(std::abs(skewness(std::vector<double>{-3.0, -1.0, 0.5, 1.0, 2.5})) > 0.0);
  CHECK(skewness(std::vector<double>{-3.0, -1.5, 0.0, 1.5, 3.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(skewness(std::vector<double>{1.0, 1.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(skewness(std::vector<double>{1.0, 2.0}), ParameterError);

  RandomSource rng(3, 0);
  std::vector<double> expo(100000);
  for (auto& x : expo) x = -std::log(1.0 - rng.uniform01());
  CHECK(std::abs(skewness(expo) - 2.0) <= 0.1);
}

TEST_CASE("standardize") {
  CHECK(standardize(std::vector<double>{0.0, 2.0}, 1.0, 1.0) == std::vector<double>{-1.0, 1.0});
  CHECK(standardize(std::vector<double>{3.5}, 3.5, 2.0) == std::vector<double>{0.0});
  const std::vector<double> z{-0.3, 1.2};
  CHECK(standardize(z, 0.0, 1.0) == z);
  CHECK_THROWS_AS(standardize(z, 0.0, 0.0), ParameterError);
}

TEST_CASE("exact triangle moments") {
  const auto m = exact_triangle_moments(4, 0.5);
  CHECK(m.mean == doctest::Approx(0.5));
  CHECK(m.variance == doctest::Approx(0.625));
  const auto zero = exact_triangle_moments(30, 0.0);
  CHECK(zero.mean == 0.0);
  CHECK(zero.variance == 0.0);
  const auto one = exact_triangle_moments(30, 1.0);
  CHECK(one.mean == 4060.0);
  CHECK(one.variance == 0.0);

  for (std::size_t n = 0; n <= 5; ++n)
    for (const Rational q : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)}) {
      const auto [mean, var] = brute_triangle_moments(n, q);
      const auto exact = exact_triangle_moments_rational(n, q);
      CAPTURE(n);
      CHECK(exact.mean == mean);
      CHECK(exact.variance == var);
    }
}

TEST_CASE("y moment bounds") {
  CHECK(y_moment_bounds(10, 0.1).first == doctest::Approx(0.2));
  CHECK(y_moment_bounds(10, 0.0).first == 0.0);
  CHECK(y_moment_bounds(10, 0.0).second == 0.0);

  SampleStats y;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    RandomSource rng(4, i);
    y.add(static_cast<double>(count_y(sample_gnq(30, 0.08, rng))));
  }
  CHECK(y.mean() <= y_moment_bounds(30, 0.08).first + 3.0 * y.mean_standard_error());
}

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(-8.0) < 1e-14);
}

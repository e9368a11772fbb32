#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace densechi {

using Rational = boost::multiprecision::cpp_rational;

/// Streaming central moments (count, mean, M2, M3, M4) with an associative
/// merge, so shards accumulated on different workers can be combined.
/// Optionally keeps the raw samples for quantiles and the KS statistic.
class SampleStats {
 public:
  explicit SampleStats(bool retain_samples = false) : retain_(retain_samples) {}

  void add(double x);
  void merge(const SampleStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  double m3() const { return m3_; }
  double m4() const { return m4_; }
  double min() const { return min_; }
  double max() const { return max_; }

  /// Unbiased sample variance m2 / (count - 1); 0 for fewer than two samples.
  double variance() const;
  double sd() const;
  double mean_standard_error() const;
  /// Large-sample standard error of the variance, sqrt((mu4 - sigma^4) / N).
  double variance_standard_error() const;
  /// g1 = (M3/N) / (M2/N)^{3/2}. Needs three samples and nonzero spread.
  double skewness() const;

  bool retains_samples() const { return retain_; }
  /// Samples in insertion (then merge) order.
  std::span<const double> samples() const { return samples_; }
  std::vector<double> sorted_samples() const;
  /// Linear-interpolation quantile of the retained samples, p in [0, 1].
  double quantile(double p) const;

 private:
  bool retain_ = false;
  std::size_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
  double min_ = 0.0, max_ = 0.0;
  std::vector<double> samples_;
};

/// Trials above this are summarised without retaining raw samples.
inline constexpr std::size_t kMaxRetainedSamples = 1'000'000;

double normal_cdf(double x);

/// sup |F_n - Phi| over an ascending sample.
double ks_distance(std::span<const double> sorted_samples);

double skewness(std::span<const double> samples);

/// (x - mean) / sd for every sample; sd must be positive.
std::vector<double> standardize(std::span<const double> samples, double mean, double sd);

struct TriangleMoments {
  double mean = 0.0;
  double variance = 0.0;
};

struct ExactTriangleMoments {
  Rational mean;
  Rational variance;
};

/// Exact mean and variance of the triangle count of G(n, q). Two distinct
/// triangles are dependent only when they share an edge; each of the
/// C(n,3) * 3(n-3) ordered such pairs has covariance q^5 - q^6.
ExactTriangleMoments exact_triangle_moments_rational(std::uint64_t n, const Rational& q);
TriangleMoments exact_triangle_moments(std::uint64_t n, double q);

/// (n^5 q^6 + n^4 q^5, n^5q^6 + n^4q^5 + n^6q^8 + n^7q^9 + n^8q^10 + n^9q^11 + n^10q^12):
/// first- and second-moment bounds for y(G).
std::pair<double, double> y_moment_bounds(double n, double q);

}  // namespace densechi

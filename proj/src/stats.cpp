#include "densechi/stats.hpp"

#include <algorithm>
#include <cmath>

#include "densechi/error.hpp"

namespace densechi {

void SampleStats::add(double x) {
  SampleStats one;
  one.n_ = 1;
  one.mean_ = one.min_ = one.max_ = x;
  merge(one);
  if (retain_) samples_.push_back(x);
}

void SampleStats::merge(const SampleStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    const bool keep = retain_;
    *this = other;
    retain_ = keep;
    if (!retain_) samples_.clear();
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double d = other.mean_ - mean_;
  const double d2 = d * d;

  const double m4 = m4_ + other.m4_ + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * other.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * d * (na * other.m3_ - nb * m3_) / n;
  const double m3 = m3_ + other.m3_ + d2 * d * na * nb * (na - nb) / (n * n) +
                    3.0 * d * (na * other.m2_ - nb * m2_) / n;
  const double m2 = m2_ + other.m2_ + d2 * na * nb / n;

  mean_ += d * nb / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += other.n_;
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
  if (retain_) samples_.insert(samples_.end(), other.samples_.begin(), other.samples_.end());
}

double SampleStats::variance() const { return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1); }

double SampleStats::sd() const { return std::sqrt(variance()); }

double SampleStats::mean_standard_error() const {
  return n_ == 0 ? 0.0 : sd() / std::sqrt(static_cast<double>(n_));
}

double SampleStats::variance_standard_error() const {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  const double mu2 = m2_ / n, mu4 = m4_ / n;
  return std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / n);
}

double SampleStats::skewness() const {
  require(n_ >= 3, "skewness: need at least three samples");
  const double n = static_cast<double>(n_);
  require(m2_ > 0.0, "skewness: zero variance");
  return (m3_ / n) / std::pow(m2_ / n, 1.5);
}

std::vector<double> SampleStats::sorted_samples() const {
  std::vector<double> s = samples_;
  std::sort(s.begin(), s.end());
  return s;
}

double SampleStats::quantile(double p) const {
  require(retain_ && !samples_.empty(), "quantile: samples were not retained");
  require(p >= 0.0 && p <= 1.0, "quantile: p outside [0,1]");
  const auto s = sorted_samples();
  const double pos = p * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_distance(std::span<const double> sorted_samples) {
  require(!sorted_samples.empty(), "ks_distance: no samples");
  const double n = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
    const double f = normal_cdf(sorted_samples[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return d;
}

double skewness(std::span<const double> samples) {
  SampleStats s;
  for (double x : samples) s.add(x);
  return s.skewness();
}

std::vector<double> standardize(std::span<const double> samples, double mean, double sd) {
  require(sd > 0.0, "standardize: sd must be positive");
  std::vector<double> out;
  out.reserve(samples.size());
  for (double x : samples) out.push_back((x - mean) / sd);
  return out;
}

ExactTriangleMoments exact_triangle_moments_rational(std::uint64_t n, const Rational& q) {
  require(q >= 0 && q <= 1, "exact_triangle_moments: q outside [0,1]");
  ExactTriangleMoments m;
  if (n < 3) return m;
  const Rational triples = Rational(n) * (n - 1) * (n - 2) / 6;
  const Rational q3 = q * q * q;
  const Rational q5 = q3 * q * q;
  m.mean = triples * q3;
  m.variance = triples * q3 * (1 - q3) + triples * 3 * Rational(n - 3) * (q5 - q5 * q);
  return m;
}

TriangleMoments exact_triangle_moments(std::uint64_t n, double q) {
  const auto m = exact_triangle_moments_rational(n, Rational(q));
  return {m.mean.convert_to<double>(), m.variance.convert_to<double>()};
}

std::pair<double, double> y_moment_bounds(double n, double q) {
  const double b1 = std::pow(n, 5) * std::pow(q, 6) + std::pow(n, 4) * std::pow(q, 5);
  const double b2 = b1 + std::pow(n, 6) * std::pow(q, 8) + std::pow(n, 7) * std::pow(q, 9) +
                    std::pow(n, 8) * std::pow(q, 10) + std::pow(n, 9) * std::pow(q, 11) +
                    std::pow(n, 10) * std::pow(q, 12);
  return {b1, b2};
}

}  // namespace densechi

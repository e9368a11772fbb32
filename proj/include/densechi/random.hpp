#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace densechi {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Reproducible random stream keyed by (master_seed, stream_id).
///
/// Streams are split by hashing the key, so stream k never shares a sequence
/// with stream k' and trial results do not depend on which worker thread
/// ran them. A RandomSource must be owned by one worker at a time.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  RandomSource(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_seed_(master_seed),
        stream_id_(stream_id),
        engine_(splitmix64(master_seed ^ splitmix64(stream_id + 0x5851f42d4c957f2dULL))) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Independent sub-stream, e.g. one per inner Monte Carlo estimate.
  RandomSource child(std::uint64_t sub_id) const {
    return RandomSource(splitmix64(master_seed_ ^ 0xa0761d6478bd642fULL) ^ stream_id_,
                        splitmix64(sub_id) ^ (stream_id_ << 1));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = max() - (max() % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Number of failures before the first success of Bernoulli(p) trials.
  /// Requires 0 < p < 1.
  std::uint64_t geometric_skip(double log1m_p) {
    const double u = 1.0 - uniform01();  // (0, 1]
    const double k = std::floor(std::log(u) / log1m_p);
    if (!(k < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(k);
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace densechi

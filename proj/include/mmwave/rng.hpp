#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

// Counter-based random streams. Every consumer derives its own substream from
// (root seed, role tag, indices), so realizations are reproducible bit for bit
// no matter how work is split across threads, and resampling one street or BS
// never perturbs another.

namespace mmwave {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(root ^ 0xA0761D6478BD642Full);
  for (std::uint64_t v : path) s = mix64(s ^ mix64(v));
  return s;
}

// Role tags for substream derivation.
enum StreamTag : std::uint64_t {
  kTagStreets = 1,
  kTagPlacement = 2,
  kTagFading = 3,
  kTagLayout = 4,
};

class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }
  result_type operator()() {
    state_ += kGolden;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

inline double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double uniform01(SplitMix64& rng) { return to_unit_interval(rng()); }

inline double uniform(SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline bool bernoulli(SplitMix64& rng, double p) { return uniform01(rng) < p; }

inline double exponential1(SplitMix64& rng) {
  return -std::log1p(-uniform01(rng));
}

// Unit-mean exponential draw keyed by a counter; used for fading so that the
// same (seed, id, round) always yields the same value.
inline double exponential_from_key(std::uint64_t key) {
  return -std::log1p(-to_unit_interval(mix64(key)));
}

// Poisson sampling via products of uniforms. Means above the chunk size are
// split using Poisson additivity, keeping the per-chunk product away from
// the underflow range.
inline long poisson(SplitMix64& rng, double mean) {
  if (mean <= 0.0) return 0;
  long total = 0;
  while (mean > 16.0) {
    double chunk = std::min(mean, 16.0);
    // fall through to product method for this chunk
    const double limit = std::exp(-chunk);
    long k = 0;
    double prod = 1.0;
    do {
      ++k;
      prod *= uniform01(rng);
    } while (prod > limit);
    total += k - 1;
    mean -= chunk;
  }
  const double limit = std::exp(-mean);
  long k = 0;
  double prod = 1.0;
  do {
    ++k;
    prod *= uniform01(rng);
  } while (prod > limit);
  return total + k - 1;
}

}  // namespace mmwave

#pragma once

#include <cmath>
#include <cstdint>

namespace meanfield::rng {

namespace detail {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Mixes a base seed with an index into an unrelated derived seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return detail::mix64(detail::mix64(seed + detail::kGamma) ^
                       (index + detail::kGamma) * 0xda942042e4dd58b5ull);
}

/// Counter-based random stream, a pure function of its key.  Every
/// (seed, stream, index, salt) tuple yields an independent sequence, so
/// parallel sample generation reproduces exactly regardless of scheduling.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
               std::uint64_t salt = 0) {
    std::uint64_t k = detail::mix64(seed + detail::kGamma);
    k = detail::mix64(k ^ (stream * 0xbf58476d1ce4e5b9ull + detail::kGamma));
    k = detail::mix64(k ^ (index * 0x94d049bb133111ebull + detail::kGamma));
    state_ = detail::mix64(k ^ (salt + detail::kGamma));
  }

  std::uint64_t next_u64() {
    state_ += detail::kGamma;
    return detail::mix64(state_);
  }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double hi) { return hi * next_unit(); }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Poisson draw by the product method; large means split exactly in two.
  int next_poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 30.0) return next_poisson(0.5 * mean) + next_poisson(0.5 * mean);
    const double floor = std::exp(-mean);
    int k = 0;
    double p = next_unit();
    while (p > floor) {
      p *= next_unit();
      ++k;
    }
    return k;
  }

 private:
  std::uint64_t state_;
};

}  // namespace meanfield::rng

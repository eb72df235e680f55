#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace dnaevo {

/// Seedable generator with platform-independent draw semantics.
///
/// Standard distributions are implementation-defined, so uniform reals and
/// bounded integers are derived here directly from the 64-bit engine output.
/// Every draw consumes exactly one engine output (bounded integers use
/// rejection sampling, which may consume more on rare occasions).
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform real in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], inclusive on both ends.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == UINT64_MAX) return engine_();
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % range;
  }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform_int(0, n - 1)); }

  /// Fisher-Yates shuffle driven by index().
  template <class RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = index(i);
      std::swap(first[i - 1], first[j]);
    }
  }

  /// Independent child stream derived from the construction seed and `stream`.
  /// Does not advance this generator.
  Rng fork(std::uint64_t stream) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_ >> 32), static_cast<std::uint32_t>(seed_),
                      static_cast<std::uint32_t>(stream >> 32), static_cast<std::uint32_t>(stream)};
    Rng child(0);
    child.engine_.seed(seq);
    child.seed_ = seed_ ^ (stream * 0x9E3779B97F4A7C15ULL + 1);
    return child;
  }

 private:
  engine_type engine_;
  std::uint64_t seed_;
};

}  // namespace dnaevo

#pragma once

#include <cstdint>
#include <limits>

namespace rsd {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Hash a seed together with a tuple of counters into a new 64-bit key.
/// Distinct tuples give statistically independent keys.
template <typename... Counters>
constexpr std::uint64_t derive_key(std::uint64_t seed, Counters... counters) noexcept {
  std::uint64_t key = mix64(seed + 0x9e3779b97f4a7c15ULL);
  ((key = mix64(key ^ (static_cast<std::uint64_t>(counters) + 0x632be59bd9b4e019ULL))), ...);
  return key;
}

/// Small counter-seeded generator (SplitMix64 sequence). Satisfies
/// UniformRandomBitGenerator so it can drive <random> distributions.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr RandomStream(std::uint64_t key) noexcept : state_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t state_;
};

enum class StreamRole : std::uint64_t { design = 1, oracle = 2 };

/// The per-sample random streams of one RSD iteration. Sample i of role r at
/// iteration k always sees the same stream, independent of evaluation order
/// or thread count.
struct StreamFamily {
  std::uint64_t seed = 0;
  std::int64_t iteration = 1;
  StreamRole role = StreamRole::design;

  [[nodiscard]] RandomStream stream(std::int64_t index) const noexcept {
    return RandomStream{derive_key(seed, iteration, static_cast<std::uint64_t>(role), index)};
  }
};

}  // namespace rsd

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace evonav {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix_bits(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Order-sensitive fold of identifying words into a stream key.
template <typename... Words>
[[nodiscard]] constexpr std::uint64_t derive_key(std::uint64_t first, Words... rest) noexcept {
  std::uint64_t key = mix_bits(first + kGoldenGamma);
  ((key = mix_bits(key ^ (static_cast<std::uint64_t>(rest) + kGoldenGamma))), ...);
  return key;
}

// Counter-based stream: the key names the stream, the counter walks it.
// split() derives child streams from the key alone, so the set of children
// does not depend on how many values were already drawn from the parent.
// This is what makes parallel evaluation order-independent.
class RngStream {
 public:
  explicit constexpr RngStream(std::uint64_t key) noexcept : key_(key), counter_(key) {}

  template <typename... Words>
  [[nodiscard]] constexpr RngStream split(Words... words) const noexcept {
    return RngStream(derive_key(key_, static_cast<std::uint64_t>(words)...));
  }

  [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }

  std::uint64_t next_u64() noexcept {
    counter_ += kGoldenGamma;
    return mix_bits(counter_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + uniform01() * (hi - lo); }

  // Uniform integer in [0, n). Caller guarantees n >= 1.
  int uniform_int(int n) noexcept {
    const int draw = static_cast<int>(uniform01() * static_cast<double>(n));
    return draw < n ? draw : n - 1;  // guard the fp edge at exactly n
  }

  // Box-Muller transform; consumes exactly two raw draws per call.
  double gaussian(double mean, double stddev) noexcept {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // in (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace evonav

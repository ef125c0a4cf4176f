#pragma once

#include <cstdint>
#include <limits>

namespace tcboost {

// Counter-based randomness. Every random quantity in a diffusion run is a
// pure function of (run key, counter), so results never depend on the order
// in which edges are explored or on how runs are split across workers.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

// Key of run `index` under master seed `seed`: hash of (seed, index).
inline constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) noexcept {
  return hash_combine(splitmix64(seed), index);
}

// Uniform double in [0, 1) with 53 random bits.
inline constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline constexpr double counter_uniform(std::uint64_t key, std::uint64_t counter) noexcept {
  return to_unit(hash_combine(key, counter));
}

// Small sequential generator for harness-level sampling (seed draws,
// probability assignment). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr double uniform() noexcept { return to_unit((*this)()); }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x = (*this)();
    while (x >= limit) x = (*this)();
    return x % bound;
  }

 private:
  std::uint64_t state_;
};

}  // namespace tcboost

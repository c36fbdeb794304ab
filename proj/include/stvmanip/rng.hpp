#pragma once

// Platform-stable randomness. std::mt19937_64 is fully specified by the
// standard; the std distributions are not, so bounded integers, unit reals and
// shuffles are drawn here by hand.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace stvm {

struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for child stream `index` of `parent`.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return mix64(mix64(parent) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}
  explicit Rng(RngSeed seed) : Rng(derive_seed(seed.master_seed, seed.stream_id)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % bound;
    }
  }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool coin() { return (engine_() >> 63) != 0; }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stvm

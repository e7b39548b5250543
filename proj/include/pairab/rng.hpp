#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace pairab::rng {

// splitmix64 step; used only to spread seed entropy.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic key derivation: (base_seed, replicate, purpose) -> engine seed.
// Replicate streams are schedule independent, so a run is reproducible no
// matter how replicates are distributed over threads.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replicate,
                                    std::uint64_t purpose) {
  std::uint64_t s = base;
  std::uint64_t h = splitmix64(s);
  s ^= replicate * 0xD1342543DE82EF95ULL;
  h ^= splitmix64(s);
  s ^= purpose * 0xAF251AF3B0F025B5ULL;
  h ^= splitmix64(s);
  return h;
}

// Stream purposes within one simulation replicate.
enum class Purpose : std::uint64_t {
  designs = 1,
  effects = 2,
  noise = 3,
  missingness = 4,
};

// mt19937_64 with explicit, standard-defined draw paths. std::*_distribution
// is implementation defined, so uniforms, bounded integers, normals and
// shuffles are spelled out here; output is identical for a fixed seed on any
// conforming platform.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  // Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  // Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // Deterministic sample of k distinct indices from [0, n): the first k
  // entries of a partial Fisher-Yates pass.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(below(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

inline Stream substream(std::uint64_t base, std::uint64_t replicate, Purpose purpose) {
  return Stream(derive_seed(base, replicate, static_cast<std::uint64_t>(purpose)));
}

}  // namespace pairab::rng

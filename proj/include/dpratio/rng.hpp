#pragma once

#include <cstdint>
#include <random>

namespace dpratio {

struct Seed {
  std::uint64_t value = 0;
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-mode derivation of the seed for stream `index` under `master`.
/// Pure function, so any parallel schedule sees the same per-trial seeds.
inline constexpr Seed split(Seed master, std::uint64_t index) {
  return Seed{splitmix64(splitmix64(master.value) ^ splitmix64(~index))};
}

/// mt19937_64 is bit-specified by the standard; std::uniform_int_distribution
/// is not, so bounded draws go through `uniform_below` instead.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(splitmix64(seed.value)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), bound > 0, by rejection (no modulo bias).
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dpratio

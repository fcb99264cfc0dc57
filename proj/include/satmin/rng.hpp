#pragma once

#include <cstdint>

namespace satmin {

// SplitMix64 (Steele/Lea/Vigna). Every randomized component of this project
// draws from it, so any run reproduces exactly from its seed. next_double()
// uses the top 53 bits; next_below() reduces by modulo (bias is irrelevant at
// the range sizes used here and keeps the algorithm one line).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., n-1}; n must be positive.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  bool next_bool() { return (next() >> 63) != 0; }

private:
  std::uint64_t state_;
};

// Stable derivation of per-task seeds (instance k of a campaign, part 1 vs
// part 2 of a split solve, restart r of a voting run) from one base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  return g.next();
}

}  // namespace satmin

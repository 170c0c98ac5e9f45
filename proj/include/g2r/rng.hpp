#pragma once

#include <cmath>
#include <cstdint>

namespace g2r {

using Seed = std::uint64_t;

// Counter-based generator (splitmix64 finalizer over key + counter).
// Identical (seed, stream) -> identical sequence on every platform, which is
// why we do not use <random> engines or distributions here: their outputs are
// implementation-defined and would break bit-reproducibility of experiments.
class Rng {
 public:
  explicit Rng(Seed seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream))) {}

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ull;
    return mix(key_ ^ counter_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); bound must be > 0. Unbiased (rejection).
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller; pairs are cached, order is deterministic.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925287 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Independent child stream; the parent is left untouched.
  Rng split(std::uint64_t tag) const {
    Rng child(0);
    child.key_ = mix(key_ ^ mix(tag ^ 0xd1b54a32d192ed03ull));
    return child;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Deterministic child seed for handing to an operation that takes a Seed.
inline Seed derive_seed(Seed seed, std::uint64_t tag) {
  Rng r = Rng(seed).split(tag);
  return r.next_u64();
}

}  // namespace g2r

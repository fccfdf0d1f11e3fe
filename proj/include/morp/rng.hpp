#pragma once

#include <cstdint>

namespace morp {

// Deterministic splitmix64 stream. Used everywhere instead of std::
// distributions so that results are bit-stable across platforms and
// independent of execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0,1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // [0,n), n > 0
  std::uint64_t uniform_int(std::uint64_t n) {
    // multiply-shift; bias is negligible for the ranges used here
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // the xi ~ U{0,1} draw of the target-length formula
  int coin() { return static_cast<int>(next_u64() & 1u); }

 private:
  std::uint64_t state_;
};

// Seed derivation for per-mask / per-region substreams. Mixing is the
// splitmix64 finalizer over a combination of the inputs, so substreams are
// independent of iteration or thread order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (a + 1) +
                    0xc2b2ae3d27d4eb4fULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace morp

#pragma once

#include <cstdint>

namespace twsent {

// SplitMix64. Small, fast and identical on every platform, which is what
// the seeded-reproducibility contracts need; std distributions are not
// portable across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). n must be > 0.
  std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  float next_float() {
    return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f;
  }

  // Uniform in [lo, hi].
  int next_int(int lo, int hi) {
    return lo + static_cast<int>(next_index(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool next_bool(double p) { return next_double() < p; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream from a base seed and a purpose tag, so the
// sampler, the shuffler and the initializer never share a sequence.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  Rng r(base ^ (0x632be59bd9b4e019ULL * (stream + 1)));
  return r.next_u64();
}

}  // namespace twsent

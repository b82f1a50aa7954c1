#pragma once

#include <cstdint>
#include <random>

namespace graphrho {

// Thin wrapper around mt19937_64 with hand-rolled bounded draws. The
// std::uniform_*_distribution algorithms are implementation-defined, which
// would break the bitwise-reproducibility contract across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi], inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(engine_() % span);
  }

  // Uniform double in [0, 1) with 53 bits of randomness.
  double uniform_real() { return (engine_() >> 11) * 0x1.0p-53; }

  // Uniform double in [-a, a].
  double uniform_sym(double a) { return (2.0 * uniform_real() - 1.0) * a; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Stateless mixer for deriving independent stream seeds (splitmix64 step).
inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace graphrho

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace paramine {

// Deterministic RNG. std::mt19937_64 is fully specified by the standard, but
// the standard distributions are not, so all mappings from raw 64-bit draws
// to values are implemented here. Identical seeds give identical streams on
// every platform and compiler.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  uint64_t uniform_int(uint64_t lo, uint64_t hi) {
    uint64_t range = hi - lo + 1;
    if (range == 0) return engine_();  // full 64-bit range
    uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % range;
  }

  size_t index(size_t n) { return static_cast<size_t>(uniform_int(0, n - 1)); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent child stream; used to isolate parallel work items.
  Rng fork(uint64_t stream_id) {
    return Rng(mix(engine_() ^ mix(stream_id)));
  }

 private:
  // splitmix64 finalizer
  static uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace paramine

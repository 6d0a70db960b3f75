#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace essc {

// splitmix64; used both as a mixer for seed derivation and to whiten
// user-provided seeds before feeding the mt19937_64 engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic child-seed derivation: child = mix(mix(master) ^ a) ^ b
// folded once more so that (a, b) order matters.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (a + 0x9e3779b97f4a7c15ULL));
  s = splitmix64(s ^ (b + 0x517cc1b727220a95ULL));
  return s;
}

// Seeded generator with portable uniform/normal draws. std::normal_distribution
// is implementation-defined, so the normal variates are produced by the polar
// method on top of raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // [0, bound)
  std::uint64_t uniform_int(std::uint64_t bound) {
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % bound;
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * m;
    has_cached_ = true;
    return u * m;
  }

 private:
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace essc

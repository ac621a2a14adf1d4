#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "semnav/core/geometry.hpp"

namespace semnav {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * xoshiro256++ generator. Hand-rolled so that every sampled value is
 * bit-identical across platforms and standard-library versions (std::
 * distributions make no such guarantee).
 */
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  /** Derive an independent stream from this seed and a tag path. */
  static Rng derive(uint64_t seed, std::initializer_list<uint64_t> tags) {
    uint64_t sm = seed;
    uint64_t h = splitmix64(sm);
    for (uint64_t t : tags) {
      sm = h ^ (t + 0x9e3779b97f4a7c15ULL);
      h = splitmix64(sm);
    }
    return Rng(h);
  }

  uint64_t next_u64() {
    auto rotl = [](uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /** Uniform in [0, 1) with 53 random bits. */
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /** Uniform in [lo, hi). */
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /** Uniform integer in [0, bound). Lemire's debiased multiply-shift. */
  uint64_t uniform_int(uint64_t bound) {
    if (bound == 0) return 0;
    while (true) {
      uint64_t x = next_u64();
      __uint128_t m = __uint128_t(x) * __uint128_t(bound);
      uint64_t lo = uint64_t(m);
      if (lo < bound) {
        uint64_t threshold = (0ULL - bound) % bound;
        if (lo < threshold) continue;
      }
      return uint64_t(m >> 64);
    }
  }

  /** Uniform integer in [lo, hi] inclusive. */
  int uniform_int(int lo, int hi) {
    return lo + int(uniform_int(uint64_t(hi - lo + 1)));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /** Zero-mean Gaussian via Box-Muller (no spare caching, fixed draw order). */
  double gaussian(double sigma) {
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = size_t(uniform_int(uint64_t(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t s_[4] = {};
};

}  // namespace semnav

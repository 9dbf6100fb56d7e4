// Deterministic seeded randomness. Every consumer derives a substream by
// hashing the operation name and its parameters against the global seed, so
// reruns with the same config are bit-identical across platforms (no
// std::uniform_real_distribution, whose output is implementation-defined).
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "lcft/complex2.hpp"

namespace lcft {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {
    // decorrelate trivially related seeds
    splitmix64(state_);
  }

  // substream: hash of global seed + operation tag + integer salt
  static Rng substream(uint64_t global_seed, std::string_view op, uint64_t salt = 0) {
    uint64_t h = fnv1a(op);
    h ^= global_seed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= salt * 0xd1342543de82ef95ULL;
    return Rng(h);
  }

  uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // log-uniform on [lo,hi], lo>0
  double log_uniform(double lo, double hi) {
    return lo * std::exp(uniform() * std::log(hi / lo));
  }

  double gaussian() {
    // Box-Muller; one value per call keeps the stream layout simple
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  cplx gaussian_cplx() {
    double a = gaussian();
    double b = gaussian();
    return {a, b};
  }

  // uniform on the unit sphere of C^2
  C2 unit_c2() {
    C2 v;
    do {
      v = {gaussian_cplx(), gaussian_cplx()};
    } while (norm2(v) < 1e-12);
    return normalized(v);
  }

 private:
  uint64_t state_;
};

}  // namespace lcft

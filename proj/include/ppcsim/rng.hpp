#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include "ppcsim/errors.hpp"

namespace ppcsim {

// SplitMix64 finalizer; used to derive independent seeds.
constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr uint64_t mix_seed(uint64_t a, uint64_t b) {
  return splitmix64(splitmix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

constexpr uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

constexpr uint64_t hash_label(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

// One reproducible stream per stochastic quantity. Streams derived from the
// same run seed but different labels own separate engines, so the draw order
// of one never disturbs another.
class RngStream {
 public:
  RngStream(uint64_t run_seed, std::string_view label)
      : engine_(mix_seed(run_seed, hash_label(label))) {}

  uint64_t raw() { return engine_(); }

  // Uniform on (0, 1].
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Box-Muller transform; consumes exactly two engine draws per call.
  double standard_normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Lognormal variate with E[X] = mean and CV[X] = cv. cv = 0 degenerates to
  // the mean exactly.
  double lognormal(double mean, double cv) {
    if (!(mean > 0.0)) throw BadMomentError("lognormal: mean must be > 0");
    if (cv < 0.0) throw BadMomentError("lognormal: cv must be >= 0");
    if (cv == 0.0) return mean;
    double sigma2 = std::log1p(cv * cv);
    double mu = std::log(mean) - 0.5 * sigma2;
    return std::exp(mu + std::sqrt(sigma2) * standard_normal());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ppcsim

#pragma once

#include <cstdint>
#include <random>

#include "qxform/algebra.hpp"

namespace testutil {

/// Deterministic RNG with a portable uniform-double mapping (the distribution
/// classes in <random> are not bit-stable across standard libraries).
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  double unit() { return double(eng() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

inline qxform::AlgebraElement random_element(Rng& rng, double scale = 1.0) {
  qxform::AlgebraElement e;
  for (auto& c : e.coeffs)
    c = qxform::Complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
  return e;
}

inline qxform::GaugeParams random_gauge(Rng& rng, double mu_max, double nu_max,
                                        double kappa_max) {
  return qxform::GaugeParams{rng.uniform(-mu_max, mu_max), rng.uniform(-nu_max, nu_max),
                             rng.uniform(-kappa_max, kappa_max)};
}

}  // namespace testutil

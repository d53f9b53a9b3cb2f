#pragma once

// Radix-2 complex FFT. Grid sizes in this library are powers of two by
// invariant, so nothing more general is needed.

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "qxform/errors.hpp"

namespace qxform::detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative Cooley-Tukey; inverse=true applies 1/n scaling.
inline void fft(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw ArgumentError("fft: size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / double(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= double(n);
}

/// FFT-ordered momentum for bin k on an n-point grid with spacing dx.
inline double fft_momentum(std::size_t k, std::size_t n, double dx) {
  const long kk = (k < n / 2) ? long(k) : long(k) - long(n);
  return 2.0 * std::numbers::pi * double(kk) / (double(n) * dx);
}

}  // namespace qxform::detail

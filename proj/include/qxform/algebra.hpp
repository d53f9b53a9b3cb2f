#pragma once

// Finite-dimensional model of the Schrodinger algebra sl(2,R) (+) w1 spanned by
// {I, X, P, X^2, P^2, D}: structure constants, commutators, and conjugation by
// the three-factor unitary map R(mu,nu,kappa) = exp{i mu P} exp{i nu D} exp{i kappa P^2}.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "qxform/errors.hpp"

namespace qxform {

using Complex = std::complex<double>;

/// Basis labels; the enumerator order fixes the coefficient-vector index.
enum class BasisOp : int { I = 0, X = 1, P = 2, X2 = 3, P2 = 4, D = 5 };

inline constexpr int kAlgebraDim = 6;

/// Element of the algebra: complex coefficients over {I, X, P, X2, P2, D}.
struct AlgebraElement {
  std::array<Complex, kAlgebraDim> coeffs{};

  static AlgebraElement zero() { return AlgebraElement{}; }

  static AlgebraElement basis(BasisOp op) {
    AlgebraElement e;
    e.coeffs[static_cast<int>(op)] = Complex(1.0, 0.0);
    return e;
  }

  Complex& operator[](BasisOp op) { return coeffs[static_cast<int>(op)]; }
  const Complex& operator[](BasisOp op) const { return coeffs[static_cast<int>(op)]; }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    for (int i = 0; i < kAlgebraDim; ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
    for (int i = 0; i < kAlgebraDim; ++i) a.coeffs[i] -= b.coeffs[i];
    return a;
  }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) {
    for (auto& c : a.coeffs) c *= s;
    return a;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }
  friend double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b) {
    return (a - b).max_abs();
  }
};

/// Parameters of R(mu,nu,kappa); unitary for all finite values.
struct GaugeParams {
  double mu = 0.0;
  double nu = 0.0;
  double kappa = 0.0;
};

namespace detail {

// Structure constants: bracket_table[a][b] is [e_a, e_b] expanded over the basis.
// All nonzero brackets, from [X,P]=iI, [X2,P2]=4iD, [D,X2]=-2iX2, [D,P2]=2iP2,
// [P2,X]=-2iP, [X2,P]=2iX, [D,X]=-iX, [D,P]=iP; I central.
inline const std::array<std::array<AlgebraElement, kAlgebraDim>, kAlgebraDim>&
bracket_table() {
  static const auto table = [] {
    std::array<std::array<AlgebraElement, kAlgebraDim>, kAlgebraDim> t{};
    const Complex i(0.0, 1.0);
    auto set = [&](BasisOp a, BasisOp b, BasisOp out, Complex c) {
      t[static_cast<int>(a)][static_cast<int>(b)][out] = c;
      t[static_cast<int>(b)][static_cast<int>(a)][out] = -c;
    };
    set(BasisOp::X, BasisOp::P, BasisOp::I, i);
    set(BasisOp::X2, BasisOp::P2, BasisOp::D, 4.0 * i);
    set(BasisOp::D, BasisOp::X2, BasisOp::X2, -2.0 * i);
    set(BasisOp::D, BasisOp::P2, BasisOp::P2, 2.0 * i);
    set(BasisOp::P2, BasisOp::X, BasisOp::P, -2.0 * i);
    set(BasisOp::X2, BasisOp::P, BasisOp::X, 2.0 * i);
    set(BasisOp::D, BasisOp::X, BasisOp::X, -i);
    set(BasisOp::D, BasisOp::P, BasisOp::P, i);
    return t;
  }();
  return table;
}

}  // namespace detail

/// Lie bracket [a, b], bilinear extension of the structure-constant table.
inline AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b) {
  const auto& table = detail::bracket_table();
  AlgebraElement out;
  for (int i = 0; i < kAlgebraDim; ++i) {
    if (a.coeffs[i] == Complex(0.0)) continue;
    for (int j = 0; j < kAlgebraDim; ++j) {
      if (b.coeffs[j] == Complex(0.0)) continue;
      const Complex s = a.coeffs[i] * b.coeffs[j];
      const AlgebraElement& br = table[i][j];
      for (int k = 0; k < kAlgebraDim; ++k) out.coeffs[k] += s * br.coeffs[k];
    }
  }
  return out;
}

/// Complex 6x6 matrix, row-major; just enough linear algebra for ad-matrices.
struct AdjointMatrix {
  std::array<Complex, kAlgebraDim * kAlgebraDim> m{};

  Complex& at(int r, int c) { return m[r * kAlgebraDim + c]; }
  const Complex& at(int r, int c) const { return m[r * kAlgebraDim + c]; }

  AlgebraElement apply(const AlgebraElement& v) const {
    AlgebraElement out;
    for (int r = 0; r < kAlgebraDim; ++r) {
      Complex acc(0.0);
      for (int c = 0; c < kAlgebraDim; ++c) acc += at(r, c) * v.coeffs[c];
      out.coeffs[r] = acc;
    }
    return out;
  }
};

/// Matrix of ad_a = [a, .] in the fixed basis: column j is [a, e_j].
inline AdjointMatrix adjoint_matrix(const AlgebraElement& a) {
  AdjointMatrix out;
  for (int j = 0; j < kAlgebraDim; ++j) {
    AlgebraElement col = commutator(a, AlgebraElement::basis(static_cast<BasisOp>(j)));
    for (int r = 0; r < kAlgebraDim; ++r) out.at(r, j) = col.coeffs[r];
  }
  return out;
}

/// R a R^{-1} by linear extension of the closed-form conjugation identities:
///   R X R^-1   = e^nu X + 2 kappa e^-nu P + e^nu mu I
///   R X^2 R^-1 = e^2nu X^2 + 4 kappa D + 4 kappa^2 e^-2nu P^2
///                + 2 e^2nu mu X + 4 kappa mu P + e^2nu mu^2 I
///   R P R^-1   = e^-nu P
///   R P^2 R^-1 = e^-2nu P^2
///   R D R^-1   = D + mu P + 2 kappa e^-2nu P^2
inline AlgebraElement conjugate_element(const AlgebraElement& a, const GaugeParams& g) {
  const double en = std::exp(g.nu);
  const double emn = 1.0 / en;
  const double e2n = en * en;
  const double em2n = emn * emn;
  const double mu = g.mu, kap = g.kappa;

  AlgebraElement out;
  auto add = [&](BasisOp op, Complex c) { out[op] += c; };

  add(BasisOp::I, a[BasisOp::I]);

  const Complex cx = a[BasisOp::X];
  add(BasisOp::X, cx * en);
  add(BasisOp::P, cx * (2.0 * kap * emn));
  add(BasisOp::I, cx * (en * mu));

  const Complex cx2 = a[BasisOp::X2];
  add(BasisOp::X2, cx2 * e2n);
  add(BasisOp::D, cx2 * (4.0 * kap));
  add(BasisOp::P2, cx2 * (4.0 * kap * kap * em2n));
  add(BasisOp::X, cx2 * (2.0 * e2n * mu));
  add(BasisOp::P, cx2 * (4.0 * kap * mu));
  add(BasisOp::I, cx2 * (e2n * mu * mu));

  add(BasisOp::P, a[BasisOp::P] * emn);
  add(BasisOp::P2, a[BasisOp::P2] * em2n);

  const Complex cd = a[BasisOp::D];
  add(BasisOp::D, cd);
  add(BasisOp::P, cd * mu);
  add(BasisOp::P2, cd * (2.0 * kap * em2n));

  return out;
}

/// Group composition: R(result) = R(outer) * R(inner).
/// Closed under {P, D, P^2} exponentials since they span a solvable subalgebra.
inline GaugeParams compose(const GaugeParams& outer, const GaugeParams& inner) {
  GaugeParams out;
  out.mu = outer.mu + inner.mu * std::exp(-outer.nu);
  out.nu = outer.nu + inner.nu;
  out.kappa = inner.kappa + outer.kappa * std::exp(2.0 * inner.nu);
  return out;
}

namespace detail {

/// exp(ad_{i theta G}) applied to v via the truncated series; stops when a
/// term's max-norm drops below 1e-18 or after 60 terms.
inline AlgebraElement exp_ad_apply(const AlgebraElement& generator, double theta,
                                   const AlgebraElement& v) {
  const AdjointMatrix ad = adjoint_matrix(Complex(0.0, theta) * generator);
  AlgebraElement sum = v;
  AlgebraElement term = v;
  for (int n = 1; n <= 60; ++n) {
    term = (Complex(1.0 / n)) * ad.apply(term);
    sum += term;
    if (term.max_abs() < 1e-18) break;
  }
  return sum;
}

}  // namespace detail

/// Series evaluation of the full conjugation, innermost factor first
/// (kappa P^2, then nu D, then mu P). Cross-check for conjugate_element.
inline AlgebraElement conjugate_element_series(const AlgebraElement& a, const GaugeParams& g) {
  AlgebraElement out = detail::exp_ad_apply(AlgebraElement::basis(BasisOp::P2), g.kappa, a);
  out = detail::exp_ad_apply(AlgebraElement::basis(BasisOp::D), g.nu, out);
  out = detail::exp_ad_apply(AlgebraElement::basis(BasisOp::P), g.mu, out);
  return out;
}

}  // namespace qxform

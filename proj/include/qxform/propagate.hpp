#pragma once

// Grid-level numerical evidence: Crank-Nicolson propagation under any of the
// three system classes, application of the unitary map R(mu,nu,kappa) to grid
// states, time relabeling of trajectories, and Schrodinger-equation residuals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "qxform/algebra.hpp"
#include "qxform/detail/fft.hpp"
#include "qxform/systems.hpp"
#include "qxform/timefn.hpp"

namespace qxform {

struct SpatialGrid {
  double x_min = 0.0;
  double dx = 0.0;
  std::size_t n = 0;

  void validate() const {
    if (!(dx > 0.0)) throw ArgumentError("grid: dx must be positive");
    if (n < 64 || !detail::is_pow2(n))
      throw ArgumentError("grid: n must be a power of two >= 64");
  }
  double x(std::size_t j) const { return x_min + dx * double(j); }
  double x_last() const { return x(n - 1); }
  double length() const { return dx * double(n); }

  friend bool operator==(const SpatialGrid& a, const SpatialGrid& b) {
    return a.x_min == b.x_min && a.dx == b.dx && a.n == b.n;
  }
};

/// Complex amplitudes on a uniform grid with an attached time stamp.
struct WaveState {
  SpatialGrid grid;
  std::vector<Complex> amps;
  double t = 0.0;

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return std::sqrt(s * grid.dx);
  }
  double max_amp() const {
    double m = 0.0;
    for (const auto& a : amps) m = std::max(m, std::abs(a));
    return m;
  }
  double boundary_ratio() const {
    const double m = max_amp();
    if (m == 0.0) return 0.0;
    return std::max(std::abs(amps.front()), std::abs(amps.back())) / m;
  }
};

struct Observables {
  double norm = 0.0, mean_x = 0.0, mean_p = 0.0, dx = 0.0, dp = 0.0;
};

struct Trajectory {
  std::vector<WaveState> states;
  std::vector<Observables> observables;
};

/// Normalized Gaussian (w^2 pi)^{-1/4} exp(-(x-x0)^2 / (2 w^2)) exp(i p0 (x-x0)).
inline WaveState make_gaussian(const SpatialGrid& grid, double x0, double width, double p0,
                               double t = 0.0) {
  grid.validate();
  if (!(width > 0.0)) throw ArgumentError("gaussian width must be positive");
  WaveState s;
  s.grid = grid;
  s.t = t;
  s.amps.resize(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double d = grid.x(j) - x0;
    s.amps[j] = std::exp(-d * d / (2.0 * width * width)) *
                std::exp(Complex(0.0, p0 * d));
  }
  const double nrm = s.norm();
  if (!(nrm > 0.0)) throw NumericalError("gaussian underflowed to zero on this grid");
  for (auto& a : s.amps) a /= nrm;
  return s;
}

inline double l2_diff(const WaveState& a, const WaveState& b) {
  if (!(a.grid == b.grid)) throw ArgumentError("l2_diff: grids differ");
  double s = 0.0;
  for (std::size_t j = 0; j < a.amps.size(); ++j) s += std::norm(a.amps[j] - b.amps[j]);
  return std::sqrt(s * a.grid.dx);
}

namespace detail {

struct Tridiag {
  std::vector<Complex> lower, diag, upper;  // lower/upper have size n-1
};

/// Discrete Hamiltonian, exactly Hermitian tridiagonal:
///  - kinetic * P^2 via the central second difference
///  - dilation * D in the symmetrized form -(i/2)(x Dc + Dc x); the node
///    averaging supplies the -i/2 piece, no diagonal correction appears
///  - drift * P via -i Dc
///  - diagonal potential x2 x^2 + x1 x + x0
inline Tridiag hamiltonian_tridiag(const HamiltonianCoeffs& c, const SpatialGrid& g) {
  const std::size_t n = g.n;
  Tridiag h;
  h.lower.resize(n - 1);
  h.diag.resize(n);
  h.upper.resize(n - 1);
  const double inv_dx2 = 1.0 / (g.dx * g.dx);
  const double inv_4dx = 1.0 / (4.0 * g.dx);
  const double inv_2dx = 1.0 / (2.0 * g.dx);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.x(j);
    h.diag[j] = Complex(c.kinetic * 2.0 * inv_dx2 + c.x2 * x * x + c.x1 * x + c.x0, 0.0);
    if (j + 1 < n) {
      const double xs = x + g.x(j + 1);
      h.upper[j] = Complex(-c.kinetic * inv_dx2,
                           -(c.dilation * xs * inv_4dx + c.drift * inv_2dx));
      h.lower[j] = Complex(-c.kinetic * inv_dx2,
                           +(c.dilation * xs * inv_4dx + c.drift * inv_2dx));
    }
  }
  return h;
}

inline void tridiag_apply(const Tridiag& m, const std::vector<Complex>& v,
                          std::vector<Complex>& out) {
  const std::size_t n = v.size();
  out.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc = m.diag[j] * v[j];
    if (j > 0) acc += m.lower[j - 1] * v[j - 1];
    if (j + 1 < n) acc += m.upper[j] * v[j + 1];
    out[j] = acc;
  }
}

/// Thomas algorithm; throws on pivot breakdown.
inline void tridiag_solve(const Tridiag& m, std::vector<Complex>& rhs) {
  const std::size_t n = rhs.size();
  std::vector<Complex> c_prime(n - 1);
  Complex beta = m.diag[0];
  if (std::abs(beta) < 1e-300) throw NumericalError("tridiagonal solve breakdown at row 0");
  rhs[0] /= beta;
  for (std::size_t j = 1; j < n; ++j) {
    c_prime[j - 1] = m.upper[j - 1] / beta;
    beta = m.diag[j] - m.lower[j - 1] * c_prime[j - 1];
    if (std::abs(beta) < 1e-300)
      throw NumericalError("tridiagonal solve breakdown at row " + std::to_string(j));
    rhs[j] = (rhs[j] - m.lower[j - 1] * rhs[j - 1]) / beta;
  }
  for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= c_prime[j] * rhs[j + 1];
}

}  // namespace detail

/// Per-basis-operator expectation values {<I>,<X>,<P>,<X^2>,<P^2>,<D>},
/// x-moments on the grid, p-moments and D in the Fourier representation.
inline std::array<double, kAlgebraDim> basis_expectations(const WaveState& s) {
  const std::size_t n = s.grid.n;
  const double dx = s.grid.dx;
  double w = 0.0, mx = 0.0, mx2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = std::norm(s.amps[j]);
    const double x = s.grid.x(j);
    w += p;
    mx += p * x;
    mx2 += p * x * x;
  }
  std::vector<Complex> hat = s.amps;
  detail::fft(hat, false);
  double wp = 0.0, mp = 0.0, mp2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = std::norm(hat[k]);
    const double pk = detail::fft_momentum(k, n, dx);
    wp += p;
    mp += p * pk;
    mp2 += p * pk * pk;
  }
  // d/dx psi via the spectral derivative, for <D> = Re <psi| -i x d/dx - i/2 |psi>
  std::vector<Complex> dpsi = hat;
  for (std::size_t k = 0; k < n; ++k)
    dpsi[k] *= Complex(0.0, detail::fft_momentum(k, n, dx));
  detail::fft(dpsi, true);
  Complex dacc(0.0);
  for (std::size_t j = 0; j < n; ++j)
    dacc += std::conj(s.amps[j]) *
            (Complex(0.0, -s.grid.x(j)) * dpsi[j] + Complex(0.0, -0.5) * s.amps[j]);

  std::array<double, kAlgebraDim> out{};
  out[int(BasisOp::I)] = w * dx;
  out[int(BasisOp::X)] = mx * dx;
  out[int(BasisOp::X2)] = mx2 * dx;
  out[int(BasisOp::P)] = mp / wp * (w * dx);
  out[int(BasisOp::P2)] = mp2 / wp * (w * dx);
  out[int(BasisOp::D)] = dacc.real() * dx;
  return out;
}

/// <psi| A |psi> for an algebra element A.
inline Complex expectation(const WaveState& s, const AlgebraElement& a) {
  const auto b = basis_expectations(s);
  Complex acc(0.0);
  for (int i = 0; i < kAlgebraDim; ++i) acc += a.coeffs[i] * b[i];
  return acc;
}

inline Observables observables(const WaveState& s) {
  const auto b = basis_expectations(s);
  Observables o;
  o.norm = std::sqrt(b[int(BasisOp::I)]);
  const double w = b[int(BasisOp::I)];
  o.mean_x = b[int(BasisOp::X)] / w;
  o.mean_p = b[int(BasisOp::P)] / w;
  o.dx = std::sqrt(std::max(0.0, b[int(BasisOp::X2)] / w - o.mean_x * o.mean_x));
  o.dp = std::sqrt(std::max(0.0, b[int(BasisOp::P2)] / w - o.mean_p * o.mean_p));
  return o;
}

struct PropagateOptions {
  std::size_t store_every = 1;  // keep every k-th state (first and last always kept)
};

using CoeffSampler = std::function<HamiltonianCoeffs(double)>;

/// Crank-Nicolson: (1 + i dt H_mid / 2) psi+ = (1 - i dt H_mid / 2) psi with H
/// sampled at step midpoints; exactly norm-preserving for the Hermitian
/// discretization above.
inline Trajectory propagate(const CoeffSampler& coeffs, const WaveState& psi0, double t_end,
                            std::size_t n_steps,
                            const PropagateOptions& opts = PropagateOptions{}) {
  psi0.grid.validate();
  if (psi0.amps.size() != psi0.grid.n) throw ArgumentError("state size != grid size");
  if (!(t_end > psi0.t)) throw ArgumentError("propagate: t_end must exceed the state time");
  if (n_steps < 1) throw ArgumentError("propagate: need at least one step");
  if (psi0.boundary_ratio() >= 1e-8)
    throw ArgumentError("propagate: initial state is not boundary-contained (ratio " +
                        std::to_string(psi0.boundary_ratio()) + ")");
  const std::size_t every = std::max<std::size_t>(1, opts.store_every);

  const double dt = (t_end - psi0.t) / double(n_steps);
  Trajectory traj;
  traj.states.reserve(n_steps / every + 2);
  traj.states.push_back(psi0);

  WaveState cur = psi0;
  std::vector<Complex> rhs(cur.grid.n);
  for (std::size_t step = 0; step < n_steps; ++step) {
    const double t_mid = psi0.t + dt * (double(step) + 0.5);
    const HamiltonianCoeffs c = coeffs(t_mid);
    if (!(c.kinetic > 0.0))
      throw NumericalError("kinetic coefficient not positive at t=" + std::to_string(t_mid));
    const detail::Tridiag h = detail::hamiltonian_tridiag(c, cur.grid);

    detail::tridiag_apply(h, cur.amps, rhs);
    const Complex lam(0.0, 0.5 * dt);
    for (std::size_t j = 0; j < cur.grid.n; ++j) rhs[j] = cur.amps[j] - lam * rhs[j];

    detail::Tridiag a_plus = h;
    for (auto& v : a_plus.lower) v *= lam;
    for (auto& v : a_plus.upper) v *= lam;
    for (std::size_t j = 0; j < cur.grid.n; ++j)
      a_plus.diag[j] = Complex(1.0, 0.0) + lam * a_plus.diag[j];

    detail::tridiag_solve(a_plus, rhs);
    cur.amps = rhs;
    cur.t = psi0.t + dt * double(step + 1);

    if (cur.boundary_ratio() > 1e-5)
      throw NumericalError("boundary reflection: edge amplitude ratio " +
                           std::to_string(cur.boundary_ratio()) + " at t=" +
                           std::to_string(cur.t));
    if ((step + 1) % every == 0 || step + 1 == n_steps) traj.states.push_back(cur);
  }

  traj.observables.reserve(traj.states.size());
  for (const auto& s : traj.states) traj.observables.push_back(observables(s));
  return traj;
}

inline Trajectory propagate(const TQSystem& s, const WaveState& psi0, double t_end,
                            std::size_t n_steps,
                            const PropagateOptions& opts = PropagateOptions{}) {
  return propagate([&s](double t) { return hamiltonian_coeffs(s, t); }, psi0, t_end, n_steps,
                   opts);
}
inline Trajectory propagate(const TMSystem& s, const WaveState& psi0, double t_end,
                            std::size_t n_steps,
                            const PropagateOptions& opts = PropagateOptions{}) {
  return propagate([&s](double t) { return hamiltonian_coeffs(s, t); }, psi0, t_end, n_steps,
                   opts);
}
inline Trajectory propagate(const TOSystem& s, const WaveState& psi0, double t_end,
                            std::size_t n_steps,
                            const PropagateOptions& opts = PropagateOptions{}) {
  return propagate([&s](double t) { return hamiltonian_coeffs(s, t); }, psi0, t_end, n_steps,
                   opts);
}

namespace detail {

/// Band-limited evaluation of the trigonometric interpolant at x; hat is the
/// forward FFT of the samples. Points outside the box evaluate to zero (valid
/// for boundary-contained states, and avoids periodic wrap-around).
inline Complex trig_eval(const std::vector<Complex>& hat, const SpatialGrid& g, double x) {
  if (x < g.x_min || x > g.x_last()) return Complex(0.0);
  const std::size_t n = g.n;
  const double u = x - g.x_min;
  const double theta = 2.0 * std::numbers::pi * u / g.length();
  const Complex base(std::cos(theta), std::sin(theta));
  Complex acc = hat[0];
  Complex wp(1.0, 0.0), wm(1.0, 0.0);
  for (std::size_t m = 1; m < n / 2; ++m) {
    wp *= base;
    wm *= std::conj(base);
    acc += hat[m] * wp + hat[n - m] * wm;
  }
  // Nyquist bin as a cosine
  wp *= base;
  acc += hat[n / 2] * wp.real();
  return acc / double(n);
}

}  // namespace detail

/// Applies R(mu,nu,kappa), innermost factor first:
///   exp{i kappa P^2}: momentum-space phase e^{i kappa p^2}
///   exp{i nu D}:      dilation (e^{i nu D} psi)(x) = e^{nu/2} psi(e^nu x),
///                     band-limited resampling on the common grid
///   exp{i mu P}:      shift psi(x + mu) via momentum-space phase e^{i mu p}
inline WaveState apply_r(const WaveState& psi, const GaugeParams& g) {
  psi.grid.validate();
  WaveState out = psi;
  const std::size_t n = psi.grid.n;

  if (g.kappa != 0.0) {
    detail::fft(out.amps, false);
    for (std::size_t k = 0; k < n; ++k) {
      const double p = detail::fft_momentum(k, n, psi.grid.dx);
      out.amps[k] *= std::exp(Complex(0.0, g.kappa * p * p));
    }
    detail::fft(out.amps, true);
  }

  if (g.nu != 0.0) {
    const double thresh = 1e-8 * out.max_amp();  // containment-criterion support
    double s_lo = 0.0, s_hi = 0.0;
    bool found = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(out.amps[j]) > thresh) {
        const double x = out.grid.x(j);
        if (!found) {
          s_lo = s_hi = x;
          found = true;
        } else {
          s_hi = x;
        }
      }
    }
    if (found) {
      const double scale = std::exp(-g.nu);
      const double t_lo = std::min(scale * s_lo, scale * s_hi);
      const double t_hi = std::max(scale * s_lo, scale * s_hi);
      if (t_lo < out.grid.x_min + out.grid.dx || t_hi > out.grid.x_last() - out.grid.dx)
        throw HeadroomError("dilation nu=" + std::to_string(g.nu) +
                            " pushes support [" + std::to_string(t_lo) + ", " +
                            std::to_string(t_hi) + "] off the grid");
    }
    std::vector<Complex> hat = out.amps;
    detail::fft(hat, false);
    const double en = std::exp(g.nu);
    const double amp = std::exp(0.5 * g.nu);
    for (std::size_t j = 0; j < n; ++j)
      out.amps[j] = amp * detail::trig_eval(hat, out.grid, en * out.grid.x(j));
  }

  if (g.mu != 0.0) {
    detail::fft(out.amps, false);
    for (std::size_t k = 0; k < n; ++k) {
      const double p = detail::fft_momentum(k, n, psi.grid.dx);
      out.amps[k] *= std::exp(Complex(0.0, g.mu * p));
    }
    detail::fft(out.amps, true);
  }

  return out;
}

enum class RetimeDirection { Forward, Inverse };

/// Same amplitude data, stamps mapped through the time map.
inline Trajectory retime_trajectory(const Trajectory& traj, const TimeMap& m,
                                    RetimeDirection dir) {
  Trajectory out = traj;
  for (auto& s : out.states)
    s.t = (dir == RetimeDirection::Forward) ? m.forward.value(s.t) : m.inverse.value(s.t);
  return out;
}

/// max over interior states of ||S psi||_2 / ||psi||_2 with d/dt by (possibly
/// nonuniform) centered differences and the propagate spatial discretization;
/// S = -2 (H - i d/dt) for all three S-operator forms.
inline double residual(const CoeffSampler& coeffs, const Trajectory& traj) {
  const auto& st = traj.states;
  if (st.size() < 3) throw ArgumentError("residual: need at least 3 states");
  for (std::size_t i = 1; i < st.size(); ++i) {
    if (!(st[i].grid == st[0].grid)) throw ArgumentError("residual: mismatched grids");
    if (!(st[i].t > st[i - 1].t)) throw ArgumentError("residual: stamps not increasing");
  }
  const std::size_t n = st[0].grid.n;
  std::vector<Complex> hpsi(n);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < st.size(); ++i) {
    const double hm = st[i].t - st[i - 1].t;
    const double hp = st[i + 1].t - st[i].t;
    const double denom = hm * hp * (hm + hp);
    const detail::Tridiag h =
        detail::hamiltonian_tridiag(coeffs(st[i].t), st[i].grid);
    detail::tridiag_apply(h, st[i].amps, hpsi);
    double acc = 0.0, nrm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Complex dpsi = (hm * hm * st[i + 1].amps[j] - hp * hp * st[i - 1].amps[j] +
                            (hp * hp - hm * hm) * st[i].amps[j]) /
                           denom;
      const Complex s = 2.0 * (hpsi[j] - Complex(0.0, 1.0) * dpsi);
      acc += std::norm(s);
      nrm += std::norm(st[i].amps[j]);
    }
    worst = std::max(worst, std::sqrt(acc / nrm));
  }
  return worst;
}

inline double residual(const TQSystem& s, const Trajectory& traj) {
  return residual([&s](double t) { return hamiltonian_coeffs(s, t); }, traj);
}
inline double residual(const TMSystem& s, const Trajectory& traj) {
  return residual([&s](double t) { return hamiltonian_coeffs(s, t); }, traj);
}
inline double residual(const TOSystem& s, const Trajectory& traj) {
  return residual([&s](double t) { return hamiltonian_coeffs(s, t); }, traj);
}

}  // namespace qxform

#pragma once

// The three Schrodinger-equation classes, stored in S-operator normalization:
//   TQ: -[1+k]P^2 + 2T + hD + gP - 2h2 X^2 - 2h1 X - 2h0 I
//   TM: -f P^2 + 2T - 2f2 X^2 - 2f1 X - 2f0 I
//   TO: -P^2 + 2T' - 2g2 X^2 - 2g1 X - 2g0 I        (primed time variable)
// Conversion to Hamiltonian form happens only at the hamiltonian_coeffs boundary.

#include <string>

#include "qxform/timefn.hpp"

namespace qxform {

struct TQSystem {
  TimeFunction k, h, g, h2, h1, h0;

  Domain domain() const {
    Domain d = k.domain();
    for (const auto* f : {&h, &g, &h2, &h1, &h0}) d = Domain::intersect(d, f->domain());
    return d;
  }
};

struct TMSystem {
  TimeFunction f, f2, f1, f0;

  Domain domain() const {
    Domain d = f.domain();
    for (const auto* fn : {&f2, &f1, &f0}) d = Domain::intersect(d, fn->domain());
    return d;
  }
};

struct TOSystem {
  TimeFunction g2, g1, g0;

  Domain domain() const {
    return Domain::intersect(Domain::intersect(g2.domain(), g1.domain()), g0.domain());
  }
};

/// TM is the k = f-1, h = g = 0 slice of TQ.
inline TQSystem embed_tm_in_tq(const TMSystem& s) {
  const Domain d = s.domain();
  TQSystem out;
  out.k = TimeFunction::sum({s.f, TimeFunction::constant(-1.0, d)});
  out.h = TimeFunction::constant(0.0, d);
  out.g = TimeFunction::constant(0.0, d);
  out.h2 = s.f2;
  out.h1 = s.f1;
  out.h0 = s.f0;
  return out;
}

/// TO is the k = h = g = 0 slice of TQ (time symbol renamed t' -> t).
inline TQSystem embed_to_in_tq(const TOSystem& s) {
  const Domain d = s.domain();
  TQSystem out;
  out.k = TimeFunction::constant(0.0, d);
  out.h = TimeFunction::constant(0.0, d);
  out.g = TimeFunction::constant(0.0, d);
  out.h2 = s.g2;
  out.h1 = s.g1;
  out.h0 = s.g0;
  return out;
}

/// Coefficients of H = kinetic*P^2 + dilation*D + drift*P + x2*X^2 + x1*X + x0*I,
/// the Hamiltonian with S Phi = 0  <=>  i dPhi/dt = H Phi. For the S-forms above
/// this means kinetic=(1+k)/2, dilation=-h/2, drift=-g/2, x2=h2, x1=h1, x0=h0.
struct HamiltonianCoeffs {
  double kinetic = 0.0;
  double dilation = 0.0;
  double drift = 0.0;
  double x2 = 0.0;
  double x1 = 0.0;
  double x0 = 0.0;
};

inline HamiltonianCoeffs hamiltonian_coeffs(const TQSystem& s, double t) {
  return HamiltonianCoeffs{0.5 * (1.0 + s.k.value(t)), -0.5 * s.h.value(t),
                           -0.5 * s.g.value(t),         s.h2.value(t),
                           s.h1.value(t),               s.h0.value(t)};
}

inline HamiltonianCoeffs hamiltonian_coeffs(const TMSystem& s, double t) {
  return HamiltonianCoeffs{0.5 * s.f.value(t), 0.0, 0.0, s.f2.value(t), s.f1.value(t),
                           s.f0.value(t)};
}

inline HamiltonianCoeffs hamiltonian_coeffs(const TOSystem& s, double tp) {
  return HamiltonianCoeffs{0.5, 0.0, 0.0, s.g2.value(tp), s.g1.value(tp), s.g0.value(tp)};
}

/// Samples a coefficient function on a grid and throws unless it stays above
/// the given floor. Used for the 1+k > 0 and f > 0 invariants.
inline void require_above(const TimeFunction& f, const std::vector<double>& grid, double floor,
                          const std::string& what) {
  for (double t : grid) {
    const double v = f.value(t);
    if (!(v > floor))
      throw NotInvertibleError(t, what + " = " + std::to_string(v) + " not > " +
                                      std::to_string(floor));
  }
}

}  // namespace qxform

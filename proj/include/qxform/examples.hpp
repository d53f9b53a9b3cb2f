#pragma once

// Closed-form constructors and oracles for the exponential-mass system
// (Example 1) and the power-law system (Example 2): TQ/TM/TO triples, gauges,
// and the time maps with their domain restrictions.

#include <cmath>
#include <limits>
#include <vector>

#include "qxform/systems.hpp"
#include "qxform/transforms.hpp"

namespace qxform {

struct Example1Params {
  double upsilon = 0.0;
  double omega = 1.0;  // omega^2 > 0
  double t0 = 0.0;
};

struct Example2Params {
  double a = 1.0;  // a != 0
  double b = 0.0;
  double omega = 1.0;
  double t0 = 1.0;  // > 0
};

struct ExampleSystems {
  TQSystem tq;
  TMSystem tm;
  TOSystem to;
  GaugeTriple gauge;
  TimeMap map;
};

/// Exponential-mass system: TM with f = e^{U(t-t0)}, f2 = (w^2/2) e^{-U(t-t0)};
/// gauge nu = -U(t-t0)/2; TQ {k=0, h=U, h2=w^2/2}; map t'-t0' = (e^{U dt}-1)/U;
/// TO g2 = (w^2/2)/[1+U(t'-t0')]^2. U=0 degenerates to the identity map and a
/// plain oscillator.
inline ExampleSystems example1_systems(const Example1Params& p, double duration = 10.0) {
  if (!(p.omega > 0.0)) throw ArgumentError("example 1: omega must be positive");
  if (!(duration > 0.0)) throw ArgumentError("example 1: duration must be positive");
  const double U = p.upsilon, w2h = 0.5 * p.omega * p.omega, t0 = p.t0;
  const double t0p = p.t0;
  const Domain D{t0, t0 + duration};

  ExampleSystems out;
  const TimeFunction zero = TimeFunction::constant(0.0, D);

  out.tq.k = zero;
  out.tq.h = TimeFunction::constant(U, D);
  out.tq.g = zero;
  out.tq.h2 = TimeFunction::constant(w2h, D);
  out.tq.h1 = zero;
  out.tq.h0 = zero;

  if (U != 0.0) {
    out.tm.f = TimeFunction::exponential(1.0, U, t0, D);
    out.tm.f2 = TimeFunction::exponential(w2h, -U, t0, D);
  } else {
    out.tm.f = TimeFunction::constant(1.0, D);
    out.tm.f2 = TimeFunction::constant(w2h, D);
  }
  out.tm.f1 = zero;
  out.tm.f0 = zero;

  out.gauge = GaugeTriple::identity(D);
  out.gauge.nu = TimeFunction::polynomial({0.5 * U * t0, -0.5 * U}, D);
  out.gauge.dnu = TimeFunction::constant(-0.5 * U, D);

  if (U != 0.0) {
    out.map.forward = TimeFunction::sum(
        {TimeFunction::exponential(1.0 / U, U, t0, D), TimeFunction::constant(t0p - 1.0 / U, D)});
    const double tp_hi = out.map.forward.value(D.hi);
    const Domain Dp{t0p, tp_hi};
    out.map.inverse = TimeFunction::sum(
        {TimeFunction::logarithm(1.0 / U, 1.0 / U, t0p - 1.0 / U, Dp),
         TimeFunction::constant(t0, Dp)});
    out.to.g2 = TimeFunction::power(w2h, 1.0 / U, -2.0, Dp, t0p - 1.0 / U);
    out.to.g1 = TimeFunction::constant(0.0, Dp);
    out.to.g0 = TimeFunction::constant(0.0, Dp);
  } else {
    out.map.forward = TimeFunction::polynomial({t0p - t0, 1.0}, D);
    const Domain Dp{t0p, t0p + duration};
    out.map.inverse = TimeFunction::polynomial({t0 - t0p, 1.0}, Dp);
    out.to.g2 = TimeFunction::constant(w2h, Dp);
    out.to.g1 = TimeFunction::constant(0.0, Dp);
    out.to.g0 = TimeFunction::constant(0.0, Dp);
  }
  out.map.t0 = t0;
  out.map.t0_prime = t0p;
  return out;
}

/// Power-law system: TM with f = (t0/t)^a, f2 = (w^2/2)(t/t0)^b; gauge
/// nu = (a/2) ln(t/t0); TQ {h = -a/t, h2 = (w^2/2)(t/t0)^{b-a}}; two-branch
/// time map and TO coefficient (a=1 exponential, a!=0,1 power). a=0 rejected.
inline ExampleSystems example2_systems(const Example2Params& p, double t_end = 0.0) {
  if (p.a == 0.0) throw ArgumentError("example 2: a = 0 is unsupported (already TO form)");
  if (!(p.t0 > 0.0)) throw ArgumentError("example 2: t0 must be positive");
  if (!(p.omega > 0.0)) throw ArgumentError("example 2: omega must be positive");
  if (t_end == 0.0) t_end = 10.0 * p.t0;
  if (!(t_end > p.t0)) throw ArgumentError("example 2: t_end must exceed t0");
  const double a = p.a, b = p.b, w2h = 0.5 * p.omega * p.omega, t0 = p.t0;
  const double t0p = p.t0;
  const Domain D{t0, t_end};

  ExampleSystems out;
  const TimeFunction zero = TimeFunction::constant(0.0, D);

  out.tm.f = TimeFunction::power(1.0, t0, -a, D);
  out.tm.f2 = TimeFunction::power(w2h, t0, b, D);
  out.tm.f1 = zero;
  out.tm.f0 = zero;

  out.tq.k = zero;
  out.tq.h = TimeFunction::power(-a / t0, t0, -1.0, D);
  out.tq.g = zero;
  out.tq.h2 = TimeFunction::power(w2h, t0, b - a, D);
  out.tq.h1 = zero;
  out.tq.h0 = zero;

  out.gauge = GaugeTriple::identity(D);
  out.gauge.nu = TimeFunction::logarithm(0.5 * a, t0, 0.0, D);
  out.gauge.dnu = TimeFunction::power(0.5 * a / t0, t0, -1.0, D);

  if (a == 1.0) {
    out.map.forward = TimeFunction::sum(
        {TimeFunction::logarithm(t0, t0, 0.0, D), TimeFunction::constant(t0p, D)});
    const double tp_hi = out.map.forward.value(D.hi);
    const Domain Dp{t0p, tp_hi};
    out.map.inverse = TimeFunction::exponential(t0, 1.0 / t0, t0p, Dp);
    out.to.g2 = TimeFunction::exponential(w2h, (1.0 + b) / t0, t0p, Dp);
    out.to.g1 = TimeFunction::constant(0.0, Dp);
    out.to.g0 = TimeFunction::constant(0.0, Dp);
  } else {
    const double c = t0 / (1.0 - a);
    out.map.forward = TimeFunction::sum(
        {TimeFunction::power(c, t0, 1.0 - a, D), TimeFunction::constant(t0p - c, D)});
    const double tp_hi = out.map.forward.value(D.hi);
    const Domain Dp{t0p, tp_hi};
    out.map.inverse = TimeFunction::power(t0, c, 1.0 / (1.0 - a), Dp, t0p - c);
    if (a + b == 0.0)
      out.to.g2 = TimeFunction::constant(w2h, Dp);
    else
      out.to.g2 = TimeFunction::power(w2h, c, (a + b) / (1.0 - a), Dp, t0p - c);
    out.to.g1 = TimeFunction::constant(0.0, Dp);
    out.to.g0 = TimeFunction::constant(0.0, Dp);
  }
  out.map.t0 = t0;
  out.map.t0_prime = t0p;
  return out;
}

struct DegeneracyReport {
  std::vector<double> a_values;
  double max_dev_from_oscillator = 0.0;  // vs the constant w^2/2
  double max_pairwise_dev = 0.0;
  double probe_lo = 0.0, probe_hi = 0.0;
};

/// For each a with b = -a, runs the generic pipeline (solve_gauge -> tq_to_tm
/// -> time_map_from_f -> tm_to_to) and reports how far the TO images are from
/// one another and from the single oscillator they should all collapse to.
inline DegeneracyReport example2_degeneracy_check(const std::vector<double>& a_values,
                                                  double omega, double t0,
                                                  std::size_t grid_points = 4097) {
  if (a_values.empty()) throw ArgumentError("degeneracy check: empty a list");
  for (double a : a_values)
    if (a == 0.0 || a == 1.0)
      throw ArgumentError("degeneracy check: a values must avoid {0, 1}");

  const double t_end = 10.0 * t0;
  std::vector<TOSystem> images;
  double window_hi = std::numeric_limits<double>::max();
  for (double a : a_values) {
    const ExampleSystems ex = example2_systems(Example2Params{a, -a, omega, t0}, t_end);
    const std::vector<double> grid = uniform_grid(t0, t_end, grid_points);
    const TqToTmResult tm = tq_to_tm_pipeline(ex.tq, GaugeTarget::restricted(), t0, grid);
    const TimeMap map = time_map_from_f(tm.tm.f, t0, t0, grid);
    images.push_back(tm_to_to(tm.tm, map));
    window_hi = std::min(window_hi, map.forward.value(t_end));
  }

  DegeneracyReport rep;
  rep.a_values = a_values;
  rep.probe_lo = t0;
  rep.probe_hi = t0 + (window_hi - t0) * (1.0 - 1e-9);
  const double w2h = 0.5 * omega * omega;
  const std::vector<double> probe = uniform_grid(rep.probe_lo, rep.probe_hi, 201);
  for (double tp : probe) {
    double lo = std::numeric_limits<double>::max(), hi = -lo;
    for (const auto& img : images) {
      const double v = img.g2.value(tp);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      rep.max_dev_from_oscillator = std::max(rep.max_dev_from_oscillator, std::abs(v - w2h));
    }
    rep.max_pairwise_dev = std::max(rep.max_pairwise_dev, hi - lo);
  }
  return rep;
}

}  // namespace qxform

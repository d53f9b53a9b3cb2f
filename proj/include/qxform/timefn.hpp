#pragma once

// Real-valued functions of time with derivatives, composition, definite
// integration, and monotone inversion. Substrate for all coefficient
// functions and the time map.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qxform/errors.hpp"

namespace qxform {

/// Closed time interval.
struct Domain {
  double lo = 0.0;
  double hi = 0.0;

  double slack() const {
    return 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
  }
  bool contains(double t) const { return t >= lo - slack() && t <= hi + slack(); }
  double clamp(double t) const { return std::min(std::max(t, lo), hi); }
  double span() const { return hi - lo; }

  static Domain intersect(const Domain& a, const Domain& b) {
    Domain d{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (d.lo > d.hi)
      throw ArgumentError("empty domain intersection [" + std::to_string(a.lo) + "," +
                          std::to_string(a.hi) + "] vs [" + std::to_string(b.lo) + "," +
                          std::to_string(b.hi) + "]");
    return d;
  }
};

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n_points) {
  if (n_points < 2 || !(hi > lo)) throw ArgumentError("uniform_grid: need hi > lo and >= 2 points");
  std::vector<double> g(n_points);
  const double h = (hi - lo) / double(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) g[i] = lo + h * double(i);
  g.back() = hi;
  return g;
}

class TimeFunction;

namespace detail {

struct ConstantSpec {
  double value;
};
struct PolySpec {
  std::vector<double> coeffs;  // sum_k c_k t^k
};
struct ExpSpec {
  double scale, rate, t0;  // scale * exp(rate * (t - t0))
};
struct PowerSpec {
  double scale, base_time, exponent, origin;  // scale * ((t - origin)/base_time)^exponent
};
struct LogSpec {
  double scale, base_time, origin;  // scale * ln((t - origin)/base_time)
};
struct TableSpec {
  std::vector<double> times, values, slopes;
  int order = 3;  // 1 = piecewise linear, 3 = cubic Hermite
};
struct SumSpec {
  std::vector<TimeFunction> terms;
};
struct InverseSpec {
  std::shared_ptr<const TimeFunction> forward;
  TableSpec seed;      // seed.times are forward-values (ascending), seed.values the preimages
  bool increasing = true;
};

/// Monotonicity-preserving slopes (Fritsch-Carlson style, as in PCHIP).
inline std::vector<double> pchip_slopes(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    d[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double m0 = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m0 * d0 <= 0.0)
      m0 = 0.0;
    else if (d0 * d1 < 0.0 && std::abs(m0) > 3.0 * std::abs(d0))
      m0 = 3.0 * d0;
    return m0;
  };
  m[0] = edge(h[0], h[1], d[0], d[1]);
  m[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  return m;
}

/// Slopes from the derivative of the local Lagrange cubic through the four
/// nearest nodes; O(h^3) accurate on smooth data (no monotonicity guarantee).
inline std::vector<double> local_cubic_slopes(const std::vector<double>& x,
                                              const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = (i < 2) ? 0 : std::min(i - 1, n - 4);
    // derivative of the cubic through nodes s..s+3 evaluated at x[i]
    double acc = 0.0;
    for (std::size_t j = s; j < s + 4; ++j) {
      double denom = 1.0;
      for (std::size_t k = s; k < s + 4; ++k)
        if (k != j) denom *= (x[j] - x[k]);
      double num;
      if (j == i) {
        num = 0.0;
        for (std::size_t k = s; k < s + 4; ++k)
          if (k != j) {
            double prod = 1.0;
            for (std::size_t l = s; l < s + 4; ++l)
              if (l != j && l != k) prod *= (x[i] - x[l]);
            num += prod;
          }
      } else {
        num = 1.0;
        for (std::size_t k = s; k < s + 4; ++k)
          if (k != j && k != i) num *= (x[i] - x[k]);
      }
      acc += y[j] * num / denom;
    }
    m[i] = acc;
  }
  return m;
}

inline void validate_table(const TableSpec& t) {
  if (t.times.size() < 4) throw ArgumentError("table spec needs at least 4 samples");
  if (t.values.size() != t.times.size()) throw ArgumentError("table times/values size mismatch");
  if (!t.slopes.empty() && t.slopes.size() != t.times.size())
    throw ArgumentError("table slopes size mismatch");
  for (std::size_t i = 0; i + 1 < t.times.size(); ++i)
    if (!(t.times[i + 1] > t.times[i]))
      throw ArgumentError("table sample times must be strictly increasing (index " +
                          std::to_string(i) + ")");
  if (t.order != 1 && t.order != 3) throw ArgumentError("table order must be 1 or 3");
}

inline std::size_t table_interval(const TableSpec& t, double x) {
  // index i with x in [times[i], times[i+1]]; clamps to the end intervals
  auto it = std::upper_bound(t.times.begin(), t.times.end(), x);
  std::size_t i = (it == t.times.begin()) ? 0 : std::size_t(it - t.times.begin() - 1);
  return std::min(i, t.times.size() - 2);
}

inline double table_value(const TableSpec& t, double x) {
  const std::size_t i = table_interval(t, x);
  const double h = t.times[i + 1] - t.times[i];
  double s = (x - t.times[i]) / h;
  s = std::min(std::max(s, 0.0), 1.0);
  if (t.order == 1)
    return t.values[i] + s * (t.values[i + 1] - t.values[i]);
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * t.values[i] + h * h10 * t.slopes[i] + h01 * t.values[i + 1] +
         h * h11 * t.slopes[i + 1];
}

inline double table_derivative(const TableSpec& t, double x) {
  const std::size_t i = table_interval(t, x);
  const double h = t.times[i + 1] - t.times[i];
  double s = (x - t.times[i]) / h;
  s = std::min(std::max(s, 0.0), 1.0);
  if (t.order == 1) return (t.values[i + 1] - t.values[i]) / h;
  const double s2 = s * s;
  const double d00 = 6 * s2 - 6 * s, d10 = 3 * s2 - 4 * s + 1;
  const double d01 = -6 * s2 + 6 * s, d11 = 3 * s2 - 2 * s;
  return (d00 * t.values[i] + h * d10 * t.slopes[i] + d01 * t.values[i + 1] +
          h * d11 * t.slopes[i + 1]) /
         h;
}

using SpecVariant =
    std::variant<ConstantSpec, PolySpec, ExpSpec, PowerSpec, LogSpec, TableSpec, SumSpec,
                 InverseSpec>;

}  // namespace detail

class TimeFunction {
public:
  TimeFunction() : dom_{0.0, 1.0}, spec_(detail::ConstantSpec{0.0}) {}

  static TimeFunction constant(double value, Domain dom) {
    return TimeFunction(dom, detail::ConstantSpec{value});
  }
  static TimeFunction polynomial(std::vector<double> coeffs, Domain dom) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    return TimeFunction(dom, detail::PolySpec{std::move(coeffs)});
  }
  static TimeFunction exponential(double scale, double rate, double t0, Domain dom) {
    return TimeFunction(dom, detail::ExpSpec{scale, rate, t0});
  }
  static TimeFunction power(double scale, double base_time, double exponent, Domain dom,
                            double origin = 0.0) {
    if (base_time == 0.0) throw ArgumentError("power spec: base_time must be nonzero");
    return TimeFunction(dom, detail::PowerSpec{scale, base_time, exponent, origin});
  }
  static TimeFunction logarithm(double scale, double base_time, double origin, Domain dom) {
    if (base_time == 0.0) throw ArgumentError("log spec: base_time must be nonzero");
    return TimeFunction(dom, detail::LogSpec{scale, base_time, origin});
  }
  /// Table with explicit slopes (exact Hermite data).
  static TimeFunction table(std::vector<double> times, std::vector<double> values,
                            std::vector<double> slopes, int order = 3) {
    detail::TableSpec t{std::move(times), std::move(values), std::move(slopes), order};
    detail::validate_table(t);
    Domain dom{t.times.front(), t.times.back()};
    return TimeFunction(dom, std::move(t));
  }
  /// Table with monotonicity-preserving (PCHIP) slopes.
  static TimeFunction table_pchip(std::vector<double> times, std::vector<double> values,
                                  int order = 3) {
    detail::TableSpec t{std::move(times), std::move(values), {}, order};
    detail::validate_table(t);
    if (order == 3) t.slopes = detail::pchip_slopes(t.times, t.values);
    Domain dom{t.times.front(), t.times.back()};
    return TimeFunction(dom, std::move(t));
  }
  /// Table with local-cubic slopes; preferred for machine-generated smooth samples.
  static TimeFunction table_auto(std::vector<double> times, std::vector<double> values) {
    detail::TableSpec t{std::move(times), std::move(values), {}, 3};
    detail::validate_table(t);
    t.slopes = detail::local_cubic_slopes(t.times, t.values);
    Domain dom{t.times.front(), t.times.back()};
    return TimeFunction(dom, std::move(t));
  }
  static TimeFunction sum(std::vector<TimeFunction> terms) {
    if (terms.empty()) throw ArgumentError("sum spec needs at least one term");
    Domain dom = terms.front().domain();
    for (std::size_t i = 1; i < terms.size(); ++i) dom = Domain::intersect(dom, terms[i].domain());
    return TimeFunction(dom, detail::SumSpec{std::move(terms)});
  }

  const Domain& domain() const { return dom_; }
  const detail::SpecVariant& spec() const { return spec_; }

  /// Sample nodes, when the function is table-backed; nullptr otherwise.
  const std::vector<double>* nodes() const {
    if (const auto* t = std::get_if<detail::TableSpec>(&spec_)) return &t->times;
    if (const auto* inv = std::get_if<detail::InverseSpec>(&spec_)) return &inv->seed.times;
    return nullptr;
  }

  double value(double t) const {
    check_domain(t);
    return value_raw(t);
  }
  double operator()(double t) const { return value(t); }

  double derivative(double t) const {
    check_domain(t);
    return derivative_raw(t);
  }

  /// Closed-form derivative as a TimeFunction (table-backed specs sample slopes).
  TimeFunction derivative_fn() const;

  friend TimeFunction integrate_cumulative(const TimeFunction& f, double t0,
                                           const std::vector<double>& grid);
  friend TimeFunction invert_monotone(const TimeFunction& F);
  friend TimeFunction compose(const TimeFunction& f, const TimeFunction& m);

private:
  TimeFunction(Domain d, detail::SpecVariant s) : dom_(d), spec_(std::move(s)) {}

  void check_domain(double t) const {
    if (!dom_.contains(t)) throw OutOfDomainError(t, dom_.lo, dom_.hi, "time function");
  }

  double value_raw(double t) const {
    return std::visit(
        [&](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, detail::ConstantSpec>) {
            return s.value;
          } else if constexpr (std::is_same_v<S, detail::PolySpec>) {
            double acc = 0.0;
            for (std::size_t k = s.coeffs.size(); k-- > 0;) acc = acc * t + s.coeffs[k];
            return acc;
          } else if constexpr (std::is_same_v<S, detail::ExpSpec>) {
            return s.scale * std::exp(s.rate * (t - s.t0));
          } else if constexpr (std::is_same_v<S, detail::PowerSpec>) {
            const double r = (t - s.origin) / s.base_time;
            const double v = s.scale * std::pow(r, s.exponent);
            if (!std::isfinite(v))
              throw NumericalError("power spec not finite at t=" + std::to_string(t));
            return v;
          } else if constexpr (std::is_same_v<S, detail::LogSpec>) {
            const double r = (t - s.origin) / s.base_time;
            if (!(r > 0.0))
              throw NumericalError("log spec argument <= 0 at t=" + std::to_string(t));
            return s.scale * std::log(r);
          } else if constexpr (std::is_same_v<S, detail::TableSpec>) {
            return detail::table_value(s, t);
          } else if constexpr (std::is_same_v<S, detail::SumSpec>) {
            double acc = 0.0;
            for (const auto& f : s.terms) acc += f.value_raw(f.dom_.clamp(t));
            return acc;
          } else {  // InverseSpec
            return inverse_eval(s, t);
          }
        },
        spec_);
  }

  double derivative_raw(double t) const {
    return std::visit(
        [&](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, detail::ConstantSpec>) {
            return 0.0;
          } else if constexpr (std::is_same_v<S, detail::PolySpec>) {
            double acc = 0.0;
            for (std::size_t k = s.coeffs.size(); k-- > 1;)
              acc = acc * t + s.coeffs[k] * double(k);
            return acc;
          } else if constexpr (std::is_same_v<S, detail::ExpSpec>) {
            return s.scale * s.rate * std::exp(s.rate * (t - s.t0));
          } else if constexpr (std::is_same_v<S, detail::PowerSpec>) {
            if (s.exponent == 0.0) return 0.0;
            const double r = (t - s.origin) / s.base_time;
            const double v = s.scale * s.exponent / s.base_time * std::pow(r, s.exponent - 1.0);
            if (!std::isfinite(v))
              throw NumericalError("power spec derivative not finite at t=" + std::to_string(t));
            return v;
          } else if constexpr (std::is_same_v<S, detail::LogSpec>) {
            return s.scale / (t - s.origin);
          } else if constexpr (std::is_same_v<S, detail::TableSpec>) {
            return detail::table_derivative(s, t);
          } else if constexpr (std::is_same_v<S, detail::SumSpec>) {
            double acc = 0.0;
            for (const auto& f : s.terms) acc += f.derivative_raw(f.dom_.clamp(t));
            return acc;
          } else {  // InverseSpec
            const double x = inverse_eval(s, t);
            const double d = s.forward->derivative(s.forward->dom_.clamp(x));
            return 1.0 / d;
          }
        },
        spec_);
  }

  /// Hermite-seeded, bracket-safeguarded Newton solve of forward(x) = target.
  static double inverse_eval(const detail::InverseSpec& s, double target) {
    const auto& seed = s.seed;
    const std::size_t i = detail::table_interval(seed, target);
    double lo = std::min(seed.values[i], seed.values[i + 1]);
    double hi = std::max(seed.values[i], seed.values[i + 1]);
    double x = detail::table_value(seed, target);
    x = std::min(std::max(x, lo), hi);
    const TimeFunction& F = *s.forward;
    const double ytol = 1e-13 * std::max({1.0, std::abs(seed.times.front()),
                                          std::abs(seed.times.back())});
    const double sgn = s.increasing ? 1.0 : -1.0;
    for (int it = 0; it < 60; ++it) {
      const double fx = F.value_raw(F.dom_.clamp(x));
      const double err = fx - target;
      if (std::abs(err) <= ytol) break;
      if (sgn * err > 0.0)
        hi = std::min(hi, x);
      else
        lo = std::max(lo, x);
      const double d = F.derivative_raw(F.dom_.clamp(x));
      double next = (d != 0.0) ? x - err / d : 0.5 * (lo + hi);
      if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
      if (next == x) break;
      x = next;
    }
    return x;
  }

  Domain dom_;
  detail::SpecVariant spec_;
};

inline TimeFunction TimeFunction::derivative_fn() const {
  return std::visit(
      [&](const auto& s) -> TimeFunction {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, detail::ConstantSpec>) {
          return TimeFunction::constant(0.0, dom_);
        } else if constexpr (std::is_same_v<S, detail::PolySpec>) {
          std::vector<double> dc;
          for (std::size_t k = 1; k < s.coeffs.size(); ++k)
            dc.push_back(s.coeffs[k] * double(k));
          return TimeFunction::polynomial(std::move(dc), dom_);
        } else if constexpr (std::is_same_v<S, detail::ExpSpec>) {
          return TimeFunction::exponential(s.scale * s.rate, s.rate, s.t0, dom_);
        } else if constexpr (std::is_same_v<S, detail::PowerSpec>) {
          if (s.exponent == 0.0) return TimeFunction::constant(0.0, dom_);
          return TimeFunction::power(s.scale * s.exponent / s.base_time, s.base_time,
                                     s.exponent - 1.0, dom_, s.origin);
        } else if constexpr (std::is_same_v<S, detail::LogSpec>) {
          return TimeFunction::power(s.scale, 1.0, -1.0, dom_, s.origin);
        } else if constexpr (std::is_same_v<S, detail::TableSpec>) {
          return TimeFunction::table_auto(s.times, s.slopes);
        } else if constexpr (std::is_same_v<S, detail::SumSpec>) {
          std::vector<TimeFunction> dterms;
          dterms.reserve(s.terms.size());
          for (const auto& f : s.terms) dterms.push_back(f.derivative_fn());
          return TimeFunction::sum(std::move(dterms));
        } else {  // InverseSpec: sample 1/F' on the seed nodes
          std::vector<double> vals(s.seed.times.size());
          for (std::size_t i = 0; i < vals.size(); ++i)
            vals[i] = 1.0 / s.forward->derivative(s.seed.values[i]);
          return TimeFunction::table_auto(s.seed.times, std::move(vals));
        }
      },
      spec_);
}

/// Cumulative integral F with F(t0)=0, F'=f: per-interval Simpson with one
/// Richardson refinement, returned as a table with exact slopes F' = f.
inline TimeFunction integrate_cumulative(const TimeFunction& f, double t0,
                                         const std::vector<double>& grid) {
  if (grid.size() < 2) throw ArgumentError("integrate_cumulative: grid needs >= 2 points");
  if (std::abs(grid.front() - t0) > Domain{t0, grid.back()}.slack())
    throw ArgumentError("integrate_cumulative: grid must start at t0");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i + 1] > grid[i]))
      throw ArgumentError("integrate_cumulative: grid must be strictly increasing");

  std::vector<double> values(grid.size()), slopes(grid.size());
  auto simpson = [&](double a, double fa, double b, double fb) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (fa + 4.0 * f.value(m) + fb);
  };
  double acc = 0.0;
  double f_prev = f.value(grid[0]);
  values[0] = 0.0;
  slopes[0] = f_prev;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i], b = grid[i + 1];
    const double m = 0.5 * (a + b);
    const double fb = f.value(b), fm = f.value(m);
    const double s1 = simpson(a, f_prev, b, fb);
    const double s2 = simpson(a, f_prev, m, fm) + simpson(m, fm, b, fb);
    acc += s2 + (s2 - s1) / 15.0;
    values[i + 1] = acc;
    slopes[i + 1] = fb;
    f_prev = fb;
  }
  return TimeFunction::table(grid, std::move(values), std::move(slopes));
}

/// Inverse of a strictly monotone function: monotone-interpolation seed plus
/// safeguarded Newton refinement against F itself.
inline TimeFunction invert_monotone(const TimeFunction& F) {
  std::vector<double> ts;
  if (const auto* n = F.nodes())
    ts = *n;
  else
    ts = uniform_grid(F.domain().lo, F.domain().hi, 1025);

  std::vector<double> vals(ts.size()), ders(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    vals[i] = F.value(ts[i]);
    ders[i] = F.derivative(ts[i]);
  }
  const double sgn = ders[0] >= 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(sgn * ders[i] > 1e-12))
      throw NotInvertibleError(ts[i], "function is not strictly monotone: derivative " +
                                          std::to_string(ders[i]));
    if (i > 0 && !(sgn * (vals[i] - vals[i - 1]) > 0.0))
      throw NotInvertibleError(ts[i], "function values are not strictly monotone");
  }

  detail::TableSpec seed;
  seed.order = 3;
  if (sgn > 0) {
    seed.times = vals;
    seed.values = ts;
    seed.slopes.resize(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) seed.slopes[i] = 1.0 / ders[i];
  } else {
    const std::size_t n = ts.size();
    seed.times.resize(n);
    seed.values.resize(n);
    seed.slopes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      seed.times[i] = vals[n - 1 - i];
      seed.values[i] = ts[n - 1 - i];
      seed.slopes[i] = 1.0 / ders[n - 1 - i];
    }
  }

  detail::InverseSpec inv;
  inv.forward = std::make_shared<TimeFunction>(F);
  inv.seed = std::move(seed);
  inv.increasing = sgn > 0;
  Domain dom{inv.seed.times.front(), inv.seed.times.back()};
  return TimeFunction(dom, detail::SpecVariant(std::move(inv)));
}

/// Pointwise composition f(m(t)) realized as a table on m's grid.
inline TimeFunction compose(const TimeFunction& f, const TimeFunction& m) {
  std::vector<double> ts;
  if (const auto* n = m.nodes())
    ts = *n;
  else
    ts = uniform_grid(m.domain().lo, m.domain().hi, 1025);

  std::vector<double> vals(ts.size()), slopes(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double u = m.value(ts[i]);
    if (!f.domain().contains(u))
      throw OutOfDomainError(u, f.domain().lo, f.domain().hi, "composition outer function");
    vals[i] = f.value(u);
    slopes[i] = f.derivative(u) * m.derivative(ts[i]);
  }
  return TimeFunction::table(std::move(ts), std::move(vals), std::move(slopes));
}

/// Monotone bijection t <-> t' with tabulated forward/inverse evaluation.
struct TimeMap {
  TimeFunction forward;  // t -> t'
  TimeFunction inverse;  // t' -> t
  double t0 = 0.0;
  double t0_prime = 0.0;

  double forward_at(double t) const { return forward.value(t); }
  double inverse_at(double tp) const { return inverse.value(tp); }
};

}  // namespace qxform

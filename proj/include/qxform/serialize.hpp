#pragma once

// JSON schemas for coefficient specs, systems, gauges and reports, plus the
// trajectory CSV/binary exports. Everything here is deterministic: identical
// inputs produce byte-identical files.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "qxform/propagate.hpp"
#include "qxform/qxform.hpp"

namespace qxform {

using ojson = nlohmann::ordered_json;

/// Config/schema violation; the CLI maps it to exit status 2.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

namespace serde {

inline void check_keys(const ojson& obj, const std::vector<std::string>& allowed,
                       const std::string& ctx) {
  if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const auto& k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(ctx + ": unknown key \"" + item.key() + "\"");
  }
}

inline double require_number(const ojson& obj, const std::string& key, const std::string& ctx) {
  if (!obj.contains(key)) throw ConfigError(ctx + ": missing \"" + key + "\"");
  if (!obj[key].is_number()) throw ConfigError(ctx + ": \"" + key + "\" must be a number");
  return obj[key].get<double>();
}

inline double number_or(const ojson& obj, const std::string& key, double fallback,
                        const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(ctx + ": \"" + key + "\" must be a number");
  return obj[key].get<double>();
}

inline std::vector<double> require_array(const ojson& obj, const std::string& key,
                                         const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_array())
    throw ConfigError(ctx + ": missing array \"" + key + "\"");
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number()) throw ConfigError(ctx + ": \"" + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline Domain parse_domain(const ojson& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(ctx + ": \"domain\" must be [lo, hi]");
  Domain d{j[0].get<double>(), j[1].get<double>()};
  if (!(d.hi > d.lo)) throw ConfigError(ctx + ": domain must satisfy hi > lo");
  return d;
}

}  // namespace serde

inline ojson to_json(const Domain& d) { return ojson::array({d.lo, d.hi}); }

inline ojson to_json(const TimeFunction& f) {
  using namespace detail;
  ojson j;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ConstantSpec>) {
          j["kind"] = "constant";
          j["value"] = s.value;
          j["domain"] = to_json(f.domain());
        } else if constexpr (std::is_same_v<S, PolySpec>) {
          j["kind"] = "poly";
          j["coeffs"] = s.coeffs;
          j["domain"] = to_json(f.domain());
        } else if constexpr (std::is_same_v<S, ExpSpec>) {
          j["kind"] = "exp";
          j["scale"] = s.scale;
          j["rate"] = s.rate;
          j["t0"] = s.t0;
          j["domain"] = to_json(f.domain());
        } else if constexpr (std::is_same_v<S, PowerSpec>) {
          j["kind"] = "power";
          j["scale"] = s.scale;
          j["base_time"] = s.base_time;
          j["exponent"] = s.exponent;
          if (s.origin != 0.0) j["origin"] = s.origin;
          j["domain"] = to_json(f.domain());
        } else if constexpr (std::is_same_v<S, LogSpec>) {
          j["kind"] = "log";
          j["scale"] = s.scale;
          j["base_time"] = s.base_time;
          j["origin"] = s.origin;
          j["domain"] = to_json(f.domain());
        } else if constexpr (std::is_same_v<S, TableSpec>) {
          j["kind"] = "table";
          j["order"] = s.order;
          j["times"] = s.times;
          j["values"] = s.values;
          if (!s.slopes.empty()) j["slopes"] = s.slopes;
        } else if constexpr (std::is_same_v<S, SumSpec>) {
          j["kind"] = "sum";
          ojson terms = ojson::array();
          for (const auto& t : s.terms) terms.push_back(to_json(t));
          j["terms"] = std::move(terms);
        } else {  // InverseSpec: emitted as its tabulated seed (one-way)
          j["kind"] = "table";
          j["order"] = s.seed.order;
          j["times"] = s.seed.times;
          j["values"] = s.seed.values;
          j["slopes"] = s.seed.slopes;
        }
      },
      f.spec());
  return j;
}

inline TimeFunction time_function_from_json(const ojson& j, const std::string& ctx) {
  using namespace serde;
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ConfigError(ctx + ": coefficient spec needs a \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "constant") {
      check_keys(j, {"kind", "value", "domain"}, ctx);
      return TimeFunction::constant(require_number(j, "value", ctx),
                                    parse_domain(j.at("domain"), ctx));
    }
    if (kind == "poly") {
      check_keys(j, {"kind", "coeffs", "domain"}, ctx);
      return TimeFunction::polynomial(require_array(j, "coeffs", ctx),
                                      parse_domain(j.at("domain"), ctx));
    }
    if (kind == "exp") {
      check_keys(j, {"kind", "scale", "rate", "t0", "domain"}, ctx);
      return TimeFunction::exponential(require_number(j, "scale", ctx),
                                       require_number(j, "rate", ctx),
                                       require_number(j, "t0", ctx),
                                       parse_domain(j.at("domain"), ctx));
    }
    if (kind == "power") {
      check_keys(j, {"kind", "scale", "base_time", "exponent", "origin", "domain"}, ctx);
      return TimeFunction::power(require_number(j, "scale", ctx),
                                 require_number(j, "base_time", ctx),
                                 require_number(j, "exponent", ctx),
                                 parse_domain(j.at("domain"), ctx),
                                 number_or(j, "origin", 0.0, ctx));
    }
    if (kind == "log") {
      check_keys(j, {"kind", "scale", "base_time", "origin", "domain"}, ctx);
      return TimeFunction::logarithm(require_number(j, "scale", ctx),
                                     require_number(j, "base_time", ctx),
                                     require_number(j, "origin", ctx),
                                     parse_domain(j.at("domain"), ctx));
    }
    if (kind == "table") {
      check_keys(j, {"kind", "order", "times", "values", "slopes"}, ctx);
      const int order = j.contains("order") ? j["order"].get<int>() : 3;
      if (j.contains("slopes"))
        return TimeFunction::table(require_array(j, "times", ctx),
                                   require_array(j, "values", ctx),
                                   require_array(j, "slopes", ctx), order);
      return TimeFunction::table_pchip(require_array(j, "times", ctx),
                                       require_array(j, "values", ctx), order);
    }
    if (kind == "sum") {
      check_keys(j, {"kind", "terms"}, ctx);
      if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
        throw ConfigError(ctx + ": sum needs a nonempty \"terms\" array");
      std::vector<TimeFunction> terms;
      for (const auto& t : j["terms"]) terms.push_back(time_function_from_json(t, ctx));
      return TimeFunction::sum(std::move(terms));
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
  throw ConfigError(ctx + ": unknown spec kind \"" + kind + "\"");
}

using AnySystem = std::variant<TQSystem, TMSystem, TOSystem>;

namespace serde {

inline TimeFunction coeff_or_zero(const ojson& coeffs, const std::string& name,
                                  const Domain& dom, const std::string& ctx) {
  if (!coeffs.contains(name)) return TimeFunction::constant(0.0, dom);
  return time_function_from_json(coeffs[name], ctx + "." + name);
}

inline Domain system_domain(const ojson& j, const ojson& coeffs,
                            const std::vector<std::string>& names, const std::string& ctx) {
  if (j.contains("domain")) return parse_domain(j["domain"], ctx);
  bool have = false;
  Domain dom{0.0, 1.0};
  for (const auto& n : names) {
    if (!coeffs.contains(n)) continue;
    const Domain d = time_function_from_json(coeffs[n], ctx + "." + n).domain();
    dom = have ? Domain::intersect(dom, d) : d;
    have = true;
  }
  if (!have)
    throw ConfigError(ctx + ": give at least one coefficient or a \"domain\"");
  return dom;
}

}  // namespace serde

inline AnySystem system_from_json(const ojson& j, const std::string& ctx = "system") {
  using namespace serde;
  check_keys(j, {"class", "domain", "coeffs"}, ctx);
  if (!j.contains("class") || !j["class"].is_string())
    throw ConfigError(ctx + ": needs a \"class\" of TQ, TM or TO");
  const std::string cls = j["class"].get<std::string>();
  const ojson coeffs = j.contains("coeffs") ? j["coeffs"] : ojson::object();
  if (cls == "TQ") {
    check_keys(coeffs, {"k", "h", "g", "h2", "h1", "h0"}, ctx + ".coeffs");
    const Domain dom = system_domain(j, coeffs, {"k", "h", "g", "h2", "h1", "h0"}, ctx);
    return TQSystem{coeff_or_zero(coeffs, "k", dom, ctx), coeff_or_zero(coeffs, "h", dom, ctx),
                    coeff_or_zero(coeffs, "g", dom, ctx), coeff_or_zero(coeffs, "h2", dom, ctx),
                    coeff_or_zero(coeffs, "h1", dom, ctx),
                    coeff_or_zero(coeffs, "h0", dom, ctx)};
  }
  if (cls == "TM") {
    check_keys(coeffs, {"f", "f2", "f1", "f0"}, ctx + ".coeffs");
    const Domain dom = system_domain(j, coeffs, {"f", "f2", "f1", "f0"}, ctx);
    TMSystem s{coeff_or_zero(coeffs, "f", dom, ctx), coeff_or_zero(coeffs, "f2", dom, ctx),
               coeff_or_zero(coeffs, "f1", dom, ctx), coeff_or_zero(coeffs, "f0", dom, ctx)};
    if (!coeffs.contains("f")) s.f = TimeFunction::constant(1.0, dom);
    return s;
  }
  if (cls == "TO") {
    check_keys(coeffs, {"g2", "g1", "g0"}, ctx + ".coeffs");
    const Domain dom = system_domain(j, coeffs, {"g2", "g1", "g0"}, ctx);
    return TOSystem{coeff_or_zero(coeffs, "g2", dom, ctx), coeff_or_zero(coeffs, "g1", dom, ctx),
                    coeff_or_zero(coeffs, "g0", dom, ctx)};
  }
  throw ConfigError(ctx + ": unknown class \"" + cls + "\"");
}

namespace serde {

/// Tables above this node count are resampled for report output.
inline TimeFunction decimate(const TimeFunction& f, std::size_t max_nodes = 129) {
  const auto* nodes = f.nodes();
  if (!nodes || nodes->size() <= max_nodes) return f;
  const std::vector<double> ts = uniform_grid(f.domain().lo, f.domain().hi, max_nodes);
  std::vector<double> vals(ts.size()), slopes(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    vals[i] = f.value(ts[i]);
    slopes[i] = f.derivative(ts[i]);
  }
  return TimeFunction::table(ts, std::move(vals), std::move(slopes));
}

}  // namespace serde

inline ojson to_json(const TQSystem& s) {
  ojson j;
  j["class"] = "TQ";
  j["coeffs"]["k"] = to_json(serde::decimate(s.k));
  j["coeffs"]["h"] = to_json(serde::decimate(s.h));
  j["coeffs"]["g"] = to_json(serde::decimate(s.g));
  j["coeffs"]["h2"] = to_json(serde::decimate(s.h2));
  j["coeffs"]["h1"] = to_json(serde::decimate(s.h1));
  j["coeffs"]["h0"] = to_json(serde::decimate(s.h0));
  return j;
}
inline ojson to_json(const TMSystem& s) {
  ojson j;
  j["class"] = "TM";
  j["coeffs"]["f"] = to_json(serde::decimate(s.f));
  j["coeffs"]["f2"] = to_json(serde::decimate(s.f2));
  j["coeffs"]["f1"] = to_json(serde::decimate(s.f1));
  j["coeffs"]["f0"] = to_json(serde::decimate(s.f0));
  return j;
}
inline ojson to_json(const TOSystem& s) {
  ojson j;
  j["class"] = "TO";
  j["coeffs"]["g2"] = to_json(serde::decimate(s.g2));
  j["coeffs"]["g1"] = to_json(serde::decimate(s.g1));
  j["coeffs"]["g0"] = to_json(serde::decimate(s.g0));
  return j;
}
inline ojson to_json(const AnySystem& s) {
  return std::visit([](const auto& v) { return to_json(v); }, s);
}

inline GaugeTriple gauge_from_json(const ojson& j, const std::string& ctx = "gauge") {
  serde::check_keys(j, {"kappa", "mu", "nu", "dkappa", "dmu", "dnu"}, ctx);
  for (const char* k : {"kappa", "mu", "nu"})
    if (!j.contains(k)) throw ConfigError(ctx + ": missing \"" + std::string(k) + "\"");
  GaugeTriple g;
  g.kappa = time_function_from_json(j["kappa"], ctx + ".kappa");
  g.mu = time_function_from_json(j["mu"], ctx + ".mu");
  g.nu = time_function_from_json(j["nu"], ctx + ".nu");
  g.dkappa = j.contains("dkappa") ? time_function_from_json(j["dkappa"], ctx + ".dkappa")
                                  : g.kappa.derivative_fn();
  g.dmu = j.contains("dmu") ? time_function_from_json(j["dmu"], ctx + ".dmu")
                            : g.mu.derivative_fn();
  g.dnu = j.contains("dnu") ? time_function_from_json(j["dnu"], ctx + ".dnu")
                            : g.nu.derivative_fn();
  return g;
}

inline ojson gauge_summary_json(const GaugeTriple& g) {
  const Domain d = g.kappa.domain();
  const std::vector<double> ts = uniform_grid(d.lo, d.hi, 33);
  ojson samples;
  std::vector<double> kv, mv, nv;
  double kmax = 0.0, mmax = 0.0, nlo = 0.0, nhi = 0.0;
  for (double t : ts) {
    kv.push_back(g.kappa.value(t));
    mv.push_back(g.mu.value(t));
    nv.push_back(g.nu.value(t));
    kmax = std::max(kmax, std::abs(kv.back()));
    mmax = std::max(mmax, std::abs(mv.back()));
    nlo = std::min(nlo, nv.back());
    nhi = std::max(nhi, nv.back());
  }
  ojson j;
  j["kappa_max"] = kmax;
  j["mu_max"] = mmax;
  j["nu_min"] = nlo;
  j["nu_max"] = nhi;
  j["samples"]["t"] = ts;
  j["samples"]["kappa"] = kv;
  j["samples"]["mu"] = mv;
  j["samples"]["nu"] = nv;
  return j;
}

inline ojson to_json(const TransformReport& r) {
  ojson j;
  j["source"] = r.source;
  j["target"] = r.target;
  if (r.gauge) j["gauge_summary"] = gauge_summary_json(*r.gauge);
  if (r.time_map) {
    j["map_domain"]["t"] = to_json(r.time_map->forward.domain());
    j["map_domain"]["t_prime"] = to_json(r.time_map->inverse.domain());
    j["map_domain"]["t0"] = r.time_map->t0;
    j["map_domain"]["t0_prime"] = r.time_map->t0_prime;
  }
  j["residuals"] = ojson::object();
  for (const auto& [k, v] : r.residuals) j["residuals"][k] = v;
  j["discrepancies"] = ojson::object();
  for (const auto& [k, v] : r.discrepancies) j["discrepancies"][k] = v;
  return j;
}

inline void write_json_file(const ojson& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open output file " + path);
  out << j.dump(2) << "\n";
  if (!out) throw ArgumentError("failed writing " + path);
}

/// CSV export with the fixed header `t, norm, mean_x, mean_p, dx, dp`.
inline void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open output file " + path);
  out << "t, norm, mean_x, mean_p, dx, dp\n";
  char line[256];
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const Observables& o = traj.observables[i];
    std::snprintf(line, sizeof line, "%.17g, %.17g, %.17g, %.17g, %.17g, %.17g\n",
                  traj.states[i].t, o.norm, o.mean_x, o.mean_p, o.dx, o.dp);
    out << line;
  }
  if (!out) throw ArgumentError("failed writing " + path);
}

/// Little-endian complex64 (float32 re/im) amplitude dump, row-major
/// [state][grid point].
inline void write_trajectory_amps(const Trajectory& traj, const std::string& path) {
  static_assert(std::endian::native == std::endian::little,
                "amplitude dump assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open output file " + path);
  for (const auto& s : traj.states) {
    std::vector<float> row(2 * s.amps.size());
    for (std::size_t j = 0; j < s.amps.size(); ++j) {
      row[2 * j] = float(s.amps[j].real());
      row[2 * j + 1] = float(s.amps[j].imag());
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              std::streamsize(row.size() * sizeof(float)));
  }
  if (!out) throw ArgumentError("failed writing " + path);
}

}  // namespace qxform

// Copyright 2026 The deltaline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "deltaline/analytic.hpp"
#include "deltaline/json_io.hpp"
#include "deltaline/waveguide.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <thread>

namespace deltaline {

inline constexpr const char* kCodeVersion = "0.1.0";

enum class Method { kNumeric, kAnalytic, kBoth };

enum class Observable {
  kEmission,      ///< |I_g| in nA (emitted-wave amplitude)
  kTotal,         ///< |I_t| in nA (probe + emitted wave at x > 0)
  kTransmission,  ///< power transmission |t|^2
  kPopulations,   ///< rho11, rho22, rho33
  kCoherence,     ///< Re/Im of rho_21
  kAlpha,         ///< interference weight alpha (resonant, probe on)
  kTheta,         ///< loop phase Theta
};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::kNumeric: return "numeric";
    case Method::kAnalytic: return "analytic";
    case Method::kBoth: return "both";
  }
  return "?";
}

inline const char* observable_name(Observable o) {
  switch (o) {
    case Observable::kEmission: return "ig_na";
    case Observable::kTotal: return "it_na";
    case Observable::kTransmission: return "t2";
    case Observable::kPopulations: return "populations";
    case Observable::kCoherence: return "rho21";
    case Observable::kAlpha: return "alpha";
    case Observable::kTheta: return "theta";
  }
  return "?";
}

struct SweepAxis {
  std::string path;  ///< parameter path, e.g. "drives.delta_mhz"
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  std::string label; ///< CSV column name; defaults to path with '.' -> '_'

  double value_at(std::size_t i) const {
    if (count <= 1) return min;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
};

struct SweepSpec {
  Config base;
  std::vector<SweepAxis> axes;             // 1 or 2
  std::vector<Observable> observables;
  Method method = Method::kNumeric;
};

/// Grid-evaluation result. Rows are ordered row-major in the axis indices
/// (first axis outermost) independently of how workers were scheduled, so
/// two runs of the same spec produce bit-identical records.
struct SweepResult {
  std::vector<std::string> axis_labels;
  std::vector<std::vector<double>> axis_values;   // per axis, grid coordinates
  std::vector<std::string> columns;               // data columns (after the axes)
  std::vector<std::vector<double>> rows;          // [points][columns]
  std::vector<std::string> errors;                // per point, empty when clean
  std::vector<double> method_disagreement;        // per point; NaN when not applicable
  Json meta;

  std::size_t points() const { return rows.size(); }

  std::vector<std::size_t> axis_indices(std::size_t point) const {
    std::vector<std::size_t> idx(axis_values.size(), 0);
    std::size_t rem = point;
    for (std::size_t a = axis_values.size(); a-- > 0;) {
      idx[a] = rem % axis_values[a].size();
      rem /= axis_values[a].size();
    }
    return idx;
  }

  /// Column position by name; throws if absent.
  std::size_t column_index(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == name) return c;
    throw DomainError("no column named " + name);
  }
};

namespace detail {

/// Applies one sweepable parameter. Besides the raw configuration fields a
/// few derived paths are supported: drives.delta_mhz (spectral detuning,
/// sets detuning_32 = -value), drives.rabi_strong_mag_mhz (synchronous
/// |Omega_31| = |Omega_32|), atom.pure_dephasing_mhz (sets gamma_coh_12 =
/// value + gamma_pop_21/2).
inline void apply_parameter(Config& cfg, const std::string& path, double value) {
  auto set_mag = [](RabiField& rabi, double mag) { rabi.mag = mag; };
  auto set_phase = [](RabiField& rabi, double phase) { rabi.phase = phase; };
  if (path == "atom.gamma_pop_31") cfg.atom.gamma_pop_31 = value;
  else if (path == "atom.gamma_pop_32") cfg.atom.gamma_pop_32 = value;
  else if (path == "atom.gamma_pop_21") cfg.atom.gamma_pop_21 = value;
  else if (path == "atom.gamma_coh_12") cfg.atom.gamma_coh_12 = value;
  else if (path == "atom.gamma_coh_13") cfg.atom.gamma_coh_13 = value;
  else if (path == "atom.gamma_coh_23") cfg.atom.gamma_coh_23 = value;
  else if (path == "atom.omega_21") cfg.atom.omega_21 = value;
  else if (path == "atom.omega_32") cfg.atom.omega_32 = value;
  else if (path == "atom.line_impedance") cfg.atom.line_impedance = value;
  else if (path == "atom.pure_dephasing_mhz")
    cfg.atom.gamma_coh_12 = value + 0.5 * cfg.atom.gamma_pop_21;
  else if (path == "drives.rabi_31.mag_mhz") set_mag(cfg.drives.rabi_31, value);
  else if (path == "drives.rabi_31.phase_rad") set_phase(cfg.drives.rabi_31, value);
  else if (path == "drives.rabi_32.mag_mhz") set_mag(cfg.drives.rabi_32, value);
  else if (path == "drives.rabi_32.phase_rad") set_phase(cfg.drives.rabi_32, value);
  else if (path == "drives.rabi_21.mag_mhz") set_mag(cfg.drives.rabi_21, value);
  else if (path == "drives.rabi_21.phase_rad") set_phase(cfg.drives.rabi_21, value);
  else if (path == "drives.detuning_31_mhz") cfg.drives.detuning_31 = value;
  else if (path == "drives.detuning_32_mhz") cfg.drives.detuning_32 = value;
  else if (path == "drives.delta_mhz") cfg.drives.detuning_32 = -value;
  else if (path == "drives.rabi_strong_mag_mhz") {
    set_mag(cfg.drives.rabi_31, value);
    set_mag(cfg.drives.rabi_32, value);
  } else {
    throw ConfigError(path, "unknown parameter path");
  }
}

inline bool known_parameter_path(const std::string& path) {
  Config probe; // throwaway
  probe.atom = reference_atom();
  try {
    apply_parameter(probe, path, 1.0);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

/// Per-point evaluation context; the numeric steady state is solved at most
/// once and shared across observables.
class PointContext {
 public:
  PointContext(const AtomParams& atom, const DriveConfig& drives)
      : atom_(atom), drives_(drives) {}

  const AtomParams& atom() const { return atom_; }
  const DriveConfig& drives() const { return drives_; }

  const DensityMatrix& numeric_state() {
    if (!state_ && error_.empty()) {
      const ValidationReport rep = validate(atom_, drives_);
      if (!rep.ok()) {
        error_ = rep.violations.front();
      } else {
        try {
          state_ = solve_steady(build_liouvillian(atom_, drives_));
        } catch (const std::exception& e) {
          error_ = e.what();
        }
      }
    }
    if (!error_.empty()) throw DomainError(error_);
    return *state_;
  }

  Complex numeric_rho21() { return numeric_state()(1, 0); }

 private:
  AtomParams atom_;
  DriveConfig drives_;
  std::optional<DensityMatrix> state_;
  std::string error_;
};

using ColumnFn = std::function<double(PointContext&)>;

struct ColumnPlan {
  std::vector<std::string> names;
  std::vector<ColumnFn> fns;
  // pairs of column indices compared for the method-disagreement diagnostic
  std::vector<std::pair<std::size_t, std::size_t>> compare;
};

inline double numeric_emission_na(PointContext& c) {
  return std::abs(emission_amplitude(c.atom(), c.numeric_rho21())) * 1e9;
}

inline double analytic_emission_na(PointContext& c) {
  // lineshape identity fed with the numeric probe-off populations
  const DensityMatrix& rho = c.numeric_state();
  const Complex r21 = coherence_general(c.atom(), c.drives(), rho(0, 0).real(),
                                        rho(1, 1).real(), rho(2, 2).real());
  return std::abs(emission_amplitude(c.atom(), r21)) * 1e9;
}

inline double numeric_total_na(PointContext& c) {
  // |i_probe + i_generated|, well defined even with the probe off (where it
  // reduces to the emitted amplitude)
  const Complex sum = c.drives().rabi_21.value() / c.atom().gamma_pop_21 +
                      Complex{0.0, 1.0} * c.numeric_rho21();
  return j_scale(c.atom()) * std::abs(sum) * 1e9;
}

inline double analytic_total_na(PointContext& c) {
  const InterferenceFactors f = interference_intensity(c.atom(), c.drives());
  return j_scale(c.atom()) * c.drives().rabi_21.mag / c.atom().gamma_pop_21 *
         f.bracket * 1e9;
}

inline double numeric_t2(PointContext& c) {
  const Complex t = total_field(c.atom(), c.drives(), c.numeric_rho21()).t;
  return std::norm(t);
}

inline double analytic_t2(PointContext& c) {
  const DriveConfig& d = c.drives();
  if (!d.probe_on()) throw DomainError("transmission undefined for a zero probe");
  if (!d.rabi_31.on() && !d.rabi_32.on()) {
    if (d.detuning_31 != 0.0)
      throw DomainError("undriven analytic transmission uses the spectral detuning "
                        "(detuning_31 must be 0)");
    return std::norm(two_level_probe_transmission(c.atom(), d.delta()));
  }
  const ProbeCorrection pc = probe_coherence_correction(c.atom(), d);
  const Complex t = 1.0 + Complex{0.0, 1.0} * c.atom().gamma_pop_21 * pc.rho21_prime /
                              d.rabi_21.value();
  return std::norm(t);
}

inline ColumnPlan make_plan(const std::vector<Observable>& observables, Method method) {
  ColumnPlan plan;
  const bool numeric = method != Method::kAnalytic;
  const bool analytic = method != Method::kNumeric;

  auto add = [&plan](const std::string& name, ColumnFn fn) {
    plan.names.push_back(name);
    plan.fns.push_back(std::move(fn));
    return plan.names.size() - 1;
  };
  auto add_dual = [&](const std::string& base, ColumnFn num_fn, ColumnFn ana_fn) {
    if (numeric && analytic) {
      const std::size_t n = add(base + "_numeric", std::move(num_fn));
      const std::size_t a = add(base + "_analytic", std::move(ana_fn));
      plan.compare.emplace_back(n, a);
    } else if (numeric) {
      add(base, std::move(num_fn));
    } else {
      add(base, std::move(ana_fn));
    }
  };

  for (Observable obs : observables) {
    switch (obs) {
      case Observable::kEmission:
        add_dual("ig_na", numeric_emission_na, analytic_emission_na);
        break;
      case Observable::kTotal:
        add_dual("it_na", numeric_total_na, analytic_total_na);
        break;
      case Observable::kTransmission:
        add_dual("t2", numeric_t2, analytic_t2);
        break;
      case Observable::kPopulations: {
        auto num = [](int i) {
          return ColumnFn([i](PointContext& c) { return c.numeric_state()(i, i).real(); });
        };
        auto ana = [](int i) {
          return ColumnFn([i](PointContext& c) {
            const ResonantSummary s = resonant_summary(c.atom(), c.drives());
            return i == 0 ? s.rho11 : (i == 1 ? s.rho22 : s.rho33);
          });
        };
        add_dual("rho11", num(0), ana(0));
        add_dual("rho22", num(1), ana(1));
        add_dual("rho33", num(2), ana(2));
        break;
      }
      case Observable::kCoherence: {
        auto num = [](bool re) {
          return ColumnFn([re](PointContext& c) {
            const Complex v = c.numeric_rho21();
            return re ? v.real() : v.imag();
          });
        };
        auto ana = [](bool re) {
          return ColumnFn([re](PointContext& c) {
            const Complex v =
                c.drives().probe_on()
                    ? probe_coherence_correction(c.atom(), c.drives()).rho21_prime
                    : coherence_general(c.atom(), c.drives());
            return re ? v.real() : v.imag();
          });
        };
        add_dual("rho21_re", num(true), ana(true));
        add_dual("rho21_im", num(false), ana(false));
        break;
      }
      case Observable::kAlpha:
        add("alpha", [](PointContext& c) {
          return interference_intensity(c.atom(), c.drives()).alpha;
        });
        break;
      case Observable::kTheta:
        add("theta_rad", [](PointContext& c) { return c.drives().loop_phase(); });
        break;
    }
  }
  return plan;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void run_indexed(std::size_t n, unsigned threads,
                        const std::function<void(std::size_t)>& work) {
  unsigned t = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (t == 0) t = 1;
  t = static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(n, 1)));
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) break;
      work(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(t - 1);
  for (unsigned k = 0; k + 1 < t; ++k) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
}

} // namespace detail

inline void validate_spec(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2)
    throw ConfigError("axes", "a sweep uses 1 or 2 axes");
  for (const SweepAxis& ax : spec.axes) {
    if (!detail::known_parameter_path(ax.path))
      throw ConfigError(ax.path, "unknown parameter path");
    if (ax.count < 1 || ax.count > 1000000)
      throw ConfigError(ax.path, "axis point count must be in [1, 1e6]");
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max))
      throw ConfigError(ax.path, "axis bounds must be finite");
  }
  if (spec.observables.empty())
    throw ConfigError("observables", "at least one observable is required");
  const ValidationReport rep = validate(spec.base.atom, spec.base.drives);
  if (!rep.ok()) throw ConfigError("base", rep.violations.front());
}

/// Evaluates the grid point-by-point on a bounded worker pool. Per-point
/// failures (solver or domain errors) are recorded inline and leave NaN in
/// the affected columns; they do not abort the sweep.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0) {
  validate_spec(spec);

  SweepResult res;
  std::size_t n = 1;
  for (const SweepAxis& ax : spec.axes) {
    res.axis_labels.push_back(ax.label.empty() ? [&] {
      std::string l = ax.path;
      for (char& ch : l)
        if (ch == '.') ch = '_';
      return l;
    }() : ax.label);
    std::vector<double> vals(ax.count);
    for (std::size_t i = 0; i < ax.count; ++i) vals[i] = ax.value_at(i);
    res.axis_values.push_back(std::move(vals));
    n *= ax.count;
  }

  detail::ColumnPlan plan = detail::make_plan(spec.observables, spec.method);
  res.columns = plan.names;
  res.rows.assign(n, std::vector<double>(plan.names.size(),
                                         std::numeric_limits<double>::quiet_NaN()));
  res.errors.assign(n, "");
  res.method_disagreement.assign(n, std::numeric_limits<double>::quiet_NaN());

  detail::run_indexed(n, threads, [&](std::size_t point) {
    Config cfg = spec.base;
    const auto idx = res.axis_indices(point);
    for (std::size_t a = 0; a < spec.axes.size(); ++a)
      detail::apply_parameter(cfg, spec.axes[a].path, res.axis_values[a][idx[a]]);

    detail::PointContext ctx(cfg.atom, cfg.drives);
    std::string& err = res.errors[point];
    for (std::size_t c = 0; c < plan.fns.size(); ++c) {
      try {
        res.rows[point][c] = plan.fns[c](ctx);
      } catch (const std::exception& e) {
        const std::string msg = plan.names[c] + ": " + e.what();
        if (err.find(e.what()) == std::string::npos)
          err += (err.empty() ? "" : "; ") + msg;
      }
    }
    if (!plan.compare.empty()) {
      double worst = 0.0;
      bool any = false;
      for (const auto& [ni, ai] : plan.compare) {
        const double nv = res.rows[point][ni], av = res.rows[point][ai];
        if (std::isnan(nv) || std::isnan(av)) continue;
        const double scale = std::max(std::abs(nv), std::abs(av));
        worst = std::max(worst, scale > 0.0 ? std::abs(nv - av) / scale : 0.0);
        any = true;
      }
      if (any) res.method_disagreement[point] = worst;
    }
  });

  std::size_t failed = 0, partial = 0;
  double worst_disagreement = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!res.errors[i].empty()) {
      bool any_value = false;
      for (double v : res.rows[i]) any_value = any_value || !std::isnan(v);
      ++(any_value ? partial : failed);
    }
    if (!std::isnan(res.method_disagreement[i]))
      worst_disagreement = std::max(worst_disagreement, res.method_disagreement[i]);
  }

  Json axes_json = Json::array();
  for (std::size_t a = 0; a < spec.axes.size(); ++a)
    axes_json.push_back({{"path", spec.axes[a].path},
                         {"min", spec.axes[a].min},
                         {"max", spec.axes[a].max},
                         {"count", spec.axes[a].count},
                         {"label", res.axis_labels[a]}});
  Json obs_json = Json::array();
  for (Observable o : spec.observables) obs_json.push_back(observable_name(o));

  Json fingerprint = {{"config", config_to_json(spec.base)},
                      {"axes", axes_json},
                      {"observables", obs_json},
                      {"method", method_name(spec.method)}};
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(detail::fnv1a(fingerprint.dump())));

  res.meta = {{"config", config_to_json(spec.base)},
              {"axes", axes_json},
              {"observables", obs_json},
              {"method", method_name(spec.method)},
              {"columns", res.columns},
              {"points", n},
              {"failed_points", failed},
              {"points_with_partial_errors", partial},
              {"method_disagreement_max", worst_disagreement},
              {"config_hash", hash},
              {"code_version", kCodeVersion},
              {"created_utc", detail::utc_timestamp()}};
  return res;
}

/// CSV serialization: one header row (axis labels, then data columns), '.'
/// decimal separator, ',' delimiter, '\n' line endings, full double
/// precision (17 significant digits, exact round-trip). Failed points carry
/// "nan" cells; their error messages live in the JSON sidecar.
inline void write_csv(const SweepResult& res, std::ostream& out) {
  for (std::size_t a = 0; a < res.axis_labels.size(); ++a)
    out << (a ? "," : "") << res.axis_labels[a];
  for (const std::string& c : res.columns) out << ',' << c;
  out << '\n';

  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (std::size_t i = 0; i < res.points(); ++i) {
    const auto idx = res.axis_indices(i);
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (a) out << ',';
      put(res.axis_values[a][idx[a]]);
    }
    for (double v : res.rows[i]) {
      out << ',';
      put(v);
    }
    out << '\n';
  }
}

/// JSON sidecar: full configuration, grid description, run metadata and any
/// per-point errors.
inline void write_sidecar(const SweepResult& res, std::ostream& out) {
  Json side = res.meta;
  Json errs = Json::array();
  for (std::size_t i = 0; i < res.errors.size(); ++i)
    if (!res.errors[i].empty()) errs.push_back({{"point", i}, {"error", res.errors[i]}});
  side["point_errors"] = std::move(errs);
  out << side.dump(2) << '\n';
}

/// Parses a sweep specification document:
///   { "base": {config}, "axes": [{path, min, max, count, label?}],
///     "observables": [names], "method": "numeric"|"analytic"|"both" }
inline SweepSpec parse_sweep_spec(const Json& j, const std::string& path = "") {
  detail::check_object(j, path);
  detail::reject_unknown_keys(j, path, {"base", "axes", "observables", "method"});
  if (!j.contains("base")) throw ConfigError(path + "/base", "missing required key");
  if (!j.contains("axes")) throw ConfigError(path + "/axes", "missing required key");
  if (!j.contains("observables"))
    throw ConfigError(path + "/observables", "missing required key");

  SweepSpec spec;
  spec.base = parse_config(j.at("base"), path + "/base");

  const Json& axes = j.at("axes");
  if (!axes.is_array()) throw ConfigError(path + "/axes", "expected an array");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string ap = path + "/axes/" + std::to_string(i);
    const Json& a = axes.at(i);
    detail::check_object(a, ap);
    detail::reject_unknown_keys(a, ap, {"path", "min", "max", "count", "label"});
    SweepAxis ax;
    if (!a.contains("path") || !a.at("path").is_string())
      throw ConfigError(ap + "/path", "missing or non-string parameter path");
    ax.path = a.at("path").get<std::string>();
    ax.min = detail::get_number(a, ap, "min");
    ax.max = detail::get_number(a, ap, "max");
    const double count = detail::get_number(a, ap, "count");
    if (count < 1.0 || count > 1e6 || count != std::floor(count))
      throw ConfigError(ap + "/count", "count must be an integer in [1, 1e6]");
    ax.count = static_cast<std::size_t>(count);
    if (a.contains("label")) {
      if (!a.at("label").is_string()) throw ConfigError(ap + "/label", "expected a string");
      ax.label = a.at("label").get<std::string>();
    }
    spec.axes.push_back(std::move(ax));
  }

  const Json& obs = j.at("observables");
  if (!obs.is_array()) throw ConfigError(path + "/observables", "expected an array");
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!obs.at(i).is_string())
      throw ConfigError(path + "/observables/" + std::to_string(i), "expected a string");
    const std::string name = obs.at(i).get<std::string>();
    bool found = false;
    for (Observable o : {Observable::kEmission, Observable::kTotal,
                         Observable::kTransmission, Observable::kPopulations,
                         Observable::kCoherence, Observable::kAlpha, Observable::kTheta}) {
      if (name == observable_name(o)) {
        spec.observables.push_back(o);
        found = true;
        break;
      }
    }
    if (!found)
      throw ConfigError(path + "/observables/" + std::to_string(i),
                        "unknown observable '" + name + "'");
  }

  if (j.contains("method")) {
    const Json& m = j.at("method");
    if (!m.is_string()) throw ConfigError(path + "/method", "expected a string");
    const std::string name = m.get<std::string>();
    if (name == "numeric") spec.method = Method::kNumeric;
    else if (name == "analytic") spec.method = Method::kAnalytic;
    else if (name == "both") spec.method = Method::kBoth;
    else throw ConfigError(path + "/method", "unknown method '" + name + "'");
  }

  validate_spec(spec);
  return spec;
}

} // namespace deltaline

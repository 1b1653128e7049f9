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

#include "deltaline/sweep.hpp"

#include <sstream>

namespace deltaline {

/// Canonical datasets of the reference device study: the emission spectrum
/// and its drive-strength saturation (3a/3b), the probe-controlled
/// switch-off (4a/4b), and the transmission studies (5a/5b plus the
/// drive-modulated switch inset).
enum class FigureId { k3a, k3b, k4a, k4b, k5a, k5b, k5bInset };

inline const char* figure_name(FigureId id) {
  switch (id) {
    case FigureId::k3a: return "3a";
    case FigureId::k3b: return "3b";
    case FigureId::k4a: return "4a";
    case FigureId::k4b: return "4b";
    case FigureId::k5a: return "5a";
    case FigureId::k5b: return "5b";
    case FigureId::k5bInset: return "5b-inset";
  }
  return "?";
}

inline FigureId parse_figure_id(const std::string& s) {
  for (FigureId id : {FigureId::k3a, FigureId::k3b, FigureId::k4a, FigureId::k4b,
                      FigureId::k5a, FigureId::k5b, FigureId::k5bInset}) {
    if (s == figure_name(id)) return id;
  }
  throw ConfigError("figure id", "unknown figure '" + s +
                                     "' (valid: 3a, 3b, 4a, 4b, 5a, 5b, 5b-inset)");
}

namespace detail {

inline void rename_column(SweepResult& res, const std::string& from, const std::string& to) {
  res.columns[res.column_index(from)] = to;
}

/// Joins the data columns of b onto a (identical grids assumed).
inline SweepResult merge_results(SweepResult a, const SweepResult& b) {
  for (const std::string& c : b.columns) a.columns.push_back(c);
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    for (double v : b.rows[i]) a.rows[i].push_back(v);
  for (std::size_t i = 0; i < a.errors.size(); ++i) {
    if (!b.errors[i].empty())
      a.errors[i] += (a.errors[i].empty() ? "" : "; ") + b.errors[i];
  }
  Json runs = Json::array();
  runs.push_back(a.meta);
  runs.push_back(b.meta);
  a.meta = Json{{"runs", std::move(runs)}};
  return a;
}

} // namespace detail

// Default grid resolutions. The source material does not fix the plotted
// ranges; these are chosen to contain the full feature (peak, saturation,
// switching transition) and keep the distinguished points (Delta = 0,
// |Omega_21| = 1.80 MHz, Theta = pi/2) exactly on grid.
inline constexpr std::size_t kSpectrumPoints = 1001;   // Delta in [-100, 100] MHz
inline constexpr std::size_t kSaturationPoints = 601;  // Omega in [0, 300] MHz
inline constexpr std::size_t kProbeMapPoints = 101;    // per 4b axis
inline constexpr std::size_t kDephasingPoints = 251;   // dephasing in [0, 25] MHz
inline constexpr std::size_t kSwitchPoints = 701;      // Omega_32 in [0, 35] MHz

/// Produces the canonical dataset for one figure using the reference device
/// parameters. Driven-with-probe datasets use the printed-alpha probe
/// magnitude (alpha = 1, about 1.7991 MHz) with loop phase pi/2; the
/// undriven transmission curves use the rounded 1.78 MHz probe.
inline SweepResult figure(FigureId id, unsigned threads = 0) {
  const AtomParams atom = reference_atom();
  const DriveConfig strong = reference_drives();
  const double probe_alpha1 = probe_for_unit_alpha(atom, strong);
  const SweepAxis delta_axis{"drives.delta_mhz", -100.0, 100.0, kSpectrumPoints,
                             "delta_mhz"};

  switch (id) {
    case FigureId::k3a: {
      SweepSpec spec{{atom, strong}, {delta_axis}, {Observable::kEmission}, Method::kBoth};
      SweepResult res = run_sweep(spec, threads);
      res.meta["figure"] = figure_name(id);
      return res;
    }
    case FigureId::k3b: {
      SweepSpec spec{{atom, strong},
                     {SweepAxis{"drives.rabi_strong_mag_mhz", 0.0, 300.0,
                                kSaturationPoints, "omega_mhz"}},
                     {Observable::kEmission},
                     Method::kBoth};
      SweepResult res = run_sweep(spec, threads);
      res.meta["figure"] = figure_name(id);
      return res;
    }
    case FigureId::k4a: {
      SweepSpec no_probe{{atom, strong}, {delta_axis}, {Observable::kEmission},
                         Method::kNumeric};
      DriveConfig probed = strong;
      probed.rabi_21 = RabiField{probe_alpha1, std::numbers::pi / 2.0};
      SweepSpec with_probe{{atom, probed}, {delta_axis}, {Observable::kTotal},
                           Method::kNumeric};
      SweepResult a = run_sweep(no_probe, threads);
      detail::rename_column(a, "ig_na", "ig_na_noprobe");
      SweepResult b = run_sweep(with_probe, threads);
      detail::rename_column(b, "it_na", "it_na_probe");
      SweepResult res = detail::merge_results(std::move(a), b);
      res.meta["figure"] = figure_name(id);
      return res;
    }
    case FigureId::k4b: {
      DriveConfig probed = strong; // probe magnitude/phase swept below
      SweepSpec spec{{atom, probed},
                     {SweepAxis{"drives.rabi_21.mag_mhz", 0.0, 5.0, kProbeMapPoints,
                                "omega21_mhz"},
                      SweepAxis{"drives.rabi_21.phase_rad", 0.0, kTwoPi,
                                kProbeMapPoints, "theta_rad"}},
                     {Observable::kTotal},
                     Method::kNumeric};
      SweepResult res = run_sweep(spec, threads);
      res.meta["figure"] = figure_name(id);
      return res;
    }
    case FigureId::k5a: {
      DriveConfig undriven;
      undriven.rabi_21 = RabiField{1.78, 0.0};
      SweepSpec spec{{atom, undriven},
                     {SweepAxis{"atom.pure_dephasing_mhz", 0.0, 25.0,
                                kDephasingPoints, "dephasing_mhz"}},
                     {Observable::kTransmission},
                     Method::kBoth};
      SweepResult res = run_sweep(spec, threads);
      detail::rename_column(res, "t2_analytic", "t2_weakprobe");
      res.meta["figure"] = figure_name(id);
      return res;
    }
    case FigureId::k5b: {
      DriveConfig undriven;
      undriven.rabi_21 = RabiField{1.78, 0.0};
      SweepSpec off{{atom, undriven}, {delta_axis}, {Observable::kTransmission},
                    Method::kNumeric};
      DriveConfig probed = strong;
      probed.rabi_21 = RabiField{probe_alpha1, std::numbers::pi / 2.0};
      SweepSpec on{{atom, probed}, {delta_axis}, {Observable::kTransmission},
                   Method::kNumeric};
      SweepResult a = run_sweep(off, threads);
      detail::rename_column(a, "t2", "t2_undriven");
      SweepResult b = run_sweep(on, threads);
      detail::rename_column(b, "t2", "t2_driven");
      SweepResult res = detail::merge_results(std::move(a), b);
      res.meta["figure"] = figure_name(id);
      return res;
    }
    case FigureId::k5bInset: {
      DriveConfig probed = strong;
      probed.rabi_21 = RabiField{probe_alpha1, std::numbers::pi / 2.0};
      SweepSpec spec{{atom, probed},
                     {SweepAxis{"drives.rabi_32.mag_mhz", 0.0, 35.0, kSwitchPoints,
                                "omega32_mhz"}},
                     {Observable::kTransmission},
                     Method::kNumeric};
      SweepResult res = run_sweep(spec, threads);
      detail::rename_column(res, "t2", "t2_driven");
      res.meta["figure"] = figure_name(id);
      return res;
    }
  }
  throw DomainError("unreachable figure id");
}

/// One-paragraph summary statistics for a figure dataset (peak location and
/// value, extinction value, switching range), for console reporting.
inline std::string figure_summary(FigureId id, const SweepResult& res) {
  std::ostringstream out;
  out.precision(4);
  auto axis0 = [&](std::size_t point) {
    return res.axis_values[0][res.axis_indices(point)[0]];
  };
  auto col = [&](const char* name) { return res.column_index(name); };
  // NaN cells (failed points) never win the scans
  auto argmax = [&](std::size_t c) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < res.points(); ++i)
      if (std::isnan(res.rows[best][c]) ||
          (!std::isnan(res.rows[i][c]) && res.rows[i][c] > res.rows[best][c]))
        best = i;
    return best;
  };
  auto argmin = [&](std::size_t c) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < res.points(); ++i)
      if (std::isnan(res.rows[best][c]) ||
          (!std::isnan(res.rows[i][c]) && res.rows[i][c] < res.rows[best][c]))
        best = i;
    return best;
  };
  switch (id) {
    case FigureId::k3a: {
      const std::size_t i = argmax(col("ig_na_numeric"));
      out << "emission peak |I_g| = " << res.rows[i][col("ig_na_numeric")]
          << " nA at Delta = " << axis0(i) << " MHz";
      break;
    }
    case FigureId::k3b: {
      const std::size_t last = res.points() - 1;
      out << "|I_g| = " << res.rows[last][col("ig_na_numeric")]
          << " nA at Omega = " << axis0(last) << " MHz (saturation)";
      break;
    }
    case FigureId::k4a: {
      const std::size_t peak = argmax(col("ig_na_noprobe"));
      const std::size_t dip = argmin(col("it_na_probe"));
      out << "no-probe peak " << res.rows[peak][col("ig_na_noprobe")]
          << " nA at Delta = " << axis0(peak) << " MHz; probed minimum |I_t| = "
          << res.rows[dip][col("it_na_probe")] << " nA at Delta = " << axis0(dip)
          << " MHz";
      break;
    }
    case FigureId::k4b: {
      const std::size_t c = col("it_na");
      const std::size_t best = argmin(c);
      const auto idx = res.axis_indices(best);
      out << "switch-off optimum |I_t| = " << res.rows[best][c] << " nA at |Omega_21| = "
          << res.axis_values[0][idx[0]] << " MHz, Theta = " << res.axis_values[1][idx[1]]
          << " rad";
      break;
    }
    case FigureId::k5a: {
      out << "|t|^2 from " << res.rows[0][col("t2_numeric")] << " (no dephasing) to "
          << res.rows[res.points() - 1][col("t2_numeric")] << " (dephasing 25 MHz)";
      break;
    }
    case FigureId::k5b: {
      const std::size_t mid = res.points() / 2;
      out << "at Delta = " << axis0(mid) << " MHz: undriven |t|^2 = "
          << res.rows[mid][col("t2_undriven")] << ", driven |t|^2 = "
          << res.rows[mid][col("t2_driven")];
      break;
    }
    case FigureId::k5bInset: {
      const std::size_t c = col("t2_driven");
      out << "|t|^2 = " << res.rows[res.points() - 1][c] << " at Omega_32 = 35 MHz, "
          << res.rows[0][c] << " at Omega_32 = 0";
      break;
    }
  }
  return out.str();
}

} // namespace deltaline

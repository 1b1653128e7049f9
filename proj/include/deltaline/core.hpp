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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace deltaline {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Vector9c = Eigen::Matrix<Complex, 9, 1>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduced Planck constant, J*s (2018 CODATA exact-derived value).
inline constexpr double kHbar = 1.054571817e-34;

// All rates and Rabi frequencies in this library are *linear* frequencies in
// MHz (the value of X/2pi for an angular X); transition frequencies are in
// GHz; time is in microseconds. SI conversion happens only in waveguide.hpp.

struct DegenerateSteadyState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonPhysicalResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration file / spec file schema violation. `where` is a JSON
/// pointer-style path or a line reference into the offending document.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what) {}
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Relaxation/dephasing rates and transition frequencies of the three-level
/// cyclic (Delta-type) atom. Rates are linear MHz, transition frequencies
/// linear GHz, line impedance ohms.
struct AtomParams {
  double gamma_pop_31 = 0.0;   ///< population relaxation 3->1, MHz
  double gamma_pop_32 = 0.0;   ///< population relaxation 3->2, MHz
  double gamma_pop_21 = 0.0;   ///< population relaxation 2->1, MHz
  double gamma_coh_12 = 0.0;   ///< coherence decay of rho_12 (= rho_21), MHz
  double gamma_coh_13 = 0.0;   ///< coherence decay of rho_13 (= rho_31), MHz
  double gamma_coh_23 = 0.0;   ///< coherence decay of rho_23 (= rho_32), MHz
  double omega_21 = 0.0;       ///< transition frequency omega_21/2pi, GHz
  double omega_32 = 0.0;       ///< transition frequency omega_32/2pi, GHz
  double line_impedance = 0.0; ///< transmission line impedance Z, ohms

  friend bool operator==(const AtomParams&, const AtomParams&) = default;
};

/// One complex Rabi frequency Omega = mag * exp(i phase), stored in
/// magnitude/phase form (the canonical wire representation, so that
/// serialization round-trips bit-exactly and phase combinations like
/// Theta = pi/2 stay exact).
struct RabiField {
  double mag = 0.0;   ///< |Omega|/2pi, MHz
  double phase = 0.0; ///< radians

  Complex value() const { return std::polar(mag, phase); }
  bool on() const { return mag != 0.0; }

  friend bool operator==(const RabiField&, const RabiField&) = default;
};

/// Complex Rabi frequencies and detunings of the applied fields. The probe
/// detuning is not an independent quantity: the three fields satisfy the
/// closed-loop condition nu_21 = nu_31 - nu_32, so Delta_21 = Delta_31 -
/// Delta_32 always.
struct DriveConfig {
  RabiField rabi_31; ///< Omega_31, MHz
  RabiField rabi_32; ///< Omega_32, MHz
  RabiField rabi_21; ///< probe Omega_21, MHz; zero magnitude means probe off
  double detuning_31 = 0.0; ///< Delta_31 = nu_31 - omega_31, MHz
  double detuning_32 = 0.0; ///< Delta_32 = nu_32 - omega_32, MHz

  /// Probe detuning fixed by the loop condition.
  double detuning_21() const { return detuning_31 - detuning_32; }

  /// Spectral variable of the induced wave, Delta = -Delta_32 (meaningful
  /// when the 3-1 drive is resonant, detuning_31 = 0).
  double delta() const { return -detuning_32; }

  bool probe_on() const { return rabi_21.on(); }

  /// Gauge-invariant phase combination Theta = theta_21 + theta_32 - theta_31.
  double loop_phase() const {
    return rabi_21.phase + rabi_32.phase - rabi_31.phase;
  }

  friend bool operator==(const DriveConfig&, const DriveConfig&) = default;
};

/// 3x3 complex density matrix, basis |1>, |2>, |3>.
using DensityMatrix = Matrix3c;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = -1e-10;

/// Throws NonPhysicalResult unless rho is Hermitian (1e-12), unit trace
/// (1e-10) and positive semidefinite (eigenvalues >= -1e-10).
inline void check_density_matrix(const DensityMatrix& rho) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm < kHermiticityTol))
    throw NonPhysicalResult("density matrix not Hermitian, max |rho - rho^+| = " +
                            std::to_string(herm));
  const double tr_err = std::abs(rho.trace() - Complex{1.0, 0.0});
  if (!(tr_err < kTraceTol))
    throw NonPhysicalResult("density matrix trace deviates from 1 by " +
                            std::to_string(tr_err));
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(0.5 * (rho + rho.adjoint()));
  if (es.eigenvalues().minCoeff() < kPositivityTol)
    throw NonPhysicalResult("density matrix not positive semidefinite, min eigenvalue " +
                            std::to_string(es.eigenvalues().minCoeff()));
}

/// Pure dephasing of the 1-2 transition, gamma_12 - Gamma_21/2, MHz.
inline double pure_dephasing(const AtomParams& p) {
  return p.gamma_coh_12 - 0.5 * p.gamma_pop_21;
}

struct ValidationReport {
  std::vector<std::string> violations; ///< fatal invariant failures
  std::vector<std::string> warnings;   ///< non-fatal regime flags

  bool ok() const { return violations.empty(); }
};

/// Checks the physical invariants of a parameter set. Violations are fatal
/// (the configuration must be rejected); warnings flag regimes where the
/// resonant closed-form probe response is unreliable.
inline ValidationReport validate(const AtomParams& p, const DriveConfig& d) {
  ValidationReport rep;
  auto violation = [&rep](const std::string& msg) { rep.violations.push_back(msg); };

  const struct { const char* name; double value; } rates[] = {
      {"gamma_pop_31", p.gamma_pop_31}, {"gamma_pop_32", p.gamma_pop_32},
      {"gamma_pop_21", p.gamma_pop_21}, {"gamma_coh_12", p.gamma_coh_12},
      {"gamma_coh_13", p.gamma_coh_13}, {"gamma_coh_23", p.gamma_coh_23},
  };
  for (const auto& r : rates) {
    if (!std::isfinite(r.value) || r.value < 0.0)
      violation(std::string(r.name) + " must be a finite non-negative rate");
  }
  if (!std::isfinite(p.omega_21) || p.omega_21 <= 0.0)
    violation("omega_21 must be a positive transition frequency");
  if (!std::isfinite(p.omega_32) || p.omega_32 <= 0.0)
    violation("omega_32 must be a positive transition frequency");
  if (!std::isfinite(p.line_impedance) || p.line_impedance <= 0.0)
    violation("line_impedance must be positive");
  if (pure_dephasing(p) < 0.0)
    violation("negative pure dephasing: gamma_coh_12 < gamma_pop_21/2");

  for (double v : {d.rabi_31.mag, d.rabi_31.phase, d.rabi_32.mag, d.rabi_32.phase,
                   d.rabi_21.mag, d.rabi_21.phase, d.detuning_31, d.detuning_32}) {
    if (!std::isfinite(v)) {
      violation("drive configuration contains a non-finite value");
      break;
    }
  }
  for (const auto& [name, field] :
       {std::pair{"rabi_31", &d.rabi_31}, {"rabi_32", &d.rabi_32}, {"rabi_21", &d.rabi_21}}) {
    if (field->mag < 0.0)
      violation(std::string(name) + ".mag_mhz must be non-negative");
  }

  if (d.probe_on() && d.rabi_21.mag > p.gamma_pop_21 / 5.0)
    rep.warnings.push_back("probe not weak: |rabi_21| > gamma_pop_21/5, "
                           "first-order probe response formulas degrade");
  return rep;
}

/// Throwing wrapper around validate(); message lists every violation.
inline void require_valid(const AtomParams& p, const DriveConfig& d) {
  const ValidationReport rep = validate(p, d);
  if (rep.ok()) return;
  std::string msg = "invalid configuration:";
  for (const auto& v : rep.violations) msg += " " + v + ";";
  throw DomainError(msg);
}

/// Reference atom: the flux-qubit device operated at the cyclic-transition
/// working point. gamma_coh_13 and gamma_coh_23 follow the measured
/// ~Gamma_32/2; Gamma_31 is far below the other decay channels and defaults
/// to zero.
inline AtomParams reference_atom() {
  AtomParams p;
  p.gamma_pop_31 = 0.0;
  p.gamma_pop_32 = 35.0;
  p.gamma_pop_21 = 11.0;
  p.gamma_coh_12 = 18.0;
  p.gamma_coh_13 = 17.5;
  p.gamma_coh_23 = 17.5;
  p.omega_21 = 10.96;
  p.omega_32 = 24.15;
  p.line_impedance = 50.0;
  return p;
}

/// Reference strong drives: both control fields resonant at |Omega|/2pi = 35
/// MHz, probe off.
inline DriveConfig reference_drives() {
  DriveConfig d;
  d.rabi_31 = RabiField{35.0, 0.0};
  d.rabi_32 = RabiField{35.0, 0.0};
  return d;
}

} // namespace deltaline

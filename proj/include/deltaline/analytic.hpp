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

#include "deltaline/steady_state.hpp"

namespace deltaline {

// Closed-form steady-state expressions for the strongly driven cyclic
// three-level atom. The lineshape identity coherence_general() is exact for
// any rates once the exact populations are supplied. The resonant
// closed forms (resonant_summary, probe_coherence_correction,
// interference_intensity) hold in the strong-cascade limit gamma_13 =
// gamma_23 = Gamma_32/2 with Gamma_31, Gamma_21 << Gamma_32; in that limit
// (Gamma_31 = Gamma_21 = 0) they are exact. For equal drive magnitudes
// |Omega_31| = |Omega_32| the coherence rho_21 and population rho_33 are
// additionally independent of Gamma_21, so the emitted-current observables
// remain exact at any Gamma_21.

/// Normalizer A = (6 gamma_12 + Gamma_32)|Omega_32|^2
///               + Gamma_32 (|Omega_31|^2 + 2 gamma_12 Gamma_32), MHz^3.
inline double resonant_normalizer(const AtomParams& p, const DriveConfig& d) {
  const double o31 = d.rabi_31.mag, o32 = d.rabi_32.mag;
  return (6.0 * p.gamma_coh_12 + p.gamma_pop_32) * o32 * o32 +
         p.gamma_pop_32 * (o31 * o31 + 2.0 * p.gamma_coh_12 * p.gamma_pop_32);
}

/// Steady drive-induced coherence rho_21 at spectral detuning Delta =
/// -Delta_32 (3-1 drive resonant, probe off), evaluated from the supplied
/// populations:
///
///   rho_21 = Omega_31 Omega_32^* [lambda_23 (rho33 - rho11)
///                                  + gamma_13 (rho33 - rho22)]
///            / (|Omega_31|^2 gamma_13
///               + lambda_23 (|Omega_32|^2 + 4 gamma_13 lambda_21))
///
/// with lambda_21 = gamma_12 - i Delta, lambda_23 = gamma_23 - i Delta.
/// This is an identity of the stationary coherence sub-block: with exact
/// populations it reproduces the exact rho_21 for any rates.
inline Complex coherence_general(const AtomParams& p, const DriveConfig& d,
                                 double rho11, double rho22, double rho33) {
  if (d.detuning_31 != 0.0)
    throw DomainError("coherence_general requires a resonant 3-1 drive (detuning_31 = 0)");
  if (d.probe_on())
    throw DomainError("coherence_general is a probe-off expression");
  const double delta = d.delta();
  const Complex lam21{p.gamma_coh_12, -delta};
  const Complex lam23{p.gamma_coh_23, -delta};
  const double o31 = d.rabi_31.mag, o32 = d.rabi_32.mag;
  const Complex num = d.rabi_31.value() * std::conj(d.rabi_32.value()) *
                      (lam23 * (rho33 - rho11) + p.gamma_coh_13 * (rho33 - rho22));
  const Complex den = o31 * o31 * p.gamma_coh_13 +
                      lam23 * (o32 * o32 + 4.0 * p.gamma_coh_13 * lam21);
  return num / den;
}

/// Same lineshape identity with the populations taken from the numeric
/// steady state of the probe-off generator.
inline Complex coherence_general(const AtomParams& p, const DriveConfig& d) {
  if (d.detuning_31 != 0.0)
    throw DomainError("coherence_general requires a resonant 3-1 drive (detuning_31 = 0)");
  if (d.probe_on())
    throw DomainError("coherence_general is a probe-off expression");
  const DensityMatrix rho = solve_steady(build_liouvillian(p, d));
  return coherence_general(p, d, rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real());
}

/// Resonant-point closed forms: populations and coherence at Delta = 0.
struct ResonantSummary {
  double a_norm = 0.0; ///< normalizer A, MHz^3
  double rho11 = 0.0;
  double rho22 = 0.0;
  double rho33 = 0.0;
  Complex rho21{0.0, 0.0};
};

/// Closed-form resonant steady state (strong-cascade limit):
///   rho11 = (2 gamma_12 + Gamma_32)|Omega_32|^2 / A
///   rho22 = [2 gamma_12 |Omega_32|^2 + Gamma_32(|Omega_31|^2 + 2 gamma_12 Gamma_32)] / A
///   rho33 = 2 gamma_12 |Omega_32|^2 / A
///   rho21 = -Gamma_32 Omega_31 Omega_32^* / A
inline ResonantSummary resonant_summary(const AtomParams& p, const DriveConfig& d) {
  if (d.detuning_31 != 0.0 || d.detuning_32 != 0.0)
    throw DomainError("resonant_summary is defined at the resonant point only");
  if (d.probe_on())
    throw DomainError("resonant_summary is a probe-off expression");
  const double o31 = d.rabi_31.mag, o32 = d.rabi_32.mag;
  const double g12 = p.gamma_coh_12, G32 = p.gamma_pop_32;
  ResonantSummary s;
  s.a_norm = resonant_normalizer(p, d);
  s.rho11 = (2.0 * g12 + G32) * o32 * o32 / s.a_norm;
  s.rho22 = (2.0 * g12 * o32 * o32 + G32 * (o31 * o31 + 2.0 * g12 * G32)) / s.a_norm;
  s.rho33 = 2.0 * g12 * o32 * o32 / s.a_norm;
  s.rho21 = -G32 * d.rabi_31.value() * std::conj(d.rabi_32.value()) / s.a_norm;
  return s;
}

/// First-order probe response at the resonant point.
struct ProbeCorrection {
  Complex b{0.0, 0.0};           ///< linear response coefficient B
  Complex rho21_prime{0.0, 0.0}; ///< rho'_21 = -Gamma_32 Omega_31 Omega_32^*/A + Omega_21 B
};

/// Weak-probe correction to the resonant coherence:
///
///   B = i Gamma_32 [Gamma_32(|Omega_31|^2 - |Omega_32|^2)
///                   + 2 gamma_12 (Gamma_32^2 - |Omega_32|^2)]
///       / (A (|Omega_31|^2 + |Omega_32|^2 + 2 gamma_12 Gamma_32))
///
/// B vanishes identically at |Omega_31| = |Omega_32| = Gamma_32, the point
/// where the first-order response is free of the probe back-action term.
inline ProbeCorrection probe_coherence_correction(const AtomParams& p,
                                                  const DriveConfig& d) {
  if (d.detuning_31 != 0.0 || d.detuning_32 != 0.0)
    throw DomainError("probe_coherence_correction is defined at the resonant point only");
  const double o31 = d.rabi_31.mag, o32 = d.rabi_32.mag;
  const double g12 = p.gamma_coh_12, G32 = p.gamma_pop_32;
  const double a = resonant_normalizer(p, d);
  ProbeCorrection pc;
  pc.b = Complex{0.0, 1.0} * G32 *
         (G32 * (o31 * o31 - o32 * o32) + 2.0 * g12 * (G32 * G32 - o32 * o32)) /
         (a * (o31 * o31 + o32 * o32 + 2.0 * g12 * G32));
  pc.rho21_prime = -G32 * d.rabi_31.value() * std::conj(d.rabi_32.value()) / a +
                   d.rabi_21.value() * pc.b;
  return pc;
}

/// Interference of the probe with the drive-induced wave at the resonant
/// point: |I_t| = (J |Omega_21| / Gamma_21) * bracket with
/// bracket = sqrt(1 + alpha^2 - 2 alpha sin Theta).
struct InterferenceFactors {
  double alpha = 0.0;   ///< Gamma_21 Gamma_32 |Omega_31||Omega_32| / (A |Omega_21|)
  double theta = 0.0;   ///< loop phase Theta = theta_21 + theta_32 - theta_31
  double bracket = 0.0; ///< sqrt(1 + alpha^2 - 2 alpha sin Theta)
};

inline InterferenceFactors interference_intensity(const AtomParams& p,
                                                  const DriveConfig& d) {
  if (d.detuning_31 != 0.0 || d.detuning_32 != 0.0)
    throw DomainError("interference_intensity is defined at the resonant point only");
  if (!d.probe_on())
    throw DomainError("interference_intensity requires a nonzero probe");
  InterferenceFactors f;
  f.alpha = p.gamma_pop_21 * p.gamma_pop_32 * d.rabi_31.mag * d.rabi_32.mag /
            (resonant_normalizer(p, d) * d.rabi_21.mag);
  f.theta = d.loop_phase();
  f.bracket = std::sqrt(1.0 + f.alpha * f.alpha - 2.0 * f.alpha * std::sin(f.theta));
  return f;
}

/// Probe magnitude that balances the drive-induced wave (alpha = 1), MHz.
inline double probe_for_unit_alpha(const AtomParams& p, const DriveConfig& d) {
  return p.gamma_pop_21 * p.gamma_pop_32 * d.rabi_31.mag * d.rabi_32.mag /
         resonant_normalizer(p, d);
}

/// Weak-probe transmission of the bare 1-2 transition (drives off):
/// t(Delta) = 1 - (Gamma_21/2) / (gamma_12 - i Delta). Total reflection at
/// resonance requires vanishing pure dephasing, |t| -> 1 - Gamma_21/(2 gamma_12).
inline Complex two_level_probe_transmission(const AtomParams& p, double delta) {
  return 1.0 - 0.5 * p.gamma_pop_21 / Complex{p.gamma_coh_12, -delta};
}

/// Exact finite-probe transmission of the bare 1-2 transition from the
/// numeric steady state (saturation included).
inline Complex two_level_probe_transmission_numeric(const AtomParams& p,
                                                    Complex rabi_21, double delta) {
  if (rabi_21 == Complex{0.0, 0.0})
    throw DomainError("transmission undefined for a zero probe");
  DriveConfig d;
  d.rabi_21 = RabiField{std::abs(rabi_21), std::arg(rabi_21)};
  d.detuning_32 = -delta;
  const DensityMatrix rho = solve_steady(build_liouvillian(p, d));
  return 1.0 + Complex{0.0, 1.0} * p.gamma_pop_21 * rho(1, 0) / rabi_21;
}

} // namespace deltaline

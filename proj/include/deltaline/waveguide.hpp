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

#include "deltaline/core.hpp"

namespace deltaline {

// Transmission-line observables. The atom at x = 0 radiates symmetrically
// into both directions of the line; the co-propagating probe interferes with
// the emitted wave on the transmission side (x > 0) only, so the spatial
// solution is fully described by two directional complex amplitudes. The
// probe is taken to propagate toward +x; transmission is read at x > 0 and
// reflection at x < 0.

/// Current scale J = sqrt(hbar omega_21 Gamma_21 / Z) in amperes; omega_21
/// (GHz) and Gamma_21 (MHz) are converted to angular SI internally.
inline double j_scale(const AtomParams& p) {
  const double omega21_si = kTwoPi * p.omega_21 * 1e9;  // rad/s
  const double gamma21_si = kTwoPi * p.gamma_pop_21 * 1e6;
  return std::sqrt(kHbar * omega21_si * gamma21_si / p.line_impedance);
}

/// Complex amplitude of the atom-emitted wave, I_g = i J rho_21, amperes.
/// At the resonant point with the closed-form coherence this gives
/// |I_g| = J Gamma_32 |Omega_31||Omega_32| / A, saturating at
/// J Gamma_32 / (6 gamma_12 + 2 Gamma_32) for strong synchronous drives.
inline Complex emission_amplitude(const AtomParams& p, Complex rho21) {
  return Complex{0.0, 1.0} * j_scale(p) * rho21;
}

/// Directional current amplitudes and the probe transmission they define.
struct FieldAmplitudes {
  double j_scale = 0.0;                      ///< J, amperes
  Complex i_generated{0.0, 0.0};             ///< i J rho'_21, emitted both ways, A
  Complex i_probe{0.0, 0.0};                 ///< incident amplitude J Omega_21/Gamma_21, A
  Complex i_total_right{0.0, 0.0};           ///< I_t at x > 0 = i_probe + i_generated, A
  Complex i_total_left_reflected{0.0, 0.0};  ///< reflected amplitude at x < 0, A
  Complex t{0.0, 0.0};                       ///< transmission I_t / i_probe
};

/// Fills every directional amplitude from the steady probe-dressed coherence
/// rho'_21 (numeric steady state, or the first-order resonant form). The
/// transmission is computed in the dimensionless form t = 1 + i Gamma_21
/// rho'_21 / Omega_21, identical to i_total_right / i_probe.
///
/// Throws DomainError when the probe is off (t undefined).
inline FieldAmplitudes total_field(const AtomParams& p, const DriveConfig& d,
                                   Complex rho21_prime) {
  if (!d.probe_on())
    throw DomainError("total_field requires a nonzero probe (transmission undefined)");
  FieldAmplitudes f;
  f.j_scale = j_scale(p);
  f.i_generated = Complex{0.0, 1.0} * f.j_scale * rho21_prime;
  f.i_probe = f.j_scale * d.rabi_21.value() / p.gamma_pop_21;
  f.i_total_right = f.i_probe + f.i_generated;
  f.i_total_left_reflected = f.i_generated;
  f.t = 1.0 + Complex{0.0, 1.0} * p.gamma_pop_21 * rho21_prime / d.rabi_21.value();
  return f;
}

} // namespace deltaline

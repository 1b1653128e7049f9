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

/// Rotating-frame Hamiltonian divided by 2*pi*hbar, entries in MHz.
using Hamiltonian = Matrix3c;

/// Master-equation generator acting on the row-major vectorized density
/// matrix (rho11, rho12, rho13, rho21, rho22, rho23, rho31, rho32, rho33).
/// Entries are angular rates in rad/us: the commutator and the dissipator
/// both carry the 2*pi that converts MHz inputs, so exp(M t) with t in
/// microseconds is the physical propagator.
using Liouvillian = Eigen::Matrix<Complex, 9, 9>;

/// Row-major vectorization index of rho_{ij} (i, j zero-based).
inline constexpr int vec_index(int i, int j) { return 3 * i + j; }

inline Vector9c vectorize(const Matrix3c& rho) {
  Vector9c v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v(vec_index(i, j)) = rho(i, j);
  return v;
}

inline Matrix3c unvectorize(const Vector9c& v) {
  Matrix3c rho;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rho(i, j) = v(vec_index(i, j));
  return rho;
}

/// Static Hamiltonian in the frame co-rotating with all three fields (the
/// closed-loop condition nu_21 = nu_31 - nu_32 makes the frame
/// time-independent):
///
///   H = -Delta_21 sigma_22 - Delta_31 sigma_33
///       - (1/2)(Omega_31 sigma_31 + Omega_32 sigma_32 + Omega_21 sigma_21 + H.c.)
///
/// with Delta_21 = Delta_31 - Delta_32. With the 3-1 drive resonant and the
/// probe off this reduces to H = Delta_32 sigma_22 - (1/2)(Omega_31 sigma_31
/// + Omega_32 sigma_32 + H.c.).
inline Hamiltonian build_hamiltonian(const DriveConfig& d) {
  Hamiltonian h = Hamiltonian::Zero();
  h(1, 1) = -d.detuning_21();
  h(2, 2) = -d.detuning_31;
  h(2, 0) = -0.5 * d.rabi_31.value(); // sigma_31 = |3><1|
  h(0, 2) = std::conj(h(2, 0));
  h(2, 1) = -0.5 * d.rabi_32.value();
  h(1, 2) = std::conj(h(2, 1));
  h(1, 0) = -0.5 * d.rabi_21.value();
  h(0, 1) = std::conj(h(1, 0));
  return h;
}

/// Dissipative part of the generator, in the measured-rate form: population
/// transfer at Gamma_31, Gamma_32, Gamma_21 and independent coherence decay
/// at gamma_ij (which already contain any pure dephasing). Action on rho:
///
///   d rho11 = Gamma_31 rho33 + Gamma_21 rho22
///   d rho22 = Gamma_32 rho33 - Gamma_21 rho22
///   d rho33 = -(Gamma_31 + Gamma_32) rho33
///   d rho_ij = -gamma_ij rho_ij   (i != j)
inline Matrix3c apply_dissipator(const AtomParams& p, const Matrix3c& rho) {
  Matrix3c d = Matrix3c::Zero();
  d(0, 0) = p.gamma_pop_31 * rho(2, 2) + p.gamma_pop_21 * rho(1, 1);
  d(1, 1) = p.gamma_pop_32 * rho(2, 2) - p.gamma_pop_21 * rho(1, 1);
  d(2, 2) = -(p.gamma_pop_31 + p.gamma_pop_32) * rho(2, 2);
  d(0, 1) = -p.gamma_coh_12 * rho(0, 1);
  d(1, 0) = -p.gamma_coh_12 * rho(1, 0);
  d(0, 2) = -p.gamma_coh_13 * rho(0, 2);
  d(2, 0) = -p.gamma_coh_13 * rho(2, 0);
  d(1, 2) = -p.gamma_coh_23 * rho(1, 2);
  d(2, 1) = -p.gamma_coh_23 * rho(2, 1);
  return kTwoPi * d;
}

/// Full right-hand side d rho/dt = -i 2pi [H, rho] + D[rho], rad/us.
inline Matrix3c apply_generator(const AtomParams& p, const Hamiltonian& h,
                                const Matrix3c& rho) {
  const Matrix3c comm = h * rho - rho * h;
  return Complex{0.0, -kTwoPi} * comm + apply_dissipator(p, rho);
}

/// Dissipator as a 9x9 superoperator (columns = action on basis matrices).
inline Liouvillian build_dissipator(const AtomParams& p) {
  Liouvillian m = Liouvillian::Zero();
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      Matrix3c basis = Matrix3c::Zero();
      basis(k, l) = 1.0;
      m.col(vec_index(k, l)) = vectorize(apply_dissipator(p, basis));
    }
  }
  return m;
}

/// Full generator as a 9x9 superoperator. Trace-preserving (the rows of
/// rho11, rho22, rho33 sum to zero in every column) and
/// Hermiticity-preserving by construction.
inline Liouvillian build_liouvillian(const AtomParams& p, const DriveConfig& d) {
  const Hamiltonian h = build_hamiltonian(d);
  Liouvillian m = Liouvillian::Zero();
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      Matrix3c basis = Matrix3c::Zero();
      basis(k, l) = 1.0;
      m.col(vec_index(k, l)) = vectorize(apply_generator(p, h, basis));
    }
  }
  return m;
}

} // namespace deltaline

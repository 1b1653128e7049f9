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

#include "deltaline/liouvillian.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace deltaline {

namespace detail {

/// Max row sum of absolute values (operator infinity norm).
inline double inf_norm(const Liouvillian& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Constrained steady-state system: the rho33 row is replaced by the trace
/// constraint, giving A v = e_{33} whose solution is the unit-trace kernel
/// vector of m.
inline Liouvillian trace_constrained(const Liouvillian& m) {
  Liouvillian a = m;
  a.row(vec_index(2, 2)).setZero();
  a(vec_index(2, 2), vec_index(0, 0)) = 1.0;
  a(vec_index(2, 2), vec_index(1, 1)) = 1.0;
  a(vec_index(2, 2), vec_index(2, 2)) = 1.0;
  return a;
}

} // namespace detail

inline constexpr double kSteadyResidualTol = 1e-10;

/// Stationary density matrix of the generator, from a dense pivoted linear
/// solve of the trace-constrained 9x9 system. Requires a one-dimensional
/// kernel; the residual ||M rho||_inf < 1e-10 ||M||_inf is checked before
/// returning, and the result must pass the density-matrix invariants.
///
/// Throws DegenerateSteadyState when the kernel is not one-dimensional and
/// NonPhysicalResult when the solution fails Hermiticity/trace/positivity.
inline DensityMatrix solve_steady(const Liouvillian& m) {
  const Liouvillian a = detail::trace_constrained(m);
  Eigen::FullPivLU<Liouvillian> lu(a);
  if (!lu.isInvertible())
    throw DegenerateSteadyState(
        "steady state not unique: trace-constrained generator is singular "
        "(kernel dimension > 1)");
  Vector9c rhs = Vector9c::Zero();
  rhs(vec_index(2, 2)) = 1.0;
  const Vector9c v = lu.solve(rhs);

  const double residual = (m * v).cwiseAbs().maxCoeff();
  if (!(residual < kSteadyResidualTol * detail::inf_norm(m)))
    throw DegenerateSteadyState("steady-state residual " + std::to_string(residual) +
                                " exceeds tolerance; generator is near-singular");

  const DensityMatrix rho = unvectorize(v);
  check_density_matrix(rho);
  return rho;
}

/// Largest admissible RK4 step for a given generator: 1/(50 max|M_ij|) with
/// M in rad/us, i.e. 1/(50 * 2pi * max rate in MHz).
inline double max_rk4_step(const Liouvillian& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  return scale > 0.0 ? 1.0 / (50.0 * scale) : std::numeric_limits<double>::infinity();
}

/// Fixed-step RK4 time evolution of the master equation, rho(t_final) from
/// rho0. Times in microseconds. Serves as the independent fixed-point oracle
/// for solve_steady.
///
/// Throws StepTooLarge if dt exceeds max_rk4_step(m), and NonPhysicalResult
/// if the trace drifts from 1 by more than 1e-8 during the integration.
inline DensityMatrix evolve(const Liouvillian& m, const DensityMatrix& rho0,
                            double t_final, double dt) {
  if (!(dt > 0.0)) throw StepTooLarge("dt must be positive");
  const double dt_max = max_rk4_step(m);
  if (dt > dt_max)
    throw StepTooLarge("dt = " + std::to_string(dt) + " us exceeds stability bound " +
                       std::to_string(dt_max) + " us");
  if (!(t_final >= 0.0)) throw DomainError("t_final must be non-negative");
  if (t_final == 0.0) return rho0;

  const auto steps = static_cast<long>(std::ceil(t_final / dt));
  const double h = t_final / static_cast<double>(steps);
  Vector9c v = vectorize(rho0);
  for (long s = 0; s < steps; ++s) {
    const Vector9c k1 = m * v;
    const Vector9c k2 = m * (v + 0.5 * h * k1);
    const Vector9c k3 = m * (v + 0.5 * h * k2);
    const Vector9c k4 = m * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tr_err =
        std::abs(v(vec_index(0, 0)) + v(vec_index(1, 1)) + v(vec_index(2, 2)) -
                 Complex{1.0, 0.0});
    if (!(tr_err < 1e-8))
      throw NonPhysicalResult("trace drifted by " + std::to_string(tr_err) +
                              " during time evolution");
  }
  return unvectorize(v);
}

struct ConvergenceReport {
  /// Smallest nonzero |Re(eigenvalue)| of the generator, rad/us. Sets the
  /// slowest relaxation toward the steady state.
  double spectral_gap = 0.0;
  /// ||M rho_ss||_inf of the returned steady state.
  double residual = 0.0;
  /// Residual threshold that was enforced, 1e-10 ||M||_inf.
  double residual_bound = 0.0;
};

/// Spectral-gap and residual diagnostics from the dense eigendecomposition
/// of the 9x9 generator. A small gap warns of slow mixing (long transients
/// in evolve, ill-conditioned solve).
inline ConvergenceReport steady_convergence_report(const Liouvillian& m) {
  ConvergenceReport rep;
  const DensityMatrix rho = solve_steady(m);
  rep.residual = (m * vectorize(rho)).cwiseAbs().maxCoeff();
  rep.residual_bound = kSteadyResidualTol * detail::inf_norm(m);

  Eigen::ComplexEigenSolver<Liouvillian> es(m, /*computeEigenvectors=*/false);
  const auto& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  const double zero_tol = std::max(1e-9 * scale, 1e-12);
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= zero_tol) continue; // kernel mode
    gap = std::min(gap, std::abs(ev(i).real()));
  }
  rep.spectral_gap = std::isfinite(gap) ? gap : 0.0;
  return rep;
}

} // namespace deltaline

// Copyright 2026 The qchan Authors
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

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "qchan/core/channel.hpp"
#include "qchan/sim/trajectory.hpp"

namespace qchan {

/// Single qubit with H(s) = E_z σz + E_x cos(ω s) σx and decay J = |0⟩⟨1| at
/// rate γ. E_z sets the units: time is measured in 1/E_z.
struct PeriodicLindbladParams {
  double e_z = 1.0;
  double ratio_ex = 0.5;     // E_x / E_z
  double ratio_omega = 1.0;  // ω / E_z
  double gamma = 0.01;       // in units of E_z

  double omega() const { return ratio_omega * e_z; }
  double period() const { return 2.0 * std::numbers::pi / omega(); }

  void validate() const {
    if (!(ratio_omega > 0.0)) throw ConfigError("PeriodicLindbladParams: ratio_omega must be positive");
    if (!(gamma >= 0.0)) throw ConfigError("PeriodicLindbladParams: gamma must be non-negative");
    if (!(e_z > 0.0)) throw ConfigError("PeriodicLindbladParams: e_z must be positive");
  }
};

/// At 1e-10 the unitary-limit purity drifts by ~3e-9 over 20 periods.
struct OdeTolerance {
  double abs = 1e-12;
  double rel = 1e-12;
};

namespace detail {

// ρ packed as (Re ρ00, Im ρ00, Re ρ01, Im ρ01, Re ρ10, Im ρ10, Re ρ11, Im ρ11).
using QubitState = std::array<double, 8>;
using PtmState = std::array<double, 16>;

inline QubitState pack(const CMatrix& m) {
  QubitState s{};
  for (int k = 0; k < 4; ++k) {
    s[2 * k] = m(k / 2, k % 2).real();
    s[2 * k + 1] = m(k / 2, k % 2).imag();
  }
  return s;
}

inline CMatrix unpack(const QubitState& s) {
  CMatrix m(2, 2);
  for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = cplx(s[2 * k], s[2 * k + 1]);
  return m;
}

inline CMatrix periodic_hamiltonian(const PeriodicLindbladParams& p, double s) {
  const double ex = p.ratio_ex * p.e_z * std::cos(p.omega() * s);
  CMatrix h(2, 2);
  h << p.e_z, ex, ex, -p.e_z;
  return h;
}

inline CMatrix periodic_rhs(const PeriodicLindbladParams& p, const CMatrix& rho, double s) {
  const CMatrix h = periodic_hamiltonian(p, s);
  CMatrix out = -kI * (h * rho - rho * h);
  // J = |0⟩⟨1|: JρJ† = ρ11 |0⟩⟨0|, J†J = |1⟩⟨1|.
  out(0, 0) += p.gamma * rho(1, 1);
  out(1, 1) -= p.gamma * rho(1, 1);
  out(0, 1) -= 0.5 * p.gamma * rho(0, 1);
  out(1, 0) -= 0.5 * p.gamma * rho(1, 0);
  return out;
}

template <typename State, typename System>
void integrate_to_times(System sys, State& x, const std::vector<double>& times, const OdeTolerance& tol,
                        std::vector<State>& out) {
  namespace ode = boost::numeric::odeint;
  using Stepper = ode::runge_kutta_dopri5<State>;
  out.clear();
  std::vector<double> grid;
  grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());
  try {
    ode::integrate_times(ode::make_dense_output(tol.abs, tol.rel, Stepper()), sys, x, grid.begin(), grid.end(),
                         1e-3, [&](const State& s, double t) {
                           if (t > 0.0) out.push_back(s);
                         },
                         ode::max_step_checker(5'000'000));
  } catch (const std::exception& e) {
    throw NumericalError(std::string("ODE integration failed: ") + e.what());
  }
  if (out.size() != times.size()) throw NumericalError("ODE integration did not reach all output times");
}

/// Generator of the periodic Lindbladian in the Pauli basis, split as
/// G(s) = static + cos(ω s) · drive.
struct PauliGenerator {
  RMatrix fixed;
  RMatrix drive;
};

inline PauliGenerator periodic_pauli_generator(const PeriodicLindbladParams& p) {
  PauliBasis basis(1);
  PeriodicLindbladParams no_drive = p;
  no_drive.ratio_ex = 0.0;
  // cos(ω·0) = 1 gives the full generator; the drive part is the difference.
  auto at = [&](const PeriodicLindbladParams& q) {
    return transfer_matrix_of([&](const CMatrix& x) { return periodic_rhs(q, x, 0.0); }, basis).matrix();
  };
  const RMatrix fixed = at(no_drive);
  return {fixed, at(p) - fixed};
}

}  // namespace detail

/// Stroboscopic states of the periodic Lindblad evolution at t = 1..n_periods
/// (units of 2π/ω), by adaptive Dormand–Prince integration of the density matrix.
inline Trajectory integrate_periodic_lindblad(const PeriodicLindbladParams& p, const DensityMatrix& rho0,
                                              int n_periods, const OdeTolerance& tol = {}) {
  p.validate();
  require_dims(rho0.dim() == 2, "integrate_periodic_lindblad: single-qubit state required");
  if (n_periods < 0) throw ConfigError("integrate_periodic_lindblad: n_periods must be non-negative");
  PauliBasis basis(1);
  Trajectory traj;
  traj.initial = coherence_from_density(rho0, basis);
  if (n_periods == 0) return traj;

  std::vector<double> times;
  for (int t = 1; t <= n_periods; ++t) times.push_back(t * p.period());
  auto sys = [&p](const detail::QubitState& x, detail::QubitState& dxdt, double s) {
    dxdt = detail::pack(detail::periodic_rhs(p, detail::unpack(x), s));
  };
  detail::QubitState x = detail::pack(rho0.matrix());
  std::vector<detail::QubitState> out;
  detail::integrate_to_times(sys, x, times, tol, out);
  for (int t = 1; t <= n_periods; ++t) {
    CMatrix m = detail::unpack(out[static_cast<std::size_t>(t - 1)]);
    traj.times.push_back(t);
    traj.states.push_back(coherence_from_density(DensityMatrix(m), basis));
  }
  return traj;
}

/// Transfer matrix of the one-period map, by integrating dΦ/ds = G(s)Φ for
/// the 4×4 Pauli-basis propagator over one period.
inline TransferMatrix one_period_superoperator(const PeriodicLindbladParams& p, const OdeTolerance& tol = {}) {
  p.validate();
  const auto gen = detail::periodic_pauli_generator(p);
  const double omega = p.omega();
  auto sys = [&](const detail::PtmState& x, detail::PtmState& dxdt, double s) {
    const Eigen::Map<const Eigen::Matrix4d> phi(x.data());
    Eigen::Map<Eigen::Matrix4d> out(dxdt.data());
    out.noalias() = (gen.fixed + std::cos(omega * s) * gen.drive) * phi;
  };
  detail::PtmState x{};
  Eigen::Map<Eigen::Matrix4d>(x.data()).setIdentity();
  std::vector<detail::PtmState> out;
  detail::integrate_to_times(sys, x, {p.period()}, tol, out);
  return TransferMatrix(RMatrix(Eigen::Map<const Eigen::Matrix4d>(out.front().data())));
}

}  // namespace qchan

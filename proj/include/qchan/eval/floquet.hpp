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

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qchan/core/channel.hpp"

namespace qchan {

enum class FloquetVerdict { exists, absent, inconclusive };

inline std::string to_string(FloquetVerdict v) {
  switch (v) {
    case FloquetVerdict::exists: return "exists";
    case FloquetVerdict::absent: return "absent";
    default: return "inconclusive";
  }
}

struct FloquetResult {
  FloquetVerdict verdict = FloquetVerdict::inconclusive;
  /// Floquet generator (ω/2π)·log T in the Pauli basis; set when a real
  /// principal logarithm exists, whether or not it passes the CCP test.
  RMatrix generator;
  /// Smallest eigenvalue of the Choi matrix of log T restricted to the
  /// complement of the maximally entangled vector.
  double min_ccp_eigenvalue = 0.0;
  /// Largest |Im| entry of the principal logarithm.
  double hermiticity_defect = 0.0;
  double eigenvector_condition = 0.0;
  /// max |exp((2π/ω)·generator) − T|.
  double reconstruction_error = 0.0;
  std::string note;

  bool exists() const { return verdict == FloquetVerdict::exists; }
};

struct FloquetTolerances {
  double negative_axis = 1e-10;
  double hermiticity = 1e-8;
  double ccp = 1e-8;
  double max_condition = 1e10;
};

/// Tests whether a single-qubit one-period map T admits a time-independent
/// Lindblad generator via its principal logarithm: the logarithm must exist
/// (no eigenvalue on the closed negative real axis), preserve Hermiticity
/// (real in the Pauli basis), and be conditionally completely positive.
inline FloquetResult floquet_check(const TransferMatrix& t, double omega, const FloquetTolerances& tol = {}) {
  require_dims(t.size() == 4, "floquet_check: single-qubit (4×4) transfer matrix required");
  if (!(omega > 0.0)) throw ConfigError("floquet_check: omega must be positive");
  const PauliBasis basis(1);
  FloquetResult res;
  const RMatrix& m = t.matrix();

  Eigen::EigenSolver<RMatrix> es(m);
  if (es.info() != Eigen::Success) {
    res.note = "eigendecomposition failed";
    return res;
  }
  const CVector lambda = es.eigenvalues();
  const CMatrix vecs = es.eigenvectors();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const cplx l = lambda[i];
    if (std::abs(l.imag()) <= tol.negative_axis * std::max(1.0, std::abs(l)) && l.real() <= tol.negative_axis) {
      res.verdict = FloquetVerdict::absent;
      res.note = "eigenvalue on the closed negative real axis: no Hermiticity-preserving principal logarithm";
      return res;
    }
  }
  const Eigen::JacobiSVD<CMatrix> svd(vecs);
  const auto sv = svd.singularValues();
  res.eigenvector_condition = sv[0] / sv[sv.size() - 1];
  if (!std::isfinite(res.eigenvector_condition) || res.eigenvector_condition > tol.max_condition) {
    res.note = "near-defective spectrum: logarithm not reliably computable";
    return res;
  }
  CVector log_lambda(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) log_lambda[i] = std::log(lambda[i]);
  const CMatrix log_c = vecs * log_lambda.asDiagonal() * vecs.inverse();
  res.hermiticity_defect = log_c.imag().cwiseAbs().maxCoeff();
  const RMatrix log_t = log_c.real();
  res.generator = log_t * (omega / (2.0 * std::numbers::pi));
  res.reconstruction_error = max_abs_diff(expm_real(log_t), m);
  if (res.hermiticity_defect > tol.hermiticity) {
    res.verdict = FloquetVerdict::absent;
    res.note = "principal logarithm is not Hermiticity preserving";
    return res;
  }

  // Orthonormal basis of the complement of (|00⟩ + |11⟩)/√2; restricting to
  // it avoids the spurious zero eigenvalue of the projected 4×4 matrix.
  CVector phi = CVector::Zero(4);
  phi[0] = phi[3] = 1.0 / std::sqrt(2.0);
  const CMatrix q = Eigen::HouseholderQR<CMatrix>(phi).householderQ();
  const CMatrix perp = q.rightCols(3);
  const CMatrix c = choi_from_transfer(log_t, basis);
  res.min_ccp_eigenvalue = hermitian_eigenvalues(perp.adjoint() * c * perp).minCoeff();
  if (res.min_ccp_eigenvalue >= -tol.ccp) {
    res.verdict = FloquetVerdict::exists;
    res.note = "principal logarithm is conditionally completely positive";
  } else {
    res.verdict = FloquetVerdict::absent;
    res.note = "principal logarithm violates conditional complete positivity";
  }
  return res;
}

}  // namespace qchan

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

#include <functional>
#include <vector>

#include "qchan/core/expm.hpp"
#include "qchan/core/pauli_basis.hpp"
#include "qchan/core/state.hpp"
#include "qchan/core/types.hpp"

namespace qchan {

/// Kraus operators K_0..K_{d_E-1} of a CPTP map, Σ K_k† K_k = 𝟙.
class KrausSet {
 public:
  static constexpr double kCompletenessTol = 1e-10;

  explicit KrausSet(std::vector<CMatrix> ops) : ops_(std::move(ops)) {
    require_dims(!ops_.empty(), "KrausSet: need at least one operator");
    const auto d = ops_.front().rows();
    for (const auto& k : ops_) require_dims(k.rows() == d && k.cols() == d, "KrausSet: operators must be d×d");
    if (completeness_error() > kCompletenessTol) throw DataError("KrausSet: completeness relation violated");
  }

  std::size_t sys_dim() const { return static_cast<std::size_t>(ops_.front().rows()); }
  std::size_t env_dim() const { return ops_.size(); }
  const std::vector<CMatrix>& operators() const { return ops_; }
  const CMatrix& operator[](std::size_t k) const { return ops_[k]; }

  double completeness_error() const {
    const auto d = ops_.front().rows();
    CMatrix s = CMatrix::Zero(d, d);
    for (const auto& k : ops_) s.noalias() += k.adjoint() * k;
    return max_abs_diff(s, CMatrix::Identity(d, d));
  }

  /// Σ_k K_k X K_k† for an arbitrary (not necessarily Hermitian) X.
  CMatrix apply(const CMatrix& x) const {
    require_dims(x.rows() == ops_.front().rows() && x.cols() == x.rows(), "KrausSet::apply: dimension mismatch");
    CMatrix out = CMatrix::Zero(x.rows(), x.cols());
    for (const auto& k : ops_) out.noalias() += k * x * k.adjoint();
    return out;
  }

  static KrausSet identity(std::size_t d) { return KrausSet({CMatrix::Identity(d, d)}); }

 private:
  std::vector<CMatrix> ops_;
};

inline DensityMatrix apply_channel(const KrausSet& k, const DensityMatrix& rho) {
  require_dims(k.sys_dim() == rho.dim(), "apply_channel: dimension mismatch");
  return DensityMatrix(k.apply(rho.matrix()));
}

/// Channel parametrized by a Stinespring unitary U = exp(A(θ)) on
/// system ⊗ environment, with A skew-Hermitian.
///
/// Parameter layout for n = d·d_E (n² reals in total):
///   θ[0..n)               A(j,j) = i θ_j
///   θ[n + 2p], θ[n + 2p+1] real and imaginary part of A(j,k), j < k, where p
///                         enumerates the strict upper triangle row by row;
///                         A(k,j) = -conj(A(j,k)).
class StinespringModel {
 public:
  StinespringModel(std::size_t sys_dim, std::size_t env_dim)
      : StinespringModel(sys_dim, env_dim, RVector::Zero(static_cast<Eigen::Index>(param_count(sys_dim, env_dim)))) {}

  StinespringModel(std::size_t sys_dim, std::size_t env_dim, RVector params)
      : d_(sys_dim), de_(env_dim), theta_(std::move(params)) {
    require_dims(d_ >= 1 && de_ >= 1, "StinespringModel: dimensions must be positive");
    require_dims(static_cast<std::size_t>(theta_.size()) == param_count(d_, de_),
                 "StinespringModel: parameter vector has wrong length");
  }

  static std::size_t param_count(std::size_t d, std::size_t de) { return (d * de) * (d * de); }

  std::size_t sys_dim() const { return d_; }
  std::size_t env_dim() const { return de_; }
  std::size_t total_dim() const { return d_ * de_; }
  const RVector& params() const { return theta_; }
  RVector& params() { return theta_; }

  CMatrix generator() const { return skew_hermitian_from_params(theta_, total_dim()); }
  CMatrix unitary() const { return expm(generator()); }

  static CMatrix skew_hermitian_from_params(const RVector& theta, std::size_t n) {
    require_dims(static_cast<std::size_t>(theta.size()) == n * n, "skew_hermitian_from_params: length mismatch");
    if (!theta.allFinite()) throw NumericalError("StinespringModel: non-finite parameters");
    CMatrix a(n, n);
    Eigen::Index p = static_cast<Eigen::Index>(n);
    for (std::size_t j = 0; j < n; ++j) {
      a(j, j) = cplx(0.0, theta[static_cast<Eigen::Index>(j)]);
      for (std::size_t k = j + 1; k < n; ++k, p += 2) {
        const cplx z(theta[p], theta[p + 1]);
        a(j, k) = z;
        a(k, j) = -std::conj(z);
      }
    }
    return a;
  }

  /// Gradient with respect to θ of a real function f(A), given
  /// G = ∂f/∂A in the sense df = Re Tr[G† dA].
  static RVector params_gradient_from_generator_gradient(const CMatrix& g) {
    const auto n = static_cast<std::size_t>(g.rows());
    RVector out(static_cast<Eigen::Index>(n * n));
    Eigen::Index p = static_cast<Eigen::Index>(n);
    for (std::size_t j = 0; j < n; ++j) {
      out[static_cast<Eigen::Index>(j)] = g(j, j).imag();
      for (std::size_t k = j + 1; k < n; ++k, p += 2) {
        out[p] = g(j, k).real() - g(k, j).real();
        out[p + 1] = g(j, k).imag() + g(k, j).imag();
      }
    }
    return out;
  }

  /// dA/dθ_i as a matrix (a single basis direction of the skew-Hermitian space).
  static CMatrix generator_direction(std::size_t i, std::size_t n) {
    CMatrix e = CMatrix::Zero(n, n);
    if (i < n) {
      e(i, i) = kI;
      return e;
    }
    std::size_t p = n;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k, p += 2) {
        if (i == p) {
          e(j, k) = 1.0;
          e(k, j) = -1.0;
          return e;
        }
        if (i == p + 1) {
          e(j, k) = kI;
          e(k, j) = kI;
          return e;
        }
      }
    }
    throw DimensionError("generator_direction: index out of range");
  }

 private:
  std::size_t d_;
  std::size_t de_;
  RVector theta_;
};

/// K_k[a, b] = U[(a, k), (b, 0)] with composite index a·d_E + k.
inline std::vector<CMatrix> kraus_blocks(const CMatrix& u, std::size_t d, std::size_t de) {
  require_dims(static_cast<std::size_t>(u.rows()) == d * de && u.cols() == u.rows(),
               "kraus_blocks: unitary has wrong shape");
  std::vector<CMatrix> ops(de, CMatrix(d, d));
  for (std::size_t k = 0; k < de; ++k)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) ops[k](a, b) = u(a * de + k, b * de);
  return ops;
}

inline KrausSet kraus_from_unitary(const CMatrix& u, std::size_t d, std::size_t de) {
  return KrausSet(kraus_blocks(u, d, de));
}

inline KrausSet kraus_from_unitary(const StinespringModel& model) {
  return kraus_from_unitary(model.unitary(), model.sys_dim(), model.env_dim());
}

/// Tr_E[U (ρ ⊗ |0_E⟩⟨0_E|) U†], evaluated on the full dilated space.
inline DensityMatrix stinespring_apply(const CMatrix& u, std::size_t de, const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  require_dims(static_cast<std::size_t>(u.rows()) == d * de, "stinespring_apply: dimension mismatch");
  CMatrix env = CMatrix::Zero(de, de);
  env(0, 0) = 1.0;
  CMatrix joint(d * de, d * de);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) joint.block(a * de, b * de, de, de) = rho.matrix()(a, b) * env;
  const CMatrix out = u * joint * u.adjoint();
  CMatrix red = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) red(a, b) = out.block(a * de, b * de, de, de).trace();
  return DensityMatrix(std::move(red));
}

/// Real matrix of a linear map on coherence vectors.
class TransferMatrix {
 public:
  TransferMatrix() = default;
  explicit TransferMatrix(RMatrix m) : m_(std::move(m)) {
    require_dims(m_.rows() == m_.cols(), "TransferMatrix: must be square");
  }

  const RMatrix& matrix() const { return m_; }
  Eigen::Index size() const { return m_.rows(); }

  CoherenceVector apply(const CoherenceVector& v) const {
    require_dims(static_cast<Eigen::Index>(v.size()) == m_.cols(), "TransferMatrix::apply: length mismatch");
    return CoherenceVector(m_ * v.values());
  }

  /// max |T[0, :] - e_0|.
  double trace_preservation_error() const {
    RVector e0 = RVector::Zero(m_.cols());
    e0[0] = 1.0;
    return (m_.row(0).transpose() - e0).cwiseAbs().maxCoeff();
  }

 private:
  RMatrix m_;
};

/// T[i, j] = Tr[F_i 𝓔(F_j)]/d for any linear map 𝓔 on d×d matrices.
inline TransferMatrix transfer_matrix_of(const std::function<CMatrix(const CMatrix&)>& map, const PauliBasis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  const double d = static_cast<double>(basis.dim());
  RMatrix t(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const CMatrix out = map(basis.matrix(static_cast<std::size_t>(j)));
    for (Eigen::Index i = 0; i < n; ++i) t(i, j) = basis.trace_with(static_cast<std::size_t>(i), out).real() / d;
  }
  return TransferMatrix(std::move(t));
}

inline TransferMatrix transfer_matrix(const KrausSet& k, const PauliBasis& basis) {
  require_dims(k.sys_dim() == basis.dim(), "transfer_matrix: dimension mismatch");
  const auto n = static_cast<Eigen::Index>(basis.size());
  const auto d = basis.dim();
  RMatrix t(n, n);
  CMatrix out(d, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.setZero();
    for (const auto& op : k.operators()) out.noalias() += basis.right_multiply(op, static_cast<std::size_t>(j)) * op.adjoint();
    for (Eigen::Index i = 0; i < n; ++i)
      t(i, j) = basis.trace_with(static_cast<std::size_t>(i), out).real() / static_cast<double>(d);
  }
  return TransferMatrix(std::move(t));
}

/// Pauli coefficients c_j = Tr[F_j X] of an arbitrary matrix.
inline CVector pauli_coefficients(const CMatrix& x, const PauliBasis& basis) {
  CVector c(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) c[static_cast<Eigen::Index>(j)] = basis.trace_with(j, x);
  return c;
}

/// Action of the superoperator with transfer matrix T on an arbitrary matrix.
inline CMatrix apply_transfer(const RMatrix& t, const CMatrix& x, const PauliBasis& basis) {
  const CVector c = t.cast<cplx>() * pauli_coefficients(x, basis);
  CMatrix out = CMatrix::Zero(basis.dim(), basis.dim());
  for (std::size_t j = 0; j < basis.size(); ++j) basis.add_scaled(j, c[static_cast<Eigen::Index>(j)], out);
  return out / static_cast<double>(basis.dim());
}

/// C = Σ_ab |a⟩⟨b| ⊗ 𝓔(|a⟩⟨b|) for any linear map 𝓔.
inline CMatrix choi_of(const std::function<CMatrix(const CMatrix&)>& map, std::size_t d) {
  CMatrix c(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(a, b) = 1.0;
      c.block(a * d, b * d, d, d) = map(unit);
    }
  return c;
}

inline CMatrix choi_matrix(const KrausSet& k) {
  return choi_of([&](const CMatrix& x) { return k.apply(x); }, k.sys_dim());
}

inline CMatrix choi_from_transfer(const RMatrix& t, const PauliBasis& basis) {
  return choi_of([&](const CMatrix& x) { return apply_transfer(t, x, basis); }, basis.dim());
}

/// Eigenvalues of a Hermitian matrix, ascending.
inline RVector hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline std::size_t numerical_rank(const CMatrix& h, double tol = 1e-9) {
  const RVector ev = hermitian_eigenvalues(h);
  return static_cast<std::size_t>((ev.array().abs() > tol).count());
}

}  // namespace qchan

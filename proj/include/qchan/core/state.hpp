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
#include <cstdint>

#include <Eigen/Eigenvalues>

#include "qchan/core/pauli_basis.hpp"
#include "qchan/core/random.hpp"
#include "qchan/core/types.hpp"

namespace qchan {

/// Tolerance used when accepting a matrix as a density matrix. Exact
/// simulators meet much tighter bounds; those are asserted in tests.
inline constexpr double kStateAcceptTol = 1e-8;

/// A Hermitian, unit-trace d×d matrix. Positivity is not enforced, since
/// states reconstructed from shot estimates can have slightly negative
/// eigenvalues; use min_eigenvalue() / is_positive() to check.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {
    require_dims(m_.rows() == m_.cols() && m_.rows() > 0, "DensityMatrix: matrix must be square");
    if (hermiticity_error() > kStateAcceptTol) throw DataError("DensityMatrix: matrix is not Hermitian");
    if (std::abs(trace() - 1.0) > kStateAcceptTol) throw DataError("DensityMatrix: trace differs from 1");
  }

  static DensityMatrix pure(const CVector& psi) {
    const CVector n = psi / psi.norm();
    return DensityMatrix(n * n.adjoint());
  }

  static DensityMatrix maximally_mixed(std::size_t d) {
    return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
  }

  /// |k⟩⟨k| in the computational basis.
  static DensityMatrix basis_state(std::size_t d, std::size_t k) {
    CMatrix m = CMatrix::Zero(d, d);
    m(k, k) = 1.0;
    return DensityMatrix(std::move(m));
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }

  double trace() const { return m_.trace().real(); }
  double hermiticity_error() const { return max_abs_diff(m_, m_.adjoint()); }
  double purity() const { return (m_ * m_).trace().real(); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
  bool is_positive(double tol = 1e-10) const { return min_eigenvalue() >= -tol; }

 private:
  CMatrix m_;
};

/// Real vector of Pauli-string expectations v_j = Tr[F_j ρ]; v_0 = 1.
class CoherenceVector {
 public:
  CoherenceVector() = default;
  explicit CoherenceVector(RVector v) : v_(std::move(v)) {}

  std::size_t size() const { return static_cast<std::size_t>(v_.size()); }
  double operator[](std::size_t i) const { return v_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return v_[static_cast<Eigen::Index>(i)]; }
  const RVector& values() const { return v_; }
  RVector& values() { return v_; }

  /// System dimension d, from size d².
  std::size_t dim() const {
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(size()))));
    require_dims(d * d == size(), "CoherenceVector: length is not a square");
    return d;
  }

  bool operator==(const CoherenceVector& o) const { return v_ == o.v_; }

 private:
  RVector v_;
};

inline CoherenceVector coherence_from_density(const DensityMatrix& rho, const PauliBasis& basis) {
  require_dims(rho.dim() == basis.dim(), "coherence_from_density: dimension mismatch");
  RVector v(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const cplx t = basis.trace_with(j, rho.matrix());
    if (std::abs(t.imag()) > 1e-10) throw NumericalError("coherence_from_density: complex expectation value");
    v[static_cast<Eigen::Index>(j)] = t.real();
  }
  v[0] = 1.0;
  return CoherenceVector(std::move(v));
}

/// ρ = (𝟙 + Σ_{j≥1} v_j F_j)/d. Positivity is not enforced.
inline CMatrix matrix_from_coherence(const RVector& v, const PauliBasis& basis) {
  require_dims(static_cast<std::size_t>(v.size()) == basis.size(),
               "density_from_coherence: length mismatch");
  const auto d = basis.dim();
  CMatrix m = CMatrix::Zero(d, d);
  for (std::size_t j = 0; j < basis.size(); ++j) basis.add_scaled(j, v[static_cast<Eigen::Index>(j)], m);
  return m / static_cast<double>(d);
}

inline DensityMatrix density_from_coherence(const CoherenceVector& v, const PauliBasis& basis) {
  require_dims(v.size() == basis.size(), "density_from_coherence: length mismatch");
  if (std::abs(v[0] - 1.0) > 1e-12) throw DataError("density_from_coherence: v[0] must equal 1");
  return DensityMatrix(matrix_from_coherence(v.values(), basis));
}

/// Haar-random pure qubit state from a normalized complex Gaussian 2-vector.
inline DensityMatrix haar_random_pure_qubit(Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  CVector psi(2);
  const double a = n01(rng), b = n01(rng), c = n01(rng), e = n01(rng);
  psi << cplx(a, b), cplx(c, e);
  return DensityMatrix::pure(psi);
}

inline DensityMatrix haar_random_pure_qubit(std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_pure_qubit(rng);
}

/// ρ_a ⊗ ρ_b with ρ_a on the leftmost factor.
inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const auto da = static_cast<Eigen::Index>(a.dim());
  const auto db = static_cast<Eigen::Index>(b.dim());
  CMatrix m(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return DensityMatrix(std::move(m));
}

}  // namespace qchan

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
#include <utility>

#include "qchan/core/types.hpp"

namespace qchan {

namespace detail {

// Taylor truncation degree after scaling to ‖X‖₁ ≤ 1: remainder ≤ e/19! ≈ 2e-17.
inline constexpr int kTaylorDegree = 18;
inline constexpr int kPsBlock = 4;

inline const std::array<double, kTaylorDegree + 1>& taylor_coefficients() {
  static const auto coeffs = [] {
    std::array<double, kTaylorDegree + 1> c{};
    c[0] = 1.0;
    for (int k = 1; k <= kTaylorDegree; ++k) c[k] = c[k - 1] / k;
    return c;
  }();
  return coeffs;
}

inline int squaring_count(double norm1) {
  if (!std::isfinite(norm1)) throw NumericalError("expm: non-finite matrix");
  int s = 0;
  while (norm1 > 1.0) {
    norm1 *= 0.5;
    ++s;
  }
  return s;
}

// A value of the algebra of block upper-triangular matrices [[X, D], [0, X]];
// D is dropped (left empty) when only the exponential itself is needed.
struct Block {
  CMatrix x;
  CMatrix d;
  bool with_d = false;
};

inline Block mul(const Block& a, const Block& b) {
  Block r;
  r.x.noalias() = a.x * b.x;
  r.with_d = a.with_d;
  if (a.with_d) {
    r.d.noalias() = a.x * b.d;
    r.d.noalias() += a.d * b.x;
  }
  return r;
}

inline void add_scaled(Block& acc, double c, const Block& p) {
  acc.x += c * p.x;
  if (acc.with_d) acc.d += c * p.d;
}

// Paterson–Stockmeyer evaluation of the degree-18 Taylor polynomial, followed
// by s squarings.
inline Block exp_block(Block a) {
  const auto n = a.x.rows();
  if (!a.x.allFinite() || (a.with_d && !a.d.allFinite())) throw NumericalError("expm: non-finite matrix");
  const int s = squaring_count(a.x.cwiseAbs().colwise().sum().maxCoeff());
  const double scale = std::ldexp(1.0, -s);
  a.x *= scale;
  if (a.with_d) a.d *= scale;

  const auto& c = taylor_coefficients();
  std::array<Block, kPsBlock + 1> pw;
  pw[0].x = CMatrix::Identity(n, n);
  pw[0].with_d = a.with_d;
  if (a.with_d) pw[0].d = CMatrix::Zero(n, n);
  pw[1] = a;
  for (int k = 2; k <= kPsBlock; ++k) pw[k] = mul(pw[k - 1], a);

  auto chunk = [&](int b) {
    Block out;
    out.with_d = a.with_d;
    out.x = CMatrix::Zero(n, n);
    if (a.with_d) out.d = CMatrix::Zero(n, n);
    for (int i = 0; i < kPsBlock; ++i) {
      const int k = kPsBlock * b + i;
      if (k > kTaylorDegree) break;
      add_scaled(out, c[k], pw[i]);
    }
    return out;
  };

  constexpr int kChunks = kTaylorDegree / kPsBlock;  // highest chunk index
  Block p = chunk(kChunks);
  for (int b = kChunks - 1; b >= 0; --b) {
    p = mul(p, pw[kPsBlock]);
    Block ch = chunk(b);
    p.x += ch.x;
    if (p.with_d) p.d += ch.d;
  }
  for (int k = 0; k < s; ++k) p = mul(p, p);
  return p;
}

}  // namespace detail

/// Matrix exponential by scaling and squaring with a fixed-degree Taylor
/// polynomial. Accurate to ~1e-13 relative for ‖A‖ ≤ 10.
inline CMatrix expm(const CMatrix& a) {
  require_dims(a.rows() == a.cols(), "expm: matrix must be square");
  detail::Block b;
  b.x = a;
  return detail::exp_block(std::move(b)).x;
}

inline RMatrix expm_real(const RMatrix& a) { return expm(CMatrix(a.cast<cplx>())).real(); }

/// exp(A) together with its Fréchet derivative L(A, E), the top-right block of
/// exp([[A, E], [0, A]]). The block product is carried out on the two distinct
/// blocks only.
inline std::pair<CMatrix, CMatrix> expm_frechet(const CMatrix& a, const CMatrix& e) {
  require_dims(a.rows() == a.cols() && e.rows() == a.rows() && e.cols() == a.cols(),
               "expm_frechet: shape mismatch");
  detail::Block b;
  b.x = a;
  b.d = e;
  b.with_d = true;
  auto r = detail::exp_block(std::move(b));
  return {std::move(r.x), std::move(r.d)};
}

/// Adjoint of E ↦ L(A, E) under ⟨X, Y⟩ = Re Tr[X† Y]. Since exp has a power
/// series with real coefficients, the adjoint is L(A†, G).
inline CMatrix expm_frechet_adjoint(const CMatrix& a, const CMatrix& g) {
  return expm_frechet(a.adjoint(), g).second;
}

}  // namespace qchan

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
#include <optional>

#include "qchan/core/state.hpp"

namespace qchan {

struct PearsonValue {
  double value = 0.0;
  bool defined = false;
  /// A single-qubit expectation exceeded 1 in magnitude and was clamped.
  bool clamped = false;
};

inline constexpr double kPearsonMinDenominator = 1e-8;

/// C(σα₁, σα₂) = (⟨σα₁⊗σα₂⟩ − ⟨σα₁⟩⟨σα₂⟩) / √((1 − ⟨σα₁⟩²)(1 − ⟨σα₂⟩²))
/// for a two-qubit coherence vector; α ∈ {1 = x, 2 = y, 3 = z}.
inline PearsonValue pearson(const CoherenceVector& v, int alpha1, int alpha2) {
  require_dims(v.size() == 16, "pearson: two-qubit coherence vector required");
  if (alpha1 < 1 || alpha1 > 3 || alpha2 < 1 || alpha2 > 3) throw ConfigError("pearson: axis must be 1, 2 or 3");
  PearsonValue out;
  double e1 = v[static_cast<std::size_t>(4 * alpha1)];
  double e2 = v[static_cast<std::size_t>(alpha2)];
  const double e12 = v[static_cast<std::size_t>(4 * alpha1 + alpha2)];
  auto clamp = [&](double& e) {
    // Clamped to ±1, so the coefficient becomes undefined rather than
    // amplified by a ~1e-6 denominator.
    if (std::abs(e) > 1.0) {
      e = std::copysign(1.0, e);
      out.clamped = true;
    }
  };
  clamp(e1);
  clamp(e2);
  const double denom = std::sqrt((1.0 - e1 * e1) * (1.0 - e2 * e2));
  if (denom < kPearsonMinDenominator) return out;
  out.defined = true;
  out.value = (e12 - e1 * e2) / denom;
  return out;
}

/// All nine coefficients, index 3(α₁−1) + (α₂−1).
inline std::array<PearsonValue, 9> pearson_all(const CoherenceVector& v) {
  std::array<PearsonValue, 9> out;
  for (int i = 0; i < 9; ++i) out[static_cast<std::size_t>(i)] = pearson(v, 1 + i / 3, 1 + i % 3);
  return out;
}

/// Tr ρ² = |v|²/d. Shot estimates can exceed 1.
inline double purity(const CoherenceVector& v) {
  return v.values().squaredNorm() / static_cast<double>(v.dim());
}

}  // namespace qchan

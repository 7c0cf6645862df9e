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
#include <cstdint>
#include <string>
#include <vector>

#include "qchan/core/types.hpp"

namespace qchan {

/// Pauli strings on L qubits in lexicographic order over (I, X, Y, Z), identity
/// first. Qubit 0 is the leftmost tensor factor, i.e. the most significant bit
/// of a computational-basis index.
///
/// Every Pauli string is a signed permutation matrix: row r has its single
/// nonzero entry in column r ^ flip_mask, with value phase(r). Strings are kept
/// in that form; dense matrices are produced on demand.
class PauliBasis {
 public:
  explicit PauliBasis(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 8) {
      throw ConfigError("PauliBasis: qubit count must be in [1, 8]");
    }
    dim_ = std::size_t{1} << n_qubits;
    const std::size_t count = dim_ * dim_;
    flip_.resize(count);
    phases_.resize(count * dim_);
    for (std::size_t j = 0; j < count; ++j) {
      std::size_t flip = 0;
      for (int q = 0; q < n_qubits_; ++q) {
        const int p = letter(j, q);
        if (p == 1 || p == 2) flip |= bit(q);
      }
      flip_[j] = flip;
      for (std::size_t r = 0; r < dim_; ++r) {
        cplx ph{1.0, 0.0};
        for (int q = 0; q < n_qubits_; ++q) {
          const bool row_bit = (r & bit(q)) != 0;
          switch (letter(j, q)) {
            case 2: ph *= row_bit ? kI : -kI; break;
            case 3: ph *= row_bit ? -1.0 : 1.0; break;
            default: break;
          }
        }
        phases_[j * dim_ + r] = ph;
      }
    }
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return dim_; }
  /// Number of strings, d².
  std::size_t size() const { return dim_ * dim_; }

  /// Letter of string j on qubit q: 0 = I, 1 = X, 2 = Y, 3 = Z.
  int letter(std::size_t j, int q) const {
    const int shift = 2 * (n_qubits_ - 1 - q);
    return static_cast<int>((j >> shift) & 3u);
  }

  /// Index of the string with the given letters (one per qubit).
  std::size_t index_of(const std::vector<int>& letters) const {
    require_dims(static_cast<int>(letters.size()) == n_qubits_,
                 "PauliBasis::index_of: wrong number of letters");
    std::size_t j = 0;
    for (int p : letters) j = (j << 2) | static_cast<std::size_t>(p & 3);
    return j;
  }

  std::size_t index_of(const std::string& label) const {
    require_dims(static_cast<int>(label.size()) == n_qubits_,
                 "PauliBasis::index_of: label length mismatch");
    std::vector<int> letters;
    for (char c : label) {
      switch (c) {
        case 'I': letters.push_back(0); break;
        case 'X': letters.push_back(1); break;
        case 'Y': letters.push_back(2); break;
        case 'Z': letters.push_back(3); break;
        default: throw ConfigError(std::string("PauliBasis: bad letter '") + c + "'");
      }
    }
    return index_of(letters);
  }

  std::string label(std::size_t j) const {
    static constexpr std::array<char, 4> kLetters{'I', 'X', 'Y', 'Z'};
    std::string s;
    for (int q = 0; q < n_qubits_; ++q) s.push_back(kLetters[letter(j, q)]);
    return s;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(size());
    for (std::size_t j = 0; j < size(); ++j) out.push_back(label(j));
    return out;
  }

  std::size_t flip_mask(std::size_t j) const { return flip_[j]; }
  cplx phase(std::size_t j, std::size_t row) const { return phases_[j * dim_ + row]; }

  CMatrix matrix(std::size_t j) const {
    CMatrix m = CMatrix::Zero(dim_, dim_);
    for (std::size_t r = 0; r < dim_; ++r) m(r, r ^ flip_[j]) = phase(j, r);
    return m;
  }

  /// Tr[F_j X] for an arbitrary d×d matrix X.
  cplx trace_with(std::size_t j, const CMatrix& x) const {
    cplx acc{0.0, 0.0};
    for (std::size_t r = 0; r < dim_; ++r) acc += phase(j, r) * x(r ^ flip_[j], r);
    return acc;
  }

  /// Y += c · F_j.
  void add_scaled(std::size_t j, cplx c, CMatrix& y) const {
    for (std::size_t r = 0; r < dim_; ++r) y(r, r ^ flip_[j]) += c * phase(j, r);
  }

  /// F_j · X.
  CMatrix left_multiply(std::size_t j, const CMatrix& x) const {
    CMatrix out(dim_, x.cols());
    for (std::size_t r = 0; r < dim_; ++r) out.row(r) = phase(j, r) * x.row(r ^ flip_[j]);
    return out;
  }

  /// X · F_j.
  CMatrix right_multiply(const CMatrix& x, std::size_t j) const {
    CMatrix out(x.rows(), dim_);
    for (std::size_t r = 0; r < dim_; ++r) out.col(r ^ flip_[j]) = x.col(r) * phase(j, r);
    return out;
  }

 private:
  std::size_t bit(int q) const { return std::size_t{1} << (n_qubits_ - 1 - q); }

  int n_qubits_;
  std::size_t dim_;
  std::vector<std::size_t> flip_;
  std::vector<cplx> phases_;
};

/// Number of qubits for a power-of-two dimension; throws otherwise.
inline int qubits_for_dim(std::size_t d) {
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  require_dims((std::size_t{1} << n) == d && n >= 1, "dimension is not a power of two >= 2");
  return n;
}

}  // namespace qchan

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

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qchan/core/channel.hpp"
#include "qchan/core/parallel.hpp"
#include "qchan/sim/trajectory.hpp"

namespace qchan {

/// U = exp(A(θ)) with access to ∂U/∂θ_i through the Fréchet derivative.
class UnitaryWithDerivative {
 public:
  UnitaryWithDerivative(const RVector& theta, std::size_t n)
      : n_(n), a_(StinespringModel::skew_hermitian_from_params(theta, n)), u_(expm(a_)) {}

  const CMatrix& unitary() const { return u_; }
  const CMatrix& generator() const { return a_; }

  /// ∂U/∂θ_i, the top-right block of exp([[A, E_i], [0, A]]).
  CMatrix derivative(std::size_t i) const { return expm_frechet(a_, StinespringModel::generator_direction(i, n_)).second; }

  /// Directional derivative along an arbitrary parameter direction.
  CMatrix directional(const RVector& direction) const {
    return expm_frechet(a_, StinespringModel::skew_hermitian_from_params(direction, n_)).second;
  }

 private:
  std::size_t n_;
  CMatrix a_;
  CMatrix u_;
};

inline UnitaryWithDerivative unitary_and_gradient(const StinespringModel& model) {
  return UnitaryWithDerivative(model.params(), model.total_dim());
}

inline TransferMatrix model_transfer(const StinespringModel& model, const PauliBasis& basis) {
  return transfer_matrix(kraus_from_unitary(model), basis);
}

/// Training targets of a dataset for a time window, each predicted by
/// propagating the trajectory's state at `anchor` (0 = initial state).
class TrainingSet {
 public:
  struct Target {
    int steps;  // t - anchor
    RVector value;
  };
  struct Entry {
    std::size_t trajectory;
    RVector anchor;
    std::vector<Target> targets;  // sorted by steps
  };
  struct Ref {
    std::size_t entry;
    std::size_t target;
  };

  TrainingSet(const TrajectoryDataset& data, int t_min, int t_max, int anchor = 0) : anchor_(anchor) {
    if (t_min > t_max) throw ConfigError("TrainingSet: t_min must not exceed t_max");
    if (t_min <= anchor) throw ConfigError("TrainingSet: training window must start after the anchor time");
    std::string missing;
    for (std::size_t i = 0; i < data.trajectories.size(); ++i) {
      const auto& tr = data.trajectories[i];
      const CoherenceVector* a = tr.at(anchor);
      if (a == nullptr) {
        missing += " traj " + std::to_string(tr.id) + " anchor t=" + std::to_string(anchor) + ";";
        continue;
      }
      Entry e{i, a->values(), {}};
      for (int t = t_min; t <= t_max; ++t) {
        const CoherenceVector* v = tr.at(t);
        if (v == nullptr) {
          missing += " traj " + std::to_string(tr.id) + " t=" + std::to_string(t) + ";";
          continue;
        }
        e.targets.push_back({t - anchor, v->values()});
      }
      entries_.push_back(std::move(e));
    }
    if (!missing.empty()) throw DataError("missing time points:" + missing);
    for (std::size_t i = 0; i < entries_.size(); ++i)
      for (std::size_t j = 0; j < entries_[i].targets.size(); ++j) refs_.push_back({i, j});
    if (refs_.empty()) throw DataError("TrainingSet: no training targets");
  }

  int anchor() const { return anchor_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<Ref>& refs() const { return refs_; }
  std::size_t size() const { return refs_.size(); }

 private:
  int anchor_;
  std::vector<Entry> entries_;
  std::vector<Ref> refs_;
};

/// Mean of |T^k v_anchor − v_target|² over the given targets.
inline double loss_for_transfer(const RMatrix& t, const TrainingSet& set, const std::vector<TrainingSet::Ref>& refs) {
  std::map<std::size_t, std::vector<std::size_t>> by_entry;
  for (const auto& r : refs) by_entry[r.entry].push_back(r.target);
  double total = 0.0;
  for (const auto& [ei, idx] : by_entry) {
    const auto& e = set.entries()[ei];
    int kmax = 0;
    for (auto j : idx) kmax = std::max(kmax, e.targets[j].steps);
    std::vector<RVector> v(static_cast<std::size_t>(kmax) + 1);
    v[0] = e.anchor;
    for (int k = 1; k <= kmax; ++k) v[static_cast<std::size_t>(k)] = t * v[static_cast<std::size_t>(k - 1)];
    for (auto j : idx) total += (v[static_cast<std::size_t>(e.targets[j].steps)] - e.targets[j].value).squaredNorm();
  }
  return total / static_cast<double>(refs.size());
}

inline double loss(const StinespringModel& model, const TrainingSet& set, const PauliBasis& basis) {
  return loss_for_transfer(model_transfer(model, basis).matrix(), set, set.refs());
}

inline double loss(const StinespringModel& model, const TrainingSet& set, const PauliBasis& basis,
                   const std::vector<TrainingSet::Ref>& refs) {
  return loss_for_transfer(model_transfer(model, basis).matrix(), set, refs);
}

struct LossAndGradient {
  double loss = 0.0;
  RVector grad;
};

/// ∂L/∂T for L = mean_refs |T^k v_anchor − v|², by backpropagating the
/// adjoint through the powers of T. Trajectories are reduced in a fixed order.
inline RMatrix transfer_gradient(const RMatrix& t, const TrainingSet& set, const std::vector<TrainingSet::Ref>& refs,
                                 double* loss_out, int threads = 1) {
  std::map<std::size_t, std::vector<std::size_t>> by_entry;
  for (const auto& r : refs) by_entry[r.entry].push_back(r.target);
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> groups(by_entry.begin(), by_entry.end());
  const double norm = 1.0 / static_cast<double>(refs.size());
  const auto n = t.rows();
  std::vector<RMatrix> partial(groups.size());
  std::vector<double> partial_loss(groups.size(), 0.0);
  const RMatrix tt = t.transpose();

  parallel_for(groups.size(), threads, [&](std::size_t g) {
    const auto& e = set.entries()[groups[g].first];
    const auto& idx = groups[g].second;
    int kmax = 0;
    for (auto j : idx) kmax = std::max(kmax, e.targets[j].steps);
    std::vector<RVector> v(static_cast<std::size_t>(kmax) + 1);
    v[0] = e.anchor;
    for (int k = 1; k <= kmax; ++k) v[static_cast<std::size_t>(k)] = t * v[static_cast<std::size_t>(k - 1)];
    std::vector<RVector> seed(static_cast<std::size_t>(kmax) + 1, RVector::Zero(n));
    for (auto j : idx) {
      const auto k = static_cast<std::size_t>(e.targets[j].steps);
      const RVector r = v[k] - e.targets[j].value;
      partial_loss[g] += r.squaredNorm();
      seed[k] += 2.0 * norm * r;
    }
    RMatrix w = RMatrix::Zero(n, n);
    RVector lambda = RVector::Zero(n);
    for (int k = kmax; k >= 1; --k) {
      lambda += seed[static_cast<std::size_t>(k)];
      w.noalias() += lambda * v[static_cast<std::size_t>(k - 1)].transpose();
      lambda = tt * lambda;
    }
    partial[g] = std::move(w);
  });

  RMatrix w = RMatrix::Zero(n, n);
  double total = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    w += partial[g];
    total += partial_loss[g];
  }
  if (loss_out) *loss_out = total * norm;
  return w;
}

/// ∂L/∂K_k from ∂L/∂T: G_k = (2/d) Σ_ij W_ij F_i K_k F_j, so that
/// dL = Re Σ_k Tr[G_k† dK_k].
inline std::vector<CMatrix> kraus_gradient(const RMatrix& w, const KrausSet& kraus, const PauliBasis& basis) {
  const auto d = basis.dim();
  const auto n = basis.size();
  std::vector<CMatrix> m(n, CMatrix::Zero(d, d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double wij = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (wij != 0.0) basis.add_scaled(j, wij, m[i]);
    }
  std::vector<CMatrix> out;
  for (const auto& k : kraus.operators()) {
    CMatrix g = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i) g.noalias() += basis.left_multiply(i, k) * m[i];
    out.push_back(g * (2.0 / static_cast<double>(d)));
  }
  return out;
}

/// Exact gradient of the batch loss with respect to θ: adjoint propagation
/// through T^k, then T(K), the Kraus blocks of U, and exp's Fréchet adjoint.
inline LossAndGradient loss_gradient(const StinespringModel& model, const TrainingSet& set, const PauliBasis& basis,
                                     const std::vector<TrainingSet::Ref>& refs, int threads = 1) {
  const std::size_t d = model.sys_dim(), de = model.env_dim(), n = model.total_dim();
  const CMatrix a = model.generator();
  const CMatrix u = expm(a);
  const KrausSet kraus = kraus_from_unitary(u, d, de);
  const RMatrix t = transfer_matrix(kraus, basis).matrix();
  LossAndGradient out;
  const RMatrix w = transfer_gradient(t, set, refs, &out.loss, threads);
  const auto gk = kraus_gradient(w, kraus, basis);
  CMatrix gu = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < de; ++k)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) gu(r * de + k, c * de) = gk[k](r, c);
  const CMatrix ga = expm_frechet_adjoint(a, gu);
  out.grad = StinespringModel::params_gradient_from_generator_gradient(ga);
  if (!std::isfinite(out.loss) || !out.grad.allFinite()) throw NumericalError("loss_gradient: non-finite value");
  return out;
}

inline LossAndGradient loss_gradient(const StinespringModel& model, const TrainingSet& set, const PauliBasis& basis) {
  return loss_gradient(model, set, basis, set.refs());
}

}  // namespace qchan

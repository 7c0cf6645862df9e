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

#include <gtest/gtest.h>

#include <boost/numeric/odeint.hpp>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "qchan/eval/error_measure.hpp"
#include "qchan/eval/floquet.hpp"
#include "qchan/eval/shot_envelope.hpp"
#include "qchan/eval/zz_fit.hpp"
#include "qchan/sim/periodic_lindblad.hpp"
#include "qchan/sim/scenarios.hpp"
#include "qchan/sim/transpose_channel.hpp"

using namespace qchan;

namespace {

CMatrix pauli(char c) {
  CMatrix m(2, 2);
  switch (c) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = CMatrix::Identity(2, 2);
  }
  return m;
}

DensityMatrix random_mixed(Rng& rng, std::size_t d) {
  std::normal_distribution<double> n01;
  CMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = cplx(n01(rng), n01(rng));
  CMatrix rho = g * g.adjoint();
  return DensityMatrix(rho / rho.trace().real());
}

DensityMatrix bell_state() {
  CVector psi = CVector::Zero(4);
  psi[0] = psi[3] = 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure(psi);
}

CoherenceVector cv(const DensityMatrix& rho) { return coherence_from_density(rho, PauliBasis(qubits_for_dim(rho.dim()))); }

// L(ρ) = −i[H, ρ] + Σ JρJ† − ½{J†J, ρ}.
CMatrix lindblad(const CMatrix& h, const std::vector<CMatrix>& jumps, const CMatrix& rho) {
  CMatrix out = -kI * (h * rho - rho * h);
  for (const auto& j : jumps) {
    const CMatrix jdj = j.adjoint() * j;
    out += j * rho * j.adjoint() - 0.5 * (jdj * rho + rho * jdj);
  }
  return out;
}

RMatrix pauli_generator(const CMatrix& h, const std::vector<CMatrix>& jumps) {
  return transfer_matrix_of([&](const CMatrix& x) { return lindblad(h, jumps, x); }, PauliBasis(1)).matrix();
}

// One-period map of H(s) = σz + E_x cos(ωs) σx with J = √γ|0⟩⟨1|, integrated
// on each Pauli input by Runge–Kutta–Fehlberg 7(8).
RMatrix oracle_period_map(double ex, double omega, double gamma) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<double>;
  const CMatrix sm = (CMatrix(2, 2) << 0, 1, 0, 0).finished();
  const std::vector<CMatrix> jumps{std::sqrt(gamma) * sm};
  auto rhs = [&](const State& x, State& dx, double s) {
    CMatrix m(2, 2);
    for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = cplx(x[2 * i], x[2 * i + 1]);
    const CMatrix h = pauli('z') + ex * std::cos(omega * s) * pauli('x');
    const CMatrix r = lindblad(h, jumps, m);
    for (int i = 0; i < 4; ++i) {
      dx[2 * i] = r(i / 2, i % 2).real();
      dx[2 * i + 1] = r(i / 2, i % 2).imag();
    }
  };
  const char names[4] = {'i', 'x', 'y', 'z'};
  RMatrix t(4, 4);
  for (int j = 0; j < 4; ++j) {
    const CMatrix f = pauli(names[j]);
    State x(8);
    for (int i = 0; i < 4; ++i) {
      x[2 * i] = f(i / 2, i % 2).real();
      x[2 * i + 1] = f(i / 2, i % 2).imag();
    }
    ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_fehlberg78<State>()), rhs, x, 0.0,
                            2.0 * std::numbers::pi / omega, 1e-3);
    CMatrix m(2, 2);
    for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = cplx(x[2 * i], x[2 * i + 1]);
    for (int i = 0; i < 4; ++i) t(i, j) = 0.5 * (pauli(names[i]) * m).trace().real();
  }
  return t;
}

TrajectoryDataset single_point(const CoherenceVector& initial, const CoherenceVector& at1) {
  TrajectoryDataset d;
  d.n_qubits = qubits_for_dim(initial.dim());
  Trajectory tr;
  tr.initial = initial;
  tr.times = {1};
  tr.states = {at1};
  d.trajectories.push_back(tr);
  return d;
}

std::vector<PearsonSeries> exact_series(double v, int count, std::uint64_t seed, int t_max) {
  std::vector<PearsonSeries> out;
  for (int i = 0; i < count; ++i) {
    const auto rho = initial_pair_state(seed, static_cast<std::uint64_t>(i), InitRecipe::independent);
    const auto states = device_exact_states(v, rho, t_max);
    PearsonSeries s{rho, {}, {}};
    for (int t = 1; t <= t_max; ++t) {
      s.times.push_back(t);
      s.values.push_back(pearson_all(cv(states[static_cast<std::size_t>(t)])));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<PearsonSeries> shot_series(double v, int count, std::uint64_t state_seed, std::uint64_t shot_seed) {
  std::vector<int> times;
  for (int t = 1; t <= 20; ++t) times.push_back(t);
  std::vector<PearsonSeries> out;
  for (int i = 0; i < count; ++i) {
    const auto rho = initial_pair_state(state_seed, static_cast<std::uint64_t>(i), InitRecipe::independent);
    const auto est = estimate_coherence_from_counts(
        emulate_device(DeviceParams{v, 20000, 1}, rho, times, stream_seed(shot_seed, static_cast<std::uint64_t>(i))), 1);
    PearsonSeries s{rho, times, {}};
    for (const auto& per_t : est) s.values.push_back(pearson_all(per_t[0]));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- error measure

TEST(ErrorMeasure, MaximallyMixedAgainstGroundState) {
  // Tr[(𝟙/2 − |0⟩⟨0|)²] / Tr[|0⟩⟨0|²] = (1/2)/1; identity channel keeps 𝟙/2.
  const auto data = single_point(cv(DensityMatrix::maximally_mixed(2)), cv(DensityMatrix::basis_state(2, 0)));
  const auto id = transfer_matrix(KrausSet::identity(2), PauliBasis(1));
  EXPECT_NEAR(error_measure(id, data, EvalConfig{1, 1, 0}).epsilon, 0.5, 1e-15);
}

TEST(ErrorMeasure, ZeroForExactModel) {
  const auto k = transpose_channel_kraus();
  TrajectoryDataset data;
  for (std::uint64_t i = 0; i < 4; ++i) data.trajectories.push_back(simulate_transpose_channel(initial_qubit_state(2, i), 20));
  const auto rep = error_measure(transfer_matrix(k, PauliBasis(1)), data, EvalConfig{});
  EXPECT_LT(rep.epsilon, 1e-28);
  EXPECT_EQ(rep.per_trajectory.size(), 4u);
}

TEST(ErrorMeasure, SameThroughDensityMatrices) {
  Rng rng = make_rng(4, 0);
  const PauliBasis b(2);
  TrajectoryDataset data;
  data.n_qubits = 2;
  for (int i = 0; i < 3; ++i) {
    Trajectory tr;
    tr.initial = cv(random_mixed(rng, 4));
    for (int t = 1; t <= 6; ++t) {
      tr.times.push_back(t);
      tr.states.push_back(cv(random_mixed(rng, 4)));
    }
    data.trajectories.push_back(tr);
  }
  std::normal_distribution<double> n01;
  const StinespringModel model(4, 2, [&] {
    RVector th(64);
    for (auto& x : th) x = 0.3 * n01(rng);
    return th;
  }());
  const CMatrix uu = model.unitary();
  double total = 0.0;
  for (const auto& tr : data.trajectories) {
    DensityMatrix rho = density_from_coherence(tr.initial, b);
    double acc = 0.0;
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
      rho = stinespring_apply(uu, 2, rho);
      const CMatrix ref = density_from_coherence(tr.states[k], b).matrix();
      const CMatrix diff = rho.matrix() - ref;
      acc += (diff * diff).trace().real() / (ref * ref).trace().real();
    }
    total += acc / 6.0;
  }
  EXPECT_NEAR(error_measure(model, data, EvalConfig{6, 1, 0}).epsilon, total / 3.0, 1e-12);
}

TEST(ErrorMeasure, MissingTimesAndZeroPurity) {
  auto data = single_point(cv(DensityMatrix::maximally_mixed(2)), cv(DensityMatrix::basis_state(2, 0)));
  const auto id = transfer_matrix(KrausSet::identity(2), PauliBasis(1));
  try {
    error_measure(id, data, EvalConfig{3, 1, 0});
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("t=2"), std::string::npos) << e.what();
  }
  data.trajectories[0].states[0] = CoherenceVector(RVector::Zero(4));
  EXPECT_THROW(error_measure(id, data, EvalConfig{1, 1, 0}), DataError);
  EXPECT_THROW(error_measure(id, TrajectoryDataset{}, EvalConfig{}), DataError);
  EXPECT_THROW(EvalConfig({0, 1, 0}).validate(), ConfigError);
  EXPECT_THROW(EvalConfig({5, 3, 3}).validate(), ConfigError);
}

// ---------------------------------------------------------------- Pearson / purity

TEST(Pearson, ProductStatesAreUncorrelated) {
  Rng rng = make_rng(6, 0);
  for (int i = 0; i < 20; ++i) {
    const auto c = pearson_all(cv(tensor(random_mixed(rng, 2), random_mixed(rng, 2))));
    for (const auto& p : c) {
      ASSERT_TRUE(p.defined);
      EXPECT_NEAR(p.value, 0.0, 1e-12);
    }
  }
}

TEST(Pearson, BellState) {
  const auto v = cv(bell_state());
  EXPECT_NEAR(pearson(v, 3, 3).value, 1.0, 1e-15);
  EXPECT_NEAR(pearson(v, 1, 1).value, 1.0, 1e-15);
  EXPECT_NEAR(pearson(v, 2, 2).value, -1.0, 1e-15);
  EXPECT_NEAR(pearson(v, 3, 1).value, 0.0, 1e-15);
  EXPECT_TRUE(pearson(v, 3, 1).defined);
}

TEST(Pearson, BoundedForPhysicalStates) {
  Rng rng = make_rng(7, 0);
  for (int i = 0; i < 200; ++i) {
    for (const auto& p : pearson_all(cv(random_mixed(rng, 4)))) {
      if (!p.defined) continue;
      EXPECT_GE(p.value, -1.0 - 1e-12);
      EXPECT_LE(p.value, 1.0 + 1e-12);
    }
  }
}

TEST(Pearson, LocalEigenstateUndefinedAndClamp) {
  const auto c = pearson_all(cv(DensityMatrix::basis_state(4, 0)));
  EXPECT_FALSE((c[PauliSetting{3, 3}.index()].defined));
  EXPECT_FALSE((c[PauliSetting{3, 1}.index()].defined));
  EXPECT_TRUE((c[PauliSetting{1, 2}.index()].defined));
  RVector v = cv(DensityMatrix::maximally_mixed(4)).values();
  v[4] = 1.02;  // ⟨σx⊗𝟙⟩ beyond 1, as shot noise can produce
  const auto p = pearson(CoherenceVector(v), 1, 1);
  EXPECT_TRUE(p.clamped);
  EXPECT_FALSE(p.defined);
  EXPECT_THROW(pearson(cv(DensityMatrix::maximally_mixed(2)), 1, 1), DimensionError);
  EXPECT_THROW(pearson(CoherenceVector(v), 0, 1), ConfigError);
}

TEST(Purity, Examples) {
  Rng rng = make_rng(8, 0);
  EXPECT_NEAR(purity(cv(haar_random_pure_qubit(rng))), 1.0, 1e-12);
  EXPECT_NEAR(purity(cv(DensityMatrix::maximally_mixed(4))), 0.25, 1e-15);
  const auto rho = random_mixed(rng, 4);
  EXPECT_NEAR(purity(cv(rho)), (rho.matrix() * rho.matrix()).trace().real(), 1e-12);
}

TEST(Purity, ShotEstimatedBellState) {
  // G⁸ = 𝟙, so the t = 8 record samples the prepared Bell state.
  int above = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto est = estimate_coherence_from_counts(emulate_device(DeviceParams{0.0, 2000, 1}, bell_state(), {8}, seed), 1);
    const double p = purity(est[0][0]);
    EXPECT_NEAR(p, 1.0, 0.03) << "seed " << seed;
    above += p > 1.0;
  }
  EXPECT_GT(above, 0);
}

// ---------------------------------------------------------------- Floquet

TEST(Floquet, PureDecayHasGenerator) {
  const CMatrix sm = (CMatrix(2, 2) << 0, 1, 0, 0).finished();
  const RMatrix l = pauli_generator(CMatrix::Zero(2, 2), {std::sqrt(0.3) * sm});
  const double omega = 2.0;
  const RMatrix t = expm_real(l * (2.0 * std::numbers::pi / omega));
  const auto r = floquet_check(TransferMatrix(t), omega);
  ASSERT_TRUE(r.exists()) << r.note;
  EXPECT_LT((r.generator - l).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(r.reconstruction_error, 1e-6);
}

TEST(Floquet, TransposeChannelHasNone) {
  const TransferMatrix t = transfer_matrix(transpose_channel_kraus(), PauliBasis(1));
  const auto r = floquet_check(t, 1.0);
  EXPECT_EQ(r.verdict, FloquetVerdict::absent);
  Eigen::EigenSolver<RMatrix> es(t.matrix());
  double min_re = 1.0;
  for (auto l : es.eigenvalues()) min_re = std::min(min_re, l.real());
  EXPECT_NEAR(min_re, -1.0 / 3.0, 1e-12);
}

TEST(Floquet, PeriodicDriveInsideRegion) {
  PeriodicLindbladParams p;
  p.ratio_ex = 0.5;
  p.ratio_omega = 1.0;
  const auto r = floquet_check(one_period_superoperator(p), p.omega());
  EXPECT_TRUE(r.exists()) << r.note << " min " << r.min_ccp_eigenvalue;
  EXPECT_LT(r.reconstruction_error, 1e-6);
}

TEST(Floquet, BoundaryProbesWithIndependentIntegrator) {
  struct Probe {
    double ex, omega;
    bool exists;
  };
  for (const auto& pr : {Probe{0.5, 1.0, true}, Probe{0.1, 0.5, true}, Probe{2.0, 0.25, true}, Probe{0.25, 3.0, false},
                         Probe{0.5, 2.0, false}, Probe{2.0, 4.0, false}}) {
    const RMatrix oracle = oracle_period_map(pr.ex, pr.omega, 0.01);
    PeriodicLindbladParams p;
    p.ratio_ex = pr.ex;
    p.ratio_omega = pr.omega;
    const RMatrix ours = one_period_superoperator(p).matrix();
    EXPECT_LT((ours - oracle).cwiseAbs().maxCoeff(), 1e-8);
    const auto r = floquet_check(TransferMatrix(oracle), pr.omega);
    EXPECT_EQ(r.exists(), pr.exists) << pr.ex << ", " << pr.omega << ": " << r.note << " min " << r.min_ccp_eigenvalue;
    EXPECT_NE(r.verdict, FloquetVerdict::inconclusive);
  }
}

TEST(Floquet, RandomLindbladiansRoundTrip) {
  // Period 1 (ω = 2π); ‖H‖ ≤ 1 keeps the spectrum of L inside the principal strip.
  Rng rng = make_rng(11, 0);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double omega = 2.0 * std::numbers::pi;
  for (int i = 0; i < 100; ++i) {
    CMatrix g(2, 2), j(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        g(a, b) = cplx(n01(rng), n01(rng));
        j(a, b) = cplx(n01(rng), n01(rng));
      }
    CMatrix h = 0.5 * (g + g.adjoint());
    h /= Eigen::SelfAdjointEigenSolver<CMatrix>(h).eigenvalues().cwiseAbs().maxCoeff();
    j *= std::sqrt(u01(rng)) / j.norm();
    const RMatrix l = pauli_generator(h, {j});
    const RMatrix t = expm_real(l);
    const auto r = floquet_check(TransferMatrix(t), omega);
    ASSERT_TRUE(r.exists()) << "sample " << i << ": " << r.note << " min " << r.min_ccp_eigenvalue;
    EXPECT_LT((r.generator - l).cwiseAbs().maxCoeff(), 1e-6) << "sample " << i;
    EXPECT_LT(max_abs_diff(expm_real(RMatrix(r.generator * (2.0 * std::numbers::pi / omega))), t), 1e-6);
    const RMatrix eigen_log = t.log();
    EXPECT_LT((r.generator - eigen_log).cwiseAbs().maxCoeff(), 1e-8) << "sample " << i;
  }
}

TEST(Floquet, NonCcpGeneratorRejected) {
  // exp of a Hermiticity-preserving but not conditionally completely positive
  // generator: negative-rate dephasing.
  const RMatrix l = -0.2 * pauli_generator(CMatrix::Zero(2, 2), {pauli('z')});
  const auto r = floquet_check(TransferMatrix(expm_real(l)), 2.0 * std::numbers::pi);
  EXPECT_EQ(r.verdict, FloquetVerdict::absent);
  EXPECT_LT(r.min_ccp_eigenvalue, -1e-3);
}

TEST(Floquet, DefectiveSpectrumIsInconclusive) {
  RMatrix t = RMatrix::Identity(4, 4);
  t(1, 1) = t(2, 2) = 0.5;
  t(1, 2) = 1.0;
  const auto r = floquet_check(TransferMatrix(t), 1.0);
  EXPECT_EQ(r.verdict, FloquetVerdict::inconclusive);
  EXPECT_FALSE(r.note.empty());
  EXPECT_THROW(floquet_check(transfer_matrix(KrausSet::identity(4), PauliBasis(2)), 1.0), DimensionError);
}

// ---------------------------------------------------------------- ZZ fit

TEST(ZzFit, NoiselessRecovery) {
  const auto data = exact_series(-0.002, 5, 3, 20);
  const auto res = fit_zz_coupling(data);
  ASSERT_TRUE(res.identifiable) << res.note;
  EXPECT_NEAR(res.v, -0.002, 1e-5);
  EXPECT_LT(res.uncertainty, 1e-5);
  EXPECT_LE(detail::zz_objective(-0.002, data, ZzFitConfig{}), 1e-20);
  EXPECT_GT(detail::zz_objective(-0.0025, data, ZzFitConfig{}), 1e-8);
}

TEST(ZzFit, NoiselessZeroCoupling) {
  const auto res = fit_zz_coupling(exact_series(0.0, 5, 4, 20));
  ASSERT_TRUE(res.identifiable) << res.note;
  EXPECT_NEAR(res.v, 0.0, 1e-8);
}

TEST(ZzFit, ShotNoiseZeroCouplingWithinUncertainty) {
  const auto res = fit_zz_coupling(shot_series(0.0, 10, 5, 77));
  ASSERT_TRUE(res.identifiable) << res.note;
  EXPECT_TRUE(std::isfinite(res.uncertainty));
  EXPECT_LE(std::abs(res.v), 3.0 * res.uncertainty) << res.v << " ± " << res.uncertainty;
}

TEST(ZzFit, ShotNoiseCoverage) {
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto res = fit_zz_coupling(shot_series(-0.002, 10, 100 + seed, 900 + seed));
    inside += res.identifiable && res.v > -0.003 && res.v < -0.001;
  }
  EXPECT_GE(inside, 45);
}

TEST(ZzFit, UnidentifiableCases) {
  // The singlet is an eigenstate of the device Hamiltonian for every V.
  CVector psi = CVector::Zero(4);
  psi[1] = 1.0 / std::sqrt(2.0);
  psi[2] = -1.0 / std::sqrt(2.0);
  PearsonSeries singlet{DensityMatrix::pure(psi), {}, {}};
  for (int t = 1; t <= 10; ++t) {
    singlet.times.push_back(t);
    singlet.values.push_back(pearson_all(cv(DensityMatrix::pure(psi))));
  }
  const auto flat = fit_zz_coupling({singlet});
  EXPECT_FALSE(flat.identifiable);
  EXPECT_NE(flat.note.find("flat"), std::string::npos);

  ZzFitConfig none;
  none.pairs.fill(false);
  const auto empty = fit_zz_coupling(exact_series(-0.002, 2, 3, 10), none);
  EXPECT_FALSE(empty.identifiable);
  EXPECT_FALSE(std::isfinite(empty.uncertainty));
}

TEST(ZzFit, InputChecks) {
  auto short_series = exact_series(-0.002, 1, 3, 4);
  EXPECT_THROW(fit_zz_coupling(short_series), DataError);
  EXPECT_THROW(fit_zz_coupling({}), DataError);
  ZzFitConfig bad;
  bad.v_min = 0.1;
  EXPECT_THROW(fit_zz_coupling(exact_series(0.0, 1, 3, 10), bad), ConfigError);
}

TEST(ZzFit, PairSubsetParsing) {
  const auto all = parse_pair_subset("all");
  EXPECT_TRUE(std::all_of(all.begin(), all.end(), [](bool b) { return b; }));
  const auto two = parse_pair_subset("zz,xY");
  EXPECT_EQ(std::count(two.begin(), two.end(), true), 2);
  EXPECT_TRUE((two[PauliSetting{3, 3}.index()]));
  EXPECT_TRUE((two[PauliSetting{1, 2}.index()]));
  EXPECT_THROW(parse_pair_subset("zq"), DataError);
  EXPECT_THROW(parse_pair_subset("zzz"), DataError);
}

TEST(ZzFit, SubsetSeriesMatchPooledEstimate) {
  std::vector<int> times;
  for (int t = 10; t <= 20; ++t) times.push_back(t);
  std::vector<ShotRecord> recs{emulate_device(DeviceParams{}, initial_pair_state(2, 0, InitRecipe::independent), times, 5)};
  const auto series = pearson_series_from_dataset(device_dataset_from_records(recs, 10));
  const auto pooled = estimate_coherence_from_counts(recs[0], 1);
  ASSERT_EQ(series.size(), 1u);
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const auto ref = pearson_all(pooled[ti][0]);
    for (std::size_t k = 0; k < 9; ++k) EXPECT_NEAR(series[0].values[ti][k].value, ref[k].value, 1e-12);
  }
}

// ---------------------------------------------------------------- shot envelope

TEST(ShotEnvelope, MatchesDeltaMethodForProductState) {
  // Diagonal pairs: one setting, σ ≈ 1/√n. Off-diagonal: three independent
  // settings, σ² = (1 − e₁²e₂² + e₂²(1−e₁²) + e₁²(1−e₂²)) / (n(1−e₁²)(1−e₂²)).
  const auto v = cv(initial_pair_state(3, 1, InitRecipe::independent));
  const int n = 2000;
  const auto env = pearson_shot_envelope(v, n, 4000, 1);
  for (int k = 0; k < 9; ++k) {
    const auto s = PauliSetting::from_index(k);
    const double e1 = v[static_cast<std::size_t>(4 * s.first)], e2 = v[static_cast<std::size_t>(s.second)];
    const double sigma = s.first == s.second
                             ? 1.0 / std::sqrt(n)
                             : std::sqrt((1.0 - e1 * e1 * e2 * e2 + e2 * e2 * (1.0 - e1 * e1) + e1 * e1 * (1.0 - e2 * e2)) /
                                         (n * (1.0 - e1 * e1) * (1.0 - e2 * e2)));
    EXPECT_NEAR(env.stddev[static_cast<std::size_t>(k)], sigma, 0.1 * sigma) << s.label();
    EXPECT_NEAR(env.mean[static_cast<std::size_t>(k)], 0.0, 4.0 * sigma / std::sqrt(4000.0) + 2.0 / n) << s.label();
  }
}

TEST(ShotEnvelope, DeterministicAndChecked) {
  const auto v = cv(bell_state());
  const auto a = pearson_shot_envelope(v, 500, 50, 3);
  const auto b = pearson_shot_envelope(v, 500, 50, 3);
  EXPECT_EQ(a.stddev, b.stddev);
  EXPECT_THROW(pearson_shot_envelope(v, 0, 50, 3), ConfigError);
  EXPECT_THROW(pearson_shot_envelope(v, 10, 1, 3), ConfigError);
  const auto z = pearson_shot_envelope(cv(DensityMatrix::basis_state(4, 0)), 100, 20, 1);
  EXPECT_TRUE((std::isinf(z.stddev[PauliSetting{3, 3}.index()])));
}

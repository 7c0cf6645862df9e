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

#include <sstream>
#include <string>

#include "qchan/core/pauli_basis.hpp"
#include "qchan/io/text.hpp"
#include "qchan/sim/trajectory.hpp"

namespace qchan::io {

// Trajectory dataset layout:
//
//   # qchan-trajectories v1
//   # d=<d>
//   # basis=<label>,<label>,...            (coherence-vector order)
//   # provenance=exact|shot_estimated
//   # trajectory=<id>,source=<i>,provenance=exact|shot:<k>   (one per trajectory)
//   trajectory_id,t,v0,...,v<d²-1>
//   <id>,0,<initial vector>
//   <id>,<t>,<vector>                      (sampled times, increasing)

inline constexpr std::string_view kDatasetMagic = "# qchan-trajectories v1";

inline std::string provenance_tag(const Provenance& p) {
  return p.is_shot() ? "shot:" + std::to_string(p.subset) : "exact";
}

inline std::string dataset_to_csv(const TrajectoryDataset& data) {
  data.validate();
  const PauliBasis basis(data.n_qubits);
  std::ostringstream o;
  o << kDatasetMagic << '\n';
  o << "# d=" << data.dim() << '\n';
  o << "# basis=";
  for (std::size_t j = 0; j < basis.size(); ++j) o << (j ? "," : "") << basis.label(j);
  o << '\n';
  o << "# provenance=" << (data.shot_estimated() ? "shot_estimated" : "exact") << '\n';
  for (const auto& tr : data.trajectories)
    o << "# trajectory=" << tr.id << ",source=" << tr.source << ",provenance=" << provenance_tag(tr.provenance) << '\n';
  o << "trajectory_id,t";
  for (std::size_t j = 0; j < basis.size(); ++j) o << ",v" << j;
  o << '\n';
  auto row = [&](std::size_t id, int t, const CoherenceVector& v) {
    o << id << ',' << t;
    for (std::size_t j = 0; j < v.size(); ++j) o << ',' << format_double(v[j]);
    o << '\n';
  };
  for (const auto& tr : data.trajectories) {
    row(tr.id, 0, tr.initial);
    for (std::size_t i = 0; i < tr.times.size(); ++i) row(tr.id, tr.times[i], tr.states[i]);
  }
  return o.str();
}

inline TrajectoryDataset dataset_from_csv(const std::string& text, const std::string& path = "<dataset>") {
  std::istringstream in(text);
  std::string line;
  std::size_t ln = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++ln;
    return true;
  };
  auto expect_prefix = [&](std::string_view prefix) -> std::string {
    if (!next() || line.rfind(prefix, 0) != 0)
      throw DataError(where(path, ln) + ": expected header line '" + std::string(prefix) + "...'");
    return line.substr(prefix.size());
  };
  if (!next() || line != kDatasetMagic) throw DataError(where(path, ln) + ": not a qchan trajectory file");
  const auto d = parse_int<std::size_t>(expect_prefix("# d="), where(path, ln));
  int n_qubits = 0;
  try {
    n_qubits = qubits_for_dim(d);
  } catch (const DimensionError& e) {
    throw DataError(where(path, ln) + ": " + e.what());
  }
  const PauliBasis basis(n_qubits);
  const std::string basis_line = expect_prefix("# basis=");
  {
    const auto labels = split(basis_line, ',');
    if (labels.size() != basis.size()) throw DataError(where(path, ln) + ": basis has wrong length");
    for (std::size_t j = 0; j < labels.size(); ++j)
      if (labels[j] != basis.label(j))
        throw DataError(where(path, ln) + ": unsupported basis order (expected " + basis.label(j) + " at position " +
                        std::to_string(j) + ")");
  }
  const std::string prov = expect_prefix("# provenance=");
  if (prov != "exact" && prov != "shot_estimated") throw DataError(where(path, ln) + ": unknown provenance " + prov);

  TrajectoryDataset data;
  data.n_qubits = n_qubits;
  while (next() && line.rfind("# trajectory=", 0) == 0) {
    const auto f = split(std::string_view(line).substr(2), ',');
    if (f.size() != 3 || f[1].rfind("source=", 0) != 0 || f[2].rfind("provenance=", 0) != 0)
      throw DataError(where(path, ln) + ": malformed trajectory line");
    Trajectory tr;
    tr.id = parse_int<std::size_t>(f[0].substr(11), where(path, ln));
    tr.source = parse_int<std::size_t>(f[1].substr(7), where(path, ln));
    const auto p = f[2].substr(11);
    if (p == "exact") tr.provenance = Provenance::exact();
    else if (p.rfind("shot:", 0) == 0) tr.provenance = Provenance::shot_estimated(parse_int<int>(p.substr(5), where(path, ln)));
    else throw DataError(where(path, ln) + ": unknown trajectory provenance");
    if (!data.trajectories.empty() && tr.id <= data.trajectories.back().id)
      throw DataError(where(path, ln) + ": trajectory ids must increase");
    data.trajectories.push_back(std::move(tr));
  }
  {
    std::string expected = "trajectory_id,t";
    for (std::size_t j = 0; j < basis.size(); ++j) expected += ",v" + std::to_string(j);
    if (line != expected) throw DataError(where(path, ln) + ": unexpected column header");
  }
  std::size_t cur = 0;
  bool have_initial = false;
  while (next()) {
    if (line.empty()) throw DataError(where(path, ln) + ": empty line");
    const auto f = split(line, ',');
    if (f.size() != 2 + basis.size())
      throw DataError(where(path, ln) + ": expected " + std::to_string(2 + basis.size()) + " fields, got " +
                      std::to_string(f.size()));
    const auto id = parse_int<std::size_t>(f[0], where(path, ln));
    const int t = parse_int<int>(f[1], where(path, ln));
    RVector v(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) v[static_cast<Eigen::Index>(j)] = parse_double(f[2 + j], where(path, ln));
    while (cur < data.trajectories.size() && data.trajectories[cur].id != id) {
      if (!have_initial) throw DataError(where(path, ln) + ": trajectory " + std::to_string(data.trajectories[cur].id) + " has no rows");
      ++cur;
      have_initial = false;
    }
    if (cur == data.trajectories.size()) throw DataError(where(path, ln) + ": row for undeclared or out-of-order trajectory " + std::to_string(id));
    Trajectory& tr = data.trajectories[cur];
    if (!have_initial) {
      if (t != 0) throw DataError(where(path, ln) + ": first row of a trajectory must be t = 0");
      tr.initial = CoherenceVector(std::move(v));
      have_initial = true;
    } else {
      if (t <= (tr.times.empty() ? 0 : tr.times.back())) throw DataError(where(path, ln) + ": times must increase");
      tr.times.push_back(t);
      tr.states.emplace_back(std::move(v));
    }
  }
  if (data.trajectories.empty() || !have_initial || cur + 1 != data.trajectories.size())
    throw DataError(path + ": missing rows for declared trajectories");
  if ((prov == "shot_estimated") != data.shot_estimated())
    throw DataError(path + ": file provenance disagrees with trajectory provenance");
  data.validate();
  return data;
}

inline void write_dataset(const std::string& path, const TrajectoryDataset& data) { write_file(path, dataset_to_csv(data)); }
inline TrajectoryDataset read_dataset(const std::string& path) { return dataset_from_csv(read_file(path), path); }

}  // namespace qchan::io

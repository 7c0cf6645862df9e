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
#include <vector>

#include "qchan/io/text.hpp"
#include "qchan/sim/device.hpp"

namespace qchan::io {

// Shot record layout:
//
//   # qchan-shots v1
//   # blocks=<n>                                  (recorded shot blocks per setting)
//   # trajectory=<id>,initial=<v0> <v1> ... <v15>  (prepared state, one per record)
//   trajectory_id,t,basis,outcome_a,outcome_b,count,block
//
// One row per (record, time, basis, block, outcome); outcomes are ±1 and
// blocks are consecutive groups of shots in acquisition order.

inline constexpr std::string_view kShotsMagic = "# qchan-shots v1";

inline std::string shots_to_csv(const std::vector<ShotRecord>& records) {
  if (records.empty()) throw DataError("shots_to_csv: no records");
  const std::size_t n_blocks = records.front().counts.empty() ? 0 : records.front().counts.front()[0].blocks.size();
  std::ostringstream o;
  o << kShotsMagic << '\n' << "# blocks=" << n_blocks << '\n';
  for (const auto& r : records) {
    o << "# trajectory=" << r.trajectory_id << ",initial=";
    for (std::size_t j = 0; j < r.initial.size(); ++j) o << (j ? " " : "") << format_double(r.initial[j]);
    o << '\n';
  }
  o << "trajectory_id,t,basis,outcome_a,outcome_b,count,block\n";
  for (const auto& r : records) {
    if (r.counts.size() != r.times.size()) throw DataError("shots_to_csv: record has missing times");
    for (std::size_t ti = 0; ti < r.times.size(); ++ti)
      for (int s = 0; s < kNumSettings; ++s) {
        const auto& blocks = r.counts[ti][static_cast<std::size_t>(s)].blocks;
        if (blocks.size() != n_blocks) throw DataError("shots_to_csv: inconsistent block counts");
        const std::string label = PauliSetting::from_index(s).label();
        for (std::size_t b = 0; b < n_blocks; ++b)
          for (int k = 0; k < 4; ++k)
            o << r.trajectory_id << ',' << r.times[ti] << ',' << label << ',' << ((k & 2) ? -1 : 1) << ','
              << ((k & 1) ? -1 : 1) << ',' << blocks[b][static_cast<std::size_t>(k)] << ',' << b << '\n';
      }
  }
  return o.str();
}

inline std::vector<ShotRecord> shots_from_csv(const std::string& text, const std::string& path = "<shots>") {
  std::istringstream in(text);
  std::string line;
  std::size_t ln = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++ln;
    return true;
  };
  if (!next() || line != kShotsMagic) throw DataError(where(path, ln) + ": not a qchan shot file");
  if (!next() || line.rfind("# blocks=", 0) != 0) throw DataError(where(path, ln) + ": expected '# blocks='");
  const auto n_blocks = parse_int<std::size_t>(std::string_view(line).substr(9), where(path, ln));
  if (n_blocks == 0) throw DataError(where(path, ln) + ": zero blocks");
  std::vector<ShotRecord> recs;
  while (next() && line.rfind("# trajectory=", 0) == 0) {
    const auto comma = line.find(",initial=");
    if (comma == std::string::npos) throw DataError(where(path, ln) + ": malformed trajectory line");
    ShotRecord r;
    r.trajectory_id = parse_int<std::size_t>(std::string_view(line).substr(13, comma - 13), where(path, ln));
    const auto vals = split(std::string_view(line).substr(comma + 9), ' ');
    if (vals.size() != 16) throw DataError(where(path, ln) + ": initial state needs 16 entries");
    RVector v(16);
    for (std::size_t j = 0; j < 16; ++j) v[static_cast<Eigen::Index>(j)] = parse_double(vals[j], where(path, ln));
    r.initial = CoherenceVector(std::move(v));
    recs.push_back(std::move(r));
  }
  if (recs.empty()) throw DataError(where(path, ln) + ": no trajectory declarations");
  if (line != "trajectory_id,t,basis,outcome_a,outcome_b,count,block")
    throw DataError(where(path, ln) + ": unexpected column header");

  std::size_t cur = 0;
  while (next()) {
    const auto f = split(line, ',');
    if (f.size() != 7) throw DataError(where(path, ln) + ": expected 7 fields, got " + std::to_string(f.size()));
    const auto id = parse_int<std::size_t>(f[0], where(path, ln));
    const int t = parse_int<int>(f[1], where(path, ln));
    const int s = PauliSetting::from_label(std::string(f[2])).index();
    const int a = parse_int<int>(f[3], where(path, ln));
    const int b = parse_int<int>(f[4], where(path, ln));
    const long count = parse_int<long>(f[5], where(path, ln));
    const auto blk = parse_int<std::size_t>(f[6], where(path, ln));
    if ((a != 1 && a != -1) || (b != 1 && b != -1)) throw DataError(where(path, ln) + ": outcomes must be +1 or -1");
    if (count < 0) throw DataError(where(path, ln) + ": negative count");
    if (blk >= n_blocks) throw DataError(where(path, ln) + ": block index out of range");
    while (cur < recs.size() && recs[cur].trajectory_id != id) ++cur;
    if (cur == recs.size()) throw DataError(where(path, ln) + ": row for undeclared or out-of-order trajectory");
    ShotRecord& r = recs[cur];
    if (r.times.empty() || r.times.back() != t) {
      if (!r.times.empty() && t <= r.times.back()) throw DataError(where(path, ln) + ": times must increase");
      r.times.push_back(t);
      r.counts.emplace_back();
    }
    auto& blocks = r.counts.back()[static_cast<std::size_t>(s)].blocks;
    if (blocks.empty()) blocks.assign(n_blocks, {0, 0, 0, 0});
    blocks[blk][static_cast<std::size_t>(2 * (a < 0) + (b < 0))] += count;
  }
  for (const auto& r : recs) {
    if (r.times.empty()) throw DataError(path + ": trajectory " + std::to_string(r.trajectory_id) + " has no rows");
    for (std::size_t ti = 0; ti < r.times.size(); ++ti)
      for (int s = 0; s < kNumSettings; ++s)
        if (r.counts[ti][static_cast<std::size_t>(s)].blocks.empty())
          throw DataError(path + ": missing basis " + PauliSetting::from_index(s).label() + " at t = " +
                          std::to_string(r.times[ti]) + " for trajectory " + std::to_string(r.trajectory_id));
  }
  return recs;
}

inline void write_shots(const std::string& path, const std::vector<ShotRecord>& r) { write_file(path, shots_to_csv(r)); }
inline std::vector<ShotRecord> read_shots(const std::string& path) { return shots_from_csv(read_file(path), path); }

}  // namespace qchan::io

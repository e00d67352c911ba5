// Copyright 2026 The qsml Authors
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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsml/burgers.hpp"
#include "qsml/encode.hpp"
#include "qsml/lbm.hpp"

namespace qsml {

enum class Problem { Waves, Flow };

std::string to_string(Problem p);
Problem problem_from_string(std::string_view s);

inline constexpr std::uint32_t kDatasetSchemaVersion = 1;

/// A labeled collection of equally shaped solution grids.
struct Dataset {
  Problem problem = Problem::Waves;
  std::uint32_t schema_version = kDatasetSchemaVersion;
  std::uint64_t generator_digest = 0;
  std::vector<std::pair<std::string, std::string>> header;  // generator notes
  std::vector<FieldSample> samples;

  std::size_t count(int label) const;
  std::vector<int> labels() const;
  void validate() const;
};

std::uint64_t fnv1a(std::string_view bytes);

/// splitmix64 of (master, stream); independent per-stream seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Binary layout, all integers and floats little-endian:
//   "QSMLDATA"  u32 schema_version  str problem
//   u64 rows  u64 cols  u64 n_samples  u64 n_positive  u64 n_negative
//   u64 generator_digest  u32 n_header  { str key  str value }*
//   per sample: i32 label  u32 n_meta  { str key  f64 value }*
//               rows*cols f64 values, row-major
// where str = u32 byte length followed by the bytes.
std::string serialize(const Dataset& ds);
Dataset deserialize(std::string_view bytes);

void write_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

struct WaveDatasetConfig {
  BurgersConfig shock;
  BurgersConfig steady;
  double noise_sigma = 0.05;

  static WaveDatasetConfig defaults();
  std::string describe() const;
};

struct FlowDatasetConfig {
  LbmConfig base;  // lattice, inflow and schedule shared by every config
  std::size_t samples_per_class = 100;
  ReynoldsBand band;
  std::vector<double> laminar_reynolds{10.0, 15.0, 20.0};
  std::vector<double> turbulent_reynolds{90.0, 120.0, 150.0};
  std::vector<double> diameters{10.0, 12.0, 14.0, 16.0, 18.0};
  std::vector<double> cylinder_positions{24.0, 36.0};

  static FlowDatasetConfig defaults();
  std::size_t snapshots_per_config() const;
  std::size_t configs_per_class() const;
  /// k-th candidate of a class: diameter, position and Reynolds number
  /// cycle through their lists; tau follows from Re.
  LbmConfig candidate(int label, std::size_t k, std::uint64_t master_seed) const;
  std::size_t max_candidates() const;
  std::string describe() const;
};

Dataset build_wave_dataset(const WaveDatasetConfig& cfg, std::uint64_t master_seed);
Dataset build_flow_dataset(const FlowDatasetConfig& cfg, std::uint64_t master_seed);

/// Digest that build_dataset(problem, master_seed) will carry.
std::uint64_t default_generator_digest(Problem problem, std::uint64_t master_seed);

/// Default generators: 11 + 11 wave profiles or 100 + 100 flow snapshots.
Dataset build_dataset(Problem problem, std::uint64_t master_seed);

}  // namespace qsml

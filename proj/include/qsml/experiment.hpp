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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsml/dataset.hpp"
#include "qsml/train.hpp"

namespace qsml {

enum class AnsatzKind { Dqnn, DoubleQcnn };

/// Declarative description of one training scenario.
struct ExperimentSpec {
  std::string name = "run";
  Problem problem = Problem::Waves;
  std::uint64_t dataset_seed = 2024;

  EncodingOptions encoding;
  AnsatzKind ansatz = AnsatzKind::Dqnn;
  std::size_t depth = 4;  // DQNN layers
  bool allow_any_ansatz = false;
  HypothesisKind hypothesis = HypothesisKind::SingleObservable;
  Pauli pauli1 = Pauli::Z;
  Pauli pauli2 = Pauli::Z;

  TrainingConfig training;
  double train_fraction = 0.5;
  bool stratified = true;
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::size_t> sample_counts;  // learning-curve mode when nonempty
  std::string output_dir;                  // empty: <output root>/<name>

  void validate() const;
};

ExperimentSpec spec_from_json(const std::string& text);
std::string spec_to_json(const ExperimentSpec& spec);  // canonical form
std::uint64_t spec_digest(const ExperimentSpec& spec);

struct SeedResult {
  std::uint64_t seed = 0;
  Metrics train;
  Metrics test;
  std::vector<double> loss_trace;
};

struct RunResult {
  std::string name;
  std::uint64_t spec_digest = 0;
  std::uint64_t dataset_digest = 0;
  ExperimentSpec spec;
  std::vector<SeedResult> seeds;  // split mode
  LearningCurve curve;            // learning-curve mode
  double wall_seconds = 0.0;

  bool is_learning_curve() const { return !spec.sample_counts.empty(); }
  double mean_test_accuracy() const;
  /// Mean over seeds of the test confusion counts.
  std::array<std::array<double, 2>, 2> mean_test_confusion() const;
};

/// Where datasets are cached and results written by default.
std::filesystem::path default_output_root();

/// Cached build: <cache_dir>/<problem>-<seed>-<digest>.qsd.
Dataset load_or_build_dataset(Problem problem, std::uint64_t seed,
                              const std::filesystem::path& cache_dir);

QuantumDataset encode_dataset(const Dataset& ds, const ExperimentSpec& spec);
CircuitTemplate build_template(const ExperimentSpec& spec, const RegisterLayout& layout);
Hypothesis build_hypothesis(const ExperimentSpec& spec, const CircuitTemplate& tmpl);

RunResult run_experiment(const ExperimentSpec& spec, const Dataset& data);
RunResult run_experiment(const ExperimentSpec& spec,
                         const std::filesystem::path& cache_dir);

/// A committed figure preset: several scenarios sharing one figure id.
struct FigurePreset {
  std::string figure;
  std::vector<ExperimentSpec> scenarios;
};

const std::vector<std::string>& figure_ids();
FigurePreset load_preset(const std::string& figure,
                         const std::filesystem::path& preset_dir);
FigurePreset preset_from_json(const std::string& text);

struct FigureResult {
  std::string figure;
  std::vector<RunResult> runs;
  std::vector<std::filesystem::path> artifacts;  // filled by the exporters
};

FigureResult reproduce(const std::string& figure,
                       const std::filesystem::path& preset_dir,
                       const std::filesystem::path& cache_dir);

}  // namespace qsml

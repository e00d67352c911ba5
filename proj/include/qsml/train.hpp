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
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "qsml/observe.hpp"

namespace qsml {

enum class GradientMethod {
  ParameterShift,
  FiniteDifference,
  // Reverse-mode sweep; same exact gradient as the shift rule at O(P) cost.
  Adjoint,
};

// Mean: step along grad of the mean loss. Sum: step along grad of the summed
// squared error (N times larger). The trace always records the mean loss.
enum class LossReduction { Mean, Sum };

struct TrainingConfig {
  double learning_rate = 0.05;
  std::size_t iterations = 300;
  std::uint64_t seed = 0;
  GradientMethod gradient_method = GradientMethod::ParameterShift;
  double threshold = 0.0;
  double fd_step = 1e-5;
  double init_scale = 0.1;
  LossReduction reduction = LossReduction::Mean;

  void validate() const;
};

using QuantumDataset = std::vector<EncodedSample>;

struct TrainedModel {
  CircuitTemplate tmpl;
  ParamVector params;
  Hypothesis hypothesis;
  double threshold = 0.0;
  std::vector<double> training_trace;  // iterations + 1 losses
};

/// confusion[true][predicted], class index 0 = +1, 1 = -1.
struct Metrics {
  double accuracy = 0.0;
  std::array<std::array<int, 2>, 2> confusion{};

  int total() const;
};

constexpr std::size_t class_index(int label) {
  return label == kPositiveLabel ? 0 : 1;
}

/// Mean squared error between hypothesis values and labels.
double loss(std::span<const double> h, std::span<const int> labels);

std::vector<int> labels_of(const QuantumDataset& data);

std::vector<double> hypothesis_values(const QuantumDataset& data,
                                      const CircuitTemplate& tmpl,
                                      const ParamVector& params,
                                      const Hypothesis& hyp);

/// h and dh/dtheta for one sample.
struct HypothesisGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

HypothesisGradient hypothesis_gradient(const QuantumState& state,
                                       const CircuitTemplate& tmpl,
                                       const ParamVector& params,
                                       const Hypothesis& hyp,
                                       GradientMethod method,
                                       double fd_step = 1e-5);

struct LossGradient {
  double loss = 0.0;
  Eigen::VectorXd gradient;
  std::vector<double> h;
};

/// L and dL/dtheta over the dataset with the configured gradient method.
LossGradient loss_gradient(const QuantumDataset& data,
                           const CircuitTemplate& tmpl,
                           const ParamVector& params, const Hypothesis& hyp,
                           const TrainingConfig& config);

/// dL/dtheta with the two-point shift rule, whatever config says.
Eigen::VectorXd parameter_shift_grad(const QuantumDataset& data,
                                     const CircuitTemplate& tmpl,
                                     const ParamVector& params,
                                     const Hypothesis& hyp,
                                     const TrainingConfig& config);

/// Plain full-batch gradient descent from initial_params(config.seed).
TrainedModel gradient_descent(const QuantumDataset& data,
                              const CircuitTemplate& tmpl,
                              const Hypothesis& hyp,
                              const TrainingConfig& config);

TrainedModel gradient_descent(const QuantumDataset& data,
                              const CircuitTemplate& tmpl,
                              const Hypothesis& hyp,
                              const TrainingConfig& config, ParamVector initial);

/// +1 if h >= threshold else -1.
int classify_value(double h, double threshold);
int classify(const TrainedModel& model, const EncodedSample& sample);

Metrics evaluate(const TrainedModel& model, const QuantumDataset& data);
Metrics metrics_from(std::span<const int> truth, std::span<const int> predicted);

// ---- sampling helpers ----

/// n indices drawn without replacement, split as evenly between the classes
/// as availability allows (odd remainder to a random class). Sorted.
std::vector<std::size_t> stratified_draw(std::span<const int> labels,
                                         std::size_t n, std::mt19937_64& rng);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// round(train_fraction * N) training samples; stratified splits allocate
/// the test set across classes by largest remainder.
Split train_test_split(std::span<const int> labels, double train_fraction,
                       bool stratified, std::mt19937_64& rng);

QuantumDataset subset(const QuantumDataset& data,
                      std::span<const std::size_t> indices);

/// Linear interpolation between order statistics (position (n-1) p).
double quantile(std::vector<double> values, double p);

struct LearningCurveSpec {
  std::vector<std::size_t> sample_counts;
  std::vector<std::uint64_t> seeds;
};

struct LearningCurveRow {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double train_accuracy = 0.0;
  double full_accuracy = 0.0;
  std::optional<double> heldout_accuracy;  // empty when nothing is held out
  std::vector<double> loss_trace;
};

struct LearningCurveSummary {
  std::size_t n_samples = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct LearningCurve {
  std::vector<LearningCurveRow> rows;
  std::vector<LearningCurveSummary> summary;  // over seeds, full-set accuracy
};

LearningCurve learning_curve(const QuantumDataset& data,
                             const CircuitTemplate& tmpl, const Hypothesis& hyp,
                             const TrainingConfig& config,
                             const LearningCurveSpec& spec);

std::vector<LearningCurveSummary> summarize(
    const std::vector<LearningCurveRow>& rows);

}  // namespace qsml

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

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qsml/qstate.hpp"

namespace qsml {

/// Labels: shock / turbulent = +1, steady / laminar = -1.
inline constexpr int kPositiveLabel = +1;
inline constexpr int kNegativeLabel = -1;

/// A labeled classical solution grid. 1D solutions are stored as one row.
struct FieldSample {
  Eigen::MatrixXd values;  // rows = y index, cols = x index
  int label = kPositiveLabel;
  std::map<std::string, double> meta;

  void validate() const;
};

using QuantumState = std::variant<PureState, MixedState>;

enum class Basis { Real, Fourier };

struct EncodedSample {
  QuantumState state;
  int label = kPositiveLabel;
  Basis basis = Basis::Real;
  bool coarse_grained = false;

  std::size_t n_qubits() const;
  const RegisterLayout& registers() const;
};

bool is_power_of_two(std::size_t v);

/// values / ||values|| as amplitudes (signs kept).
PureState amplitude_encode(std::span<const double> values,
                           RegisterLayout layout);
PureState amplitude_encode(std::span<const double> values);

/// |psi> = sum_{i,j} psi_{i,j} |i>_x |j>_y with i the column (x) index and
/// j the row (y) index; register "x" comes first. The flat amplitude index
/// is i * rows + j, i.e. the column-major flattening of `grid`.
PureState two_register_encode(const Eigen::MatrixXd& grid);

/// Element-wise tanh(a (|v| - b)).
Eigen::MatrixXd tanh_activation(const Eigen::MatrixXd& values, double a,
                                double b);
std::vector<double> tanh_activation(std::span<const double> values, double a,
                                    double b);

/// The last ceil(fraction * cols) columns.
Eigen::MatrixXd truncate_late_time(const Eigen::MatrixXd& grid,
                                   double fraction);

enum class SubsampleMode { Stride, BlockMean };

/// Strided selection taking the first element of each block (or the block
/// mean).
Eigen::MatrixXd subsample(const Eigen::MatrixXd& grid, Eigen::Index target_rows,
                          Eigen::Index target_cols,
                          SubsampleMode mode = SubsampleMode::Stride);

/// QFT applied to every register independently.
EncodedSample to_fourier_basis(const EncodedSample& sample);

enum class KeptHalf {
  LowOrder,   // least significant qubits of each register (default)
  HighOrder,  // most significant qubits
};

/// Traces out part of every register, keeping round(keep_fraction * size)
/// qubits of each. Produces a mixed-state sample.
EncodedSample coarse_grain(const EncodedSample& sample,
                           double keep_fraction = 0.5,
                           KeptHalf half = KeptHalf::LowOrder);

/// Qubits coarse_grain keeps for the given layout.
std::set<std::size_t> coarse_grain_keep_set(const RegisterLayout& layout,
                                            double keep_fraction,
                                            KeptHalf half);

/// Preprocessing shared by the wave and flow problems.
struct EncodingOptions {
  Basis basis = Basis::Real;
  bool coarse_grain = false;
  KeptHalf kept_half = KeptHalf::LowOrder;
  double keep_fraction = 0.5;

  // Flow only.
  double truncate_fraction = 0.25;
  Eigen::Index subsample_rows = 16;
  Eigen::Index subsample_cols = 16;
  SubsampleMode subsample_mode = SubsampleMode::Stride;
  bool activation = true;
  double tanh_a = 10.0;
  std::optional<double> tanh_b;  // default: mean |v| of each sample
};

/// Wave pipeline: amplitude_encode on register "x" -> optional QFT ->
/// optional coarse-graining.
EncodedSample encode_wave(const FieldSample& sample,
                          const EncodingOptions& opts);

/// Flow pipeline: truncate -> subsample -> tanh -> two_register_encode ->
/// optional QFT per register -> optional coarse-graining.
EncodedSample encode_flow(const FieldSample& sample,
                          const EncodingOptions& opts);

}  // namespace qsml

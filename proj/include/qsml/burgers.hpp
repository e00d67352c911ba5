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

#include <cstdint>
#include <vector>

#include "qsml/encode.hpp"

namespace qsml {

enum class WaveClass { Steady, Shock };

/// Closed-form solutions of f_t + f f_x = mu f_xx on a uniform
/// grid x_k = x_min + k (x_max - x_min) / grid_points.
struct BurgersConfig {
  WaveClass wave_class = WaveClass::Shock;
  double mu = 0.2;
  std::size_t grid_points = 4096;
  double x_min = 0.0;
  double x_max = 256.0;
  std::vector<double> snapshot_times;
  double noise_sigma = 0.05;
  std::uint64_t seed = 0;

  // Shock front: states c1 (left) and c2 (right), centre x0 at t = 0.
  double c1 = 0.4;
  double c2 = 0.0;
  double x0 = 64.0;

  // Diffusive hump centred at xc, evaluated at t + time_offset.
  double t0 = 1.0;
  double xc = 128.0;
  double time_offset = 20.0;

  void validate() const;
};

/// (c1 + c2)/2 - (c1 - c2)/2 tanh[(c1 - c2)(x - (c1 + c2) t / 2 - x0) / (4 mu)]
double shock_front(double x, double t, double c1, double c2, double x0,
                   double mu);

/// ((x - xc)/s) / (1 + sqrt(s / t0) exp((x - xc)^2 / (4 mu s))), s = t + offset.
double diffusive_hump(double x, double t, double mu, double t0, double xc,
                      double time_offset);

Eigen::VectorXd burgers_grid(const BurgersConfig& cfg);

/// Noise-free profile of the configured family at time t.
Eigen::RowVectorXd burgers_profile(const BurgersConfig& cfg, double t);

/// One noise-free sample per snapshot time. Label +1 for shock, -1 steady.
std::vector<FieldSample> burgers_solution(const BurgersConfig& cfg);

/// Adds N(0, (sigma max|f|)^2) to every value, drawn per sample in order.
std::vector<FieldSample> add_white_noise(std::vector<FieldSample> samples,
                                         double sigma, std::uint64_t seed);

/// 11 equally spaced times covering [0.001, 590].
std::vector<double> default_snapshot_times();

}  // namespace qsml

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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qsml/encode.hpp"

namespace qsml {

/// Flow past a cylinder on an nx x ny D2Q9 lattice, lattice units.
struct LbmConfig {
  std::size_t nx = 128;
  std::size_t ny = 128;
  double tau = 0.6;
  double cylinder_diameter = 16.0;
  double cylinder_x = 32.0;
  double cylinder_y = 64.0;
  double inflow_speed = 0.08;
  std::size_t steps = 8000;
  std::size_t warmup_steps = 6000;
  std::size_t snapshot_step = 200;
  // Relative amplitude of the seeded transverse kick in the initial flow.
  double perturbation = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
  double viscosity() const { return (tau - 0.5) / 3.0; }
  double reynolds() const { return inflow_speed * cylinder_diameter / viscosity(); }
  std::string describe() const;
};

namespace lbm {
inline constexpr int kQ = 9;
inline constexpr std::array<int, kQ> kCx{0, 1, 0, -1, 0, 1, -1, -1, 1};
inline constexpr std::array<int, kQ> kCy{0, 0, 1, 0, -1, 1, 1, -1, -1};
inline constexpr std::array<int, kQ> kOpposite{0, 3, 4, 1, 2, 7, 8, 5, 6};
inline constexpr std::array<double, kQ> kWeight{
    4.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9,
    1.0 / 36, 1.0 / 36, 1.0 / 36, 1.0 / 36};

/// w_i rho [1 + 3 c.u + 9/2 (c.u)^2 - 3/2 |u|^2]
std::array<double, kQ> equilibrium(double rho, double ux, double uy);
}  // namespace lbm

enum class LbmBoundary {
  Channel,       // equilibrium inflow at x = 0, zero-gradient outflow, cylinder
  EmptyChannel,  // as Channel without the cylinder
  PeriodicBox,   // periodic in x and y, no obstacle
  ClosedBox,     // bounce-back walls on the border cells, cylinder, no inflow
};

class LbmSolver {
 public:
  LbmSolver(const LbmConfig& cfg, LbmBoundary boundary = LbmBoundary::Channel);

  /// One fused stream + BGK collide step.
  void step();
  void run(std::size_t n_steps);

  std::size_t steps_taken() const { return steps_; }
  bool is_solid(std::size_t x, std::size_t y) const { return solid_[index(x, y)] != 0; }

  double density(std::size_t x, std::size_t y) const;
  std::array<double, 2> velocity(std::size_t x, std::size_t y) const;
  double total_mass() const;
  bool finite() const;

  /// |u| / inflow_speed on an ny x nx grid, zero inside the cylinder.
  Eigen::MatrixXd speed_field() const;

  /// Replaces every population with its equilibrium at (rho, u).
  void set_equilibrium(const Eigen::MatrixXd& rho, const Eigen::MatrixXd& ux,
                       const Eigen::MatrixXd& uy);

  double f(int i, std::size_t x, std::size_t y) const {
    return f_[slot(i, x, y)];
  }

 private:
  std::size_t index(std::size_t x, std::size_t y) const { return y * nx_ + x; }
  std::size_t slot(int i, std::size_t x, std::size_t y) const {
    return static_cast<std::size_t>(i) * nx_ * ny_ + index(x, y);
  }

  LbmConfig cfg_;
  LbmBoundary boundary_;
  std::size_t nx_, ny_;
  std::vector<double> f_, next_;
  std::vector<unsigned char> solid_;
  std::size_t steps_ = 0;
};

struct FlowRun {
  std::vector<Eigen::MatrixXd> snapshots;  // speed_field after warm-up
  std::vector<std::size_t> snapshot_steps;
  std::vector<double> probe_uy;  // every step after warm-up
  double probe_peak_to_peak = 0.0;
  std::array<std::size_t, 2> probe{};  // (x, y)
};

/// Wake probe point: on the cylinder centre line, 7/8 of the way downstream.
std::array<std::size_t, 2> wake_probe(const LbmConfig& cfg);

/// Runs the channel simulation; throws NumericalError on blow-up.
FlowRun simulate_flow(const LbmConfig& cfg);

/// Sustained wake oscillation: peak-to-peak u_y above fraction * inflow.
bool probe_oscillates(const FlowRun& run, const LbmConfig& cfg,
                      double fraction = 0.1);

struct ReynoldsBand {
  double low = 30.0;
  double high = 60.0;
};

/// -1 below the band (laminar), +1 above it (turbulent); throws inside it.
int label_flow(const LbmConfig& cfg, ReynoldsBand band = {});

/// One labeled FieldSample per snapshot of simulate_flow.
std::vector<FieldSample> lbm_simulate(const LbmConfig& cfg, ReynoldsBand band = {});

}  // namespace qsml

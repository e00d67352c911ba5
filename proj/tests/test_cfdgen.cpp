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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qsml/dataset.hpp"
#include "qsml/error.hpp"

using namespace qsml;

namespace {
double max_slope(const BurgersConfig& cfg, double t) {
  const auto f = burgers_profile(cfg, t);
  const double dx = (cfg.x_max - cfg.x_min) / static_cast<double>(cfg.grid_points);
  double m = 0.0;
  for (Eigen::Index k = 1; k < f.size(); ++k) m = std::max(m, std::abs(f(k) - f(k - 1)) / dx);
  return m;
}

LbmConfig small_flow(double diameter, double reynolds) {
  LbmConfig c;
  c.inflow_speed = 0.08;
  c.cylinder_diameter = diameter;
  c.cylinder_x = 32;
  c.cylinder_y = 64;
  c.tau = 0.5 + 3 * c.inflow_speed * diameter / reynolds;
  c.steps = 8000;
  c.warmup_steps = 6000;
  c.snapshot_step = 200;
  return c;
}
}  // namespace

TEST(Burgers, FrontCentreIsMidpoint) {
  for (double t : {0.0, 1.0, 100.0}) {
    EXPECT_DOUBLE_EQ(shock_front(3.0 + 0.5 * t, t, 1.0, 0.0, 3.0, 0.1), 0.5);
  }
  EXPECT_NEAR(shock_front(-1e3, 0, 1.0, 0.0, 0.0, 0.1), 1.0, 1e-15);
  EXPECT_NEAR(shock_front(1e3, 0, 1.0, 0.0, 0.0, 0.1), 0.0, 1e-15);
}

TEST(Burgers, DefaultSamplesSatisfyPde) {
  const auto cfg = WaveDatasetConfig::defaults();
  for (const auto& family : {cfg.shock, cfg.steady}) {
    for (double t : family.snapshot_times) {
      EXPECT_LE(oracle::burgers_scaled_residual(family, t), 1e-3) << "t=" << t;
    }
  }
}

TEST(Burgers, SteepnessFallsWithDiffusivity) {
  BurgersConfig cfg;
  cfg.wave_class = WaveClass::Shock;
  cfg.grid_points = 1 << 16;
  cfg.snapshot_times = {1.0};
  double prev = INFINITY;
  for (double mu : {0.01, 0.1, 1.0}) {
    cfg.mu = mu;
    const double s = max_slope(cfg, 1.0);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(Burgers, SolutionShapeAndLabels) {
  const auto cfg = WaveDatasetConfig::defaults();
  const auto shock = burgers_solution(cfg.shock);
  const auto steady = burgers_solution(cfg.steady);
  ASSERT_EQ(shock.size(), 11u);
  ASSERT_EQ(steady.size(), 11u);
  EXPECT_EQ(shock.front().values.cols(), 4096);
  EXPECT_EQ(shock.front().values.rows(), 1);
  EXPECT_EQ(shock.front().label, 1);
  EXPECT_EQ(steady.front().label, -1);
  EXPECT_DOUBLE_EQ(cfg.shock.snapshot_times.front(), 0.001);
  EXPECT_DOUBLE_EQ(cfg.shock.snapshot_times.back(), 590.0);
}

TEST(Burgers, Errors) {
  auto cfg = WaveDatasetConfig::defaults().shock;
  cfg.mu = 0.0;
  EXPECT_THROW(burgers_solution(cfg), InvalidArgument);
  cfg.mu = 0.2;
  cfg.snapshot_times = {0.0005};
  EXPECT_THROW(burgers_solution(cfg), InvalidArgument);
  cfg.snapshot_times = {600.0};
  EXPECT_THROW(burgers_solution(cfg), InvalidArgument);
  cfg.snapshot_times = {2.0, 1.0};
  EXPECT_THROW(burgers_solution(cfg), InvalidArgument);
  cfg.snapshot_times = {1.0};
  cfg.grid_points = 1000;
  EXPECT_THROW(burgers_solution(cfg), InvalidArgument);
}

TEST(Noise, ZeroSigmaIsIdentity) {
  const auto clean = burgers_solution(WaveDatasetConfig::defaults().shock);
  const auto same = add_white_noise(clean, 0.0, 5);
  for (std::size_t i = 0; i < clean.size(); ++i) EXPECT_EQ(same[i].values, clean[i].values);
}

TEST(Noise, SeededAndScaled) {
  const auto clean = burgers_solution(WaveDatasetConfig::defaults().steady);
  const auto a = add_white_noise(clean, 0.05, 11);
  const auto b = add_white_noise(clean, 0.05, 11);
  const auto c = add_white_noise(clean, 0.05, 12);
  for (std::size_t i = 0; i < clean.size(); ++i) {
    EXPECT_EQ(a[i].values, b[i].values);
    EXPECT_NE(a[i].values, c[i].values);
    const Eigen::RowVectorXd eps = a[i].values - clean[i].values;
    const double mean = eps.mean();
    const double sd = std::sqrt((eps.array() - mean).square().sum() / (eps.size() - 1));
    const double target = 0.05 * clean[i].values.cwiseAbs().maxCoeff();
    EXPECT_NEAR(sd, target, 0.1 * target);
    EXPECT_LT(std::abs(mean), 0.1 * target);
  }
  EXPECT_THROW(add_white_noise(clean, -1.0, 1), InvalidArgument);
}

TEST(Lbm, RestEquilibriumWeights) {
  const auto feq = lbm::equilibrium(1.0, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(feq[0], 4.0 / 9.0);
  for (int i = 1; i <= 4; ++i) EXPECT_DOUBLE_EQ(feq[i], 1.0 / 9.0);
  for (int i = 5; i <= 8; ++i) EXPECT_DOUBLE_EQ(feq[i], 1.0 / 36.0);
  const auto scaled = lbm::equilibrium(1.7, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(scaled[0], 1.7 * 4.0 / 9.0);
}

TEST(Lbm, EquilibriumMoments) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.1, 0.1), r(0.8, 1.2);
  for (int trial = 0; trial < 50; ++trial) {
    const double rho = r(rng), ux = u(rng), uy = u(rng);
    const auto feq = lbm::equilibrium(rho, ux, uy);
    double m0 = 0, mx = 0, my = 0;
    for (int i = 0; i < lbm::kQ; ++i) {
      m0 += feq[i];
      mx += lbm::kCx[i] * feq[i];
      my += lbm::kCy[i] * feq[i];
    }
    EXPECT_NEAR(m0, rho, 1e-14);
    EXPECT_NEAR(mx, rho * ux, 1e-14);
    EXPECT_NEAR(my, rho * uy, 1e-14);
  }
}

TEST(Lbm, BoxesConserveMass) {
  LbmConfig cfg;
  cfg.nx = cfg.ny = 64;
  cfg.cylinder_x = cfg.cylinder_y = 32;
  cfg.cylinder_diameter = 8;
  cfg.tau = 0.56;
  for (auto boundary : {LbmBoundary::PeriodicBox, LbmBoundary::ClosedBox}) {
    LbmSolver box(cfg, boundary);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-0.02, 0.02);
    Eigen::MatrixXd rho(64, 64), ux(64, 64), uy(64, 64);
    for (Eigen::Index i = 0; i < rho.size(); ++i) {
      rho(i) = 1.0 + d(rng);
      ux(i) = d(rng);
      uy(i) = d(rng);
    }
    box.set_equilibrium(rho, ux, uy);
    const double m0 = box.total_mass();
    box.run(1000);
    EXPECT_LE(std::abs(box.total_mass() - m0) / m0, 1e-8);
    EXPECT_TRUE(box.finite());
  }
}

TEST(Lbm, ClosedBoxHasWallsAndCylinder) {
  LbmConfig cfg;
  cfg.nx = cfg.ny = 32;
  cfg.cylinder_x = cfg.cylinder_y = 16;
  cfg.cylinder_diameter = 6;
  const LbmSolver box(cfg, LbmBoundary::ClosedBox);
  EXPECT_TRUE(box.is_solid(0, 5));
  EXPECT_TRUE(box.is_solid(31, 5));
  EXPECT_TRUE(box.is_solid(5, 0));
  EXPECT_TRUE(box.is_solid(5, 31));
  EXPECT_TRUE(box.is_solid(16, 16));
  EXPECT_FALSE(box.is_solid(5, 5));
  const LbmSolver periodic(cfg, LbmBoundary::PeriodicBox);
  EXPECT_FALSE(periodic.is_solid(0, 5));
  EXPECT_FALSE(periodic.is_solid(16, 16));
}

TEST(Lbm, EmptyChannelStaysUniform) {
  auto cfg = small_flow(10, 20);
  LbmSolver solver(cfg, LbmBoundary::EmptyChannel);
  solver.run(5000);
  const auto speed = solver.speed_field();
  EXPECT_LE((speed.array() - 1.0).abs().maxCoeff(), 1e-6);
  double uy = 0.0;
  for (std::size_t y = 0; y < cfg.ny; ++y) {
    for (std::size_t x = 0; x < cfg.nx; ++x) uy = std::max(uy, std::abs(solver.velocity(x, y)[1]));
  }
  EXPECT_LE(uy, 1e-6 * cfg.inflow_speed);
}

TEST(Lbm, CylinderIsSolid) {
  LbmSolver solver(small_flow(16, 20));
  EXPECT_TRUE(solver.is_solid(32, 64));
  EXPECT_FALSE(solver.is_solid(32, 80));
  solver.run(10);
  EXPECT_EQ(solver.speed_field()(64, 32), 0.0);
}

TEST(Lbm, LaminarWakeIsSteadyAndTurbulentWakeSheds) {
  const auto laminar = small_flow(12, 10);
  const auto turbulent = small_flow(16, 150);
  const auto a = simulate_flow(laminar);
  const auto b = simulate_flow(turbulent);
  EXPECT_FALSE(probe_oscillates(a, laminar));
  EXPECT_TRUE(probe_oscillates(b, turbulent));
  EXPECT_EQ(a.snapshots.size(), 10u);
  EXPECT_EQ(a.snapshots.front().rows(), 128);
  EXPECT_EQ(a.snapshots.front().cols(), 128);
  EXPECT_EQ(a.probe_uy.size(), 2000u);
}

TEST(Lbm, BlowUpIsReported) {
  auto cfg = small_flow(20, 10);
  cfg.tau = 0.5001;
  cfg.inflow_speed = 0.099;
  cfg.steps = 3000;
  cfg.warmup_steps = 2000;
  EXPECT_THROW(simulate_flow(cfg), NumericalError);
}

TEST(Lbm, ConfigValidation) {
  auto cfg = small_flow(12, 10);
  cfg.tau = 0.5;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_flow(12, 10);
  cfg.inflow_speed = 0.2;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_flow(12, 10);
  cfg.cylinder_x = 126;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(LabelFlow, ReynoldsBands) {
  EXPECT_EQ(label_flow(small_flow(12, 10)), -1);
  EXPECT_EQ(label_flow(small_flow(12, 150)), 1);
  EXPECT_THROW(label_flow(small_flow(12, 45)), InvalidArgument);
  auto viscous = small_flow(12, 10);
  viscous.tau = 1e6;
  EXPECT_LT(viscous.reynolds(), 1e-4);
  EXPECT_EQ(label_flow(viscous), -1);
  EXPECT_NEAR(small_flow(16, 120).reynolds(), 120.0, 1e-9);
}

TEST(Dataset, WavesShapeAndDeterminism) {
  const auto a = build_dataset(Problem::Waves, 3);
  ASSERT_EQ(a.samples.size(), 22u);
  EXPECT_EQ(a.count(1), 11u);
  EXPECT_EQ(a.count(-1), 11u);
  for (const auto& s : a.samples) EXPECT_EQ(s.values.size(), 4096);
  EXPECT_EQ(serialize(a), serialize(build_dataset(Problem::Waves, 3)));
  EXPECT_NE(serialize(a), serialize(build_dataset(Problem::Waves, 4)));
  EXPECT_NE(a.generator_digest, build_dataset(Problem::Waves, 4).generator_digest);
}

TEST(Dataset, RoundTripIsExact) {
  const auto a = build_dataset(Problem::Waves, 5);
  const auto bytes = serialize(a);
  const auto b = deserialize(bytes);
  ASSERT_EQ(b.samples.size(), a.samples.size());
  EXPECT_EQ(b.generator_digest, a.generator_digest);
  EXPECT_EQ(b.header, a.header);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(b.samples[i].values, a.samples[i].values);
    EXPECT_EQ(b.samples[i].label, a.samples[i].label);
    EXPECT_EQ(b.samples[i].meta, a.samples[i].meta);
  }
  EXPECT_EQ(serialize(b), bytes);
  const auto path = std::filesystem::temp_directory_path() / "qsml_roundtrip.qsd";
  write_dataset(a, path);
  EXPECT_EQ(serialize(read_dataset(path)), bytes);
  std::filesystem::remove(path);
}

TEST(Dataset, CorruptFilesAreRejected) {
  const auto bytes = serialize(build_dataset(Problem::Waves, 5));
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(deserialize(bad), IoError);
  EXPECT_THROW(deserialize(bytes.substr(0, bytes.size() - 3)), IoError);
  EXPECT_THROW(deserialize(bytes + "x"), IoError);
  EXPECT_THROW(read_dataset("/nonexistent/qsml.qsd"), IoError);
}

TEST(Dataset, SmallFlowBuildIsBalancedAndWitnessed) {
  auto cfg = FlowDatasetConfig::defaults();
  cfg.samples_per_class = 4;
  cfg.base.steps = 6400;
  cfg.base.warmup_steps = 6000;
  const auto ds = build_flow_dataset(cfg, 1);
  ASSERT_EQ(ds.samples.size(), 8u);
  EXPECT_EQ(ds.count(1), 4u);
  EXPECT_EQ(ds.count(-1), 4u);
  for (const auto& s : ds.samples) {
    EXPECT_EQ(s.meta.at("oscillating") == 1.0, s.label == 1);
    EXPECT_EQ(s.values.rows(), 128);
  }
}

TEST(Dataset, FlowSweepExhaustion) {
  auto cfg = FlowDatasetConfig::defaults();
  cfg.turbulent_reynolds = {45.0};  // every turbulent candidate in the dead zone
  cfg.samples_per_class = 2;
  cfg.base.steps = 6400;
  EXPECT_THROW(build_flow_dataset(cfg, 1), InvalidArgument);
}

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

#include "qsml/burgers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsml/error.hpp"

namespace qsml {

namespace {
constexpr double kMinTime = 0.001;
constexpr double kMaxTime = 590.0;
}  // namespace

void BurgersConfig::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidArgument("Burgers diffusivity mu must be positive");
  }
  if (!is_power_of_two(grid_points) || grid_points < 2) {
    throw InvalidArgument("Burgers grid size must be a power of two");
  }
  if (!(x_max > x_min)) throw InvalidArgument("empty Burgers domain");
  if (snapshot_times.empty()) throw InvalidArgument("no snapshot times");
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    const double t = snapshot_times[i];
    if (!(t >= kMinTime && t <= kMaxTime)) {
      throw InvalidArgument("snapshot time " + std::to_string(t) +
                            " outside [0.001, 590]");
    }
    if (i > 0 && !(t > snapshot_times[i - 1])) {
      throw InvalidArgument("snapshot times must increase");
    }
  }
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
  if (wave_class == WaveClass::Shock && !(c1 > c2)) {
    throw InvalidArgument("shock front needs c1 > c2");
  }
  if (wave_class == WaveClass::Steady && (!(t0 > 0.0) || !(time_offset >= 0.0))) {
    throw InvalidArgument("hump needs t0 > 0 and a nonnegative time offset");
  }
}

double shock_front(double x, double t, double c1, double c2, double x0,
                   double mu) {
  const double mid = 0.5 * (c1 + c2);
  const double half = 0.5 * (c1 - c2);
  return mid - half * std::tanh((c1 - c2) * (x - mid * t - x0) / (4.0 * mu));
}

double diffusive_hump(double x, double t, double mu, double t0, double xc,
                      double time_offset) {
  const double s = t + time_offset;
  const double z = x - xc;
  const double arg = z * z / (4.0 * mu * s);
  return (z / s) * std::exp(-arg) / (std::exp(-arg) + std::sqrt(s / t0));
}

Eigen::VectorXd burgers_grid(const BurgersConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(cfg.grid_points);
  const double dx = (cfg.x_max - cfg.x_min) / static_cast<double>(n);
  Eigen::VectorXd x(n);
  for (Eigen::Index k = 0; k < n; ++k) x(k) = cfg.x_min + dx * static_cast<double>(k);
  return x;
}

Eigen::RowVectorXd burgers_profile(const BurgersConfig& cfg, double t) {
  const Eigen::VectorXd x = burgers_grid(cfg);
  Eigen::RowVectorXd f(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    f(k) = cfg.wave_class == WaveClass::Shock
               ? shock_front(x(k), t, cfg.c1, cfg.c2, cfg.x0, cfg.mu)
               : diffusive_hump(x(k), t, cfg.mu, cfg.t0, cfg.xc, cfg.time_offset);
  }
  return f;
}

std::vector<FieldSample> burgers_solution(const BurgersConfig& cfg) {
  cfg.validate();
  std::vector<FieldSample> out;
  out.reserve(cfg.snapshot_times.size());
  const int label = cfg.wave_class == WaveClass::Shock ? kPositiveLabel : kNegativeLabel;
  for (double t : cfg.snapshot_times) {
    FieldSample s;
    s.values = burgers_profile(cfg, t);
    s.label = label;
    s.meta = {{"t", t}, {"mu", cfg.mu}};
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<FieldSample> add_white_noise(std::vector<FieldSample> samples,
                                         double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
  if (sigma == 0.0) return samples;
  std::mt19937_64 rng(seed);
  for (auto& s : samples) {
    const double scale = sigma * s.values.cwiseAbs().maxCoeff();
    std::normal_distribution<double> noise(0.0, scale > 0.0 ? scale : 1.0);
    for (Eigen::Index c = 0; c < s.values.cols(); ++c) {
      for (Eigen::Index r = 0; r < s.values.rows(); ++r) {
        const double eps = noise(rng);
        if (scale > 0.0) s.values(r, c) += eps;
      }
    }
  }
  return samples;
}

std::vector<double> default_snapshot_times() {
  std::vector<double> t(11);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = kMinTime + (kMaxTime - kMinTime) * static_cast<double>(i) / 10.0;
  }
  t.back() = kMaxTime;
  return t;
}

}  // namespace qsml

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

#include "qsml/lbm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qsml/error.hpp"

namespace qsml {

void LbmConfig::validate() const {
  if (nx < 8 || ny < 8) throw InvalidArgument("lattice must be at least 8 x 8");
  if (!(tau > 0.5)) throw InvalidArgument("tau must exceed 0.5");
  if (!(inflow_speed > 0.0 && inflow_speed < 0.1)) {
    throw InvalidArgument("inflow speed must lie in (0, 0.1)");
  }
  if (!(cylinder_diameter > 0.0)) throw InvalidArgument("cylinder diameter must be positive");
  const double r = 0.5 * cylinder_diameter;
  if (cylinder_x - r < 2.0 || cylinder_x + r > static_cast<double>(nx) - 3.0 ||
      cylinder_y - r < 1.0 || cylinder_y + r > static_cast<double>(ny) - 2.0) {
    throw InvalidArgument("cylinder must lie inside the domain");
  }
  if (snapshot_step == 0) throw InvalidArgument("snapshot step must be positive");
  if (warmup_steps > steps) throw InvalidArgument("warm-up longer than the run");
  if (!(perturbation >= 0.0)) throw InvalidArgument("perturbation must be >= 0");
}

std::string LbmConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "nx=" << nx << " ny=" << ny << " tau=" << tau
     << " D=" << cylinder_diameter << " cx=" << cylinder_x
     << " cy=" << cylinder_y << " U=" << inflow_speed << " steps=" << steps
     << " warmup=" << warmup_steps << " snapshot_step=" << snapshot_step
     << " seed=" << seed;
  return os.str();
}

namespace lbm {
std::array<double, kQ> equilibrium(double rho, double ux, double uy) {
  std::array<double, kQ> feq{};
  const double usq = 1.5 * (ux * ux + uy * uy);
  for (int i = 0; i < kQ; ++i) {
    const double cu = 3.0 * (kCx[i] * ux + kCy[i] * uy);
    feq[i] = kWeight[i] * rho * (1.0 + cu + 0.5 * cu * cu - usq);
  }
  return feq;
}
}  // namespace lbm

using lbm::kCx;
using lbm::kCy;
using lbm::kOpposite;
using lbm::kQ;

LbmSolver::LbmSolver(const LbmConfig& cfg, LbmBoundary boundary)
    : cfg_(cfg), boundary_(boundary), nx_(cfg.nx), ny_(cfg.ny) {
  cfg_.validate();
  const std::size_t cells = nx_ * ny_;
  f_.assign(kQ * cells, 0.0);
  next_.assign(kQ * cells, 0.0);
  solid_.assign(cells, 0);
  if (boundary_ == LbmBoundary::Channel || boundary_ == LbmBoundary::ClosedBox) {
    const double r2 = 0.25 * cfg_.cylinder_diameter * cfg_.cylinder_diameter;
    for (std::size_t y = 0; y < ny_; ++y) {
      for (std::size_t x = 0; x < nx_; ++x) {
        const double dx = static_cast<double>(x) - cfg_.cylinder_x;
        const double dy = static_cast<double>(y) - cfg_.cylinder_y;
        if (dx * dx + dy * dy <= r2) solid_[index(x, y)] = 1;
      }
    }
  }
  if (boundary_ == LbmBoundary::ClosedBox) {
    for (std::size_t x = 0; x < nx_; ++x) solid_[index(x, 0)] = solid_[index(x, ny_ - 1)] = 1;
    for (std::size_t y = 0; y < ny_; ++y) solid_[index(0, y)] = solid_[index(nx_ - 1, y)] = 1;
  }

  std::mt19937_64 rng(cfg_.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double phase = 2.0 * std::numbers::pi * u01(rng);
  const double amp = cfg_.perturbation * cfg_.inflow_speed * (0.5 + 0.5 * u01(rng));
  const bool open = boundary_ == LbmBoundary::Channel || boundary_ == LbmBoundary::EmptyChannel;
  const double ux0 = open ? cfg_.inflow_speed : 0.0;
  Eigen::MatrixXd rho = Eigen::MatrixXd::Ones(ny_, nx_);
  Eigen::MatrixXd ux = Eigen::MatrixXd::Constant(ny_, nx_, ux0);
  Eigen::MatrixXd uy(ny_, nx_);
  for (std::size_t y = 0; y < ny_; ++y) {
    for (std::size_t x = 0; x < nx_; ++x) {
      uy(y, x) = amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(x) /
                                    static_cast<double>(nx_) + phase);
    }
  }
  set_equilibrium(rho, ux, uy);
}

void LbmSolver::set_equilibrium(const Eigen::MatrixXd& rho,
                                const Eigen::MatrixXd& ux,
                                const Eigen::MatrixXd& uy) {
  const auto ny = static_cast<Eigen::Index>(ny_);
  const auto nx = static_cast<Eigen::Index>(nx_);
  if (rho.rows() != ny || rho.cols() != nx || ux.rows() != ny || ux.cols() != nx ||
      uy.rows() != ny || uy.cols() != nx) {
    throw InvalidArgument("macroscopic fields must be ny x nx");
  }
  for (std::size_t y = 0; y < ny_; ++y) {
    for (std::size_t x = 0; x < nx_; ++x) {
      const auto yy = static_cast<Eigen::Index>(y);
      const auto xx = static_cast<Eigen::Index>(x);
      const bool solid = solid_[index(x, y)] != 0;
      const auto feq = lbm::equilibrium(rho(yy, xx), solid ? 0.0 : ux(yy, xx),
                                        solid ? 0.0 : uy(yy, xx));
      for (int i = 0; i < kQ; ++i) f_[slot(i, x, y)] = feq[i];
    }
  }
}

void LbmSolver::step() {
  const double omega = 1.0 / cfg_.tau;
  const std::size_t plane = nx_ * ny_;
  std::array<double, kQ> fi{};
  std::array<std::size_t, kQ> row{};
  for (std::size_t y = 0; y < ny_; ++y) {
    for (int i = 0; i < kQ; ++i) row[i] = ((y + ny_ - kCy[i]) % ny_) * nx_;
    for (std::size_t x = 0; x < nx_; ++x) {
      const std::size_t here = y * nx_ + x;
      if (solid_[here]) {
        for (int i = 0; i < kQ; ++i) next_[i * plane + here] = f_[i * plane + here];
        continue;
      }
      const std::size_t xm = x == 0 ? nx_ - 1 : x - 1;
      const std::size_t xp = x + 1 == nx_ ? 0 : x + 1;
      double rho = 0.0, jx = 0.0, jy = 0.0;
      for (int i = 0; i < kQ; ++i) {
        const std::size_t src = row[i] + (kCx[i] > 0 ? xm : kCx[i] < 0 ? xp : x);
        fi[i] = solid_[src] ? f_[kOpposite[i] * plane + here] : f_[i * plane + src];
        rho += fi[i];
        jx += kCx[i] * fi[i];
        jy += kCy[i] * fi[i];
      }
      const auto feq = lbm::equilibrium(rho, jx / rho, jy / rho);
      for (int i = 0; i < kQ; ++i) {
        next_[i * plane + here] = fi[i] - omega * (fi[i] - feq[i]);
      }
    }
  }
  if (boundary_ == LbmBoundary::Channel || boundary_ == LbmBoundary::EmptyChannel) {
    const auto inflow = lbm::equilibrium(1.0, cfg_.inflow_speed, 0.0);
    for (std::size_t y = 0; y < ny_; ++y) {
      for (int i = 0; i < kQ; ++i) {
        next_[i * plane + index(0, y)] = inflow[i];
        next_[i * plane + index(nx_ - 1, y)] = next_[i * plane + index(nx_ - 2, y)];
      }
    }
  }
  f_.swap(next_);
  ++steps_;
}

void LbmSolver::run(std::size_t n_steps) {
  for (std::size_t s = 0; s < n_steps; ++s) step();
}

double LbmSolver::density(std::size_t x, std::size_t y) const {
  double rho = 0.0;
  for (int i = 0; i < kQ; ++i) rho += f(i, x, y);
  return rho;
}

std::array<double, 2> LbmSolver::velocity(std::size_t x, std::size_t y) const {
  if (solid_[index(x, y)]) return {0.0, 0.0};
  double rho = 0.0, jx = 0.0, jy = 0.0;
  for (int i = 0; i < kQ; ++i) {
    const double v = f(i, x, y);
    rho += v;
    jx += kCx[i] * v;
    jy += kCy[i] * v;
  }
  return {jx / rho, jy / rho};
}

double LbmSolver::total_mass() const {
  double m = 0.0;
  for (std::size_t y = 0; y < ny_; ++y) {
    for (std::size_t x = 0; x < nx_; ++x) {
      if (!solid_[index(x, y)]) m += density(x, y);
    }
  }
  return m;
}

bool LbmSolver::finite() const {
  return std::all_of(f_.begin(), f_.end(), [](double v) { return std::isfinite(v); });
}

Eigen::MatrixXd LbmSolver::speed_field() const {
  Eigen::MatrixXd out(ny_, nx_);
  for (std::size_t y = 0; y < ny_; ++y) {
    for (std::size_t x = 0; x < nx_; ++x) {
      const auto u = velocity(x, y);
      out(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) =
          std::hypot(u[0], u[1]) / cfg_.inflow_speed;
    }
  }
  return out;
}

std::array<std::size_t, 2> wake_probe(const LbmConfig& cfg) {
  const auto y = static_cast<std::size_t>(std::lround(cfg.cylinder_y));
  return {cfg.nx * 7 / 8, std::min(y, cfg.ny - 1)};
}

FlowRun simulate_flow(const LbmConfig& cfg) {
  LbmSolver solver(cfg);
  FlowRun run;
  run.probe = wake_probe(cfg);
  const auto fail = [&](std::size_t at) {
    throw NumericalError("lattice Boltzmann run became unstable at step " +
                         std::to_string(at) + " (" + cfg.describe() + ")");
  };
  for (std::size_t s = 1; s <= cfg.steps; ++s) {
    solver.step();
    if (s % 500 == 0 && !solver.finite()) fail(s);
    if (s <= cfg.warmup_steps) continue;
    const double uy = solver.velocity(run.probe[0], run.probe[1])[1];
    if (!std::isfinite(uy)) fail(s);
    run.probe_uy.push_back(uy);
    if ((s - cfg.warmup_steps) % cfg.snapshot_step == 0) {
      if (!solver.finite()) fail(s);
      run.snapshots.push_back(solver.speed_field());
      run.snapshot_steps.push_back(s);
    }
  }
  if (!run.probe_uy.empty()) {
    const auto [lo, hi] = std::minmax_element(run.probe_uy.begin(), run.probe_uy.end());
    run.probe_peak_to_peak = *hi - *lo;
  }
  return run;
}

bool probe_oscillates(const FlowRun& run, const LbmConfig& cfg, double fraction) {
  return run.probe_peak_to_peak > fraction * cfg.inflow_speed;
}

int label_flow(const LbmConfig& cfg, ReynoldsBand band) {
  cfg.validate();
  const double re = cfg.reynolds();
  if (re < band.low) return kNegativeLabel;
  if (re > band.high) return kPositiveLabel;
  throw InvalidArgument("Reynolds number " + std::to_string(re) +
                        " falls inside the rejected band [" +
                        std::to_string(band.low) + ", " +
                        std::to_string(band.high) + "]");
}

std::vector<FieldSample> lbm_simulate(const LbmConfig& cfg, ReynoldsBand band) {
  const int label = label_flow(cfg, band);
  const FlowRun run = simulate_flow(cfg);
  const bool oscillating = probe_oscillates(run, cfg);
  std::vector<FieldSample> out;
  for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
    FieldSample s;
    s.values = run.snapshots[k];
    s.label = label;
    s.meta = {{"step", static_cast<double>(run.snapshot_steps[k])},
              {"tau", cfg.tau},
              {"diameter", cfg.cylinder_diameter},
              {"cylinder_x", cfg.cylinder_x},
              {"reynolds", cfg.reynolds()},
              {"probe_ptp", run.probe_peak_to_peak},
              {"oscillating", oscillating ? 1.0 : 0.0}};
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace qsml

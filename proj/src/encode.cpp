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

#include "qsml/encode.hpp"

#include <cmath>

namespace qsml {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

void FieldSample::validate() const {
  if (!is_power_of_two(std::size_t(values.rows())) ||
      !is_power_of_two(std::size_t(values.cols()))) {
    throw InvalidArgument("grid dimensions must be powers of two");
  }
  if (!values.allFinite()) throw InvalidArgument("grid values must be finite");
  if (label != kPositiveLabel && label != kNegativeLabel) {
    throw InvalidArgument("label must be +1 or -1");
  }
}

std::size_t EncodedSample::n_qubits() const {
  return std::visit([](const auto& s) { return s.n_qubits(); }, state);
}

const RegisterLayout& EncodedSample::registers() const {
  return std::visit(
      [](const auto& s) -> const RegisterLayout& { return s.registers(); },
      state);
}

PureState amplitude_encode(std::span<const double> values,
                           RegisterLayout layout) {
  if (!is_power_of_two(values.size())) {
    throw InvalidArgument("amplitude encoding needs a power-of-two length");
  }
  Eigen::Map<const Eigen::VectorXd> v(values.data(), Eigen::Index(values.size()));
  if (!v.allFinite()) throw InvalidArgument("values must be finite");
  const double norm = v.norm();
  if (norm == 0.0) throw InvalidArgument("cannot encode a zero vector");
  AmplitudeVector<double> amps = (v / norm).cast<std::complex<double>>();
  return PureState(std::move(amps), std::move(layout));
}

PureState amplitude_encode(std::span<const double> values) {
  if (!is_power_of_two(values.size())) {
    throw InvalidArgument("amplitude encoding needs a power-of-two length");
  }
  return amplitude_encode(values,
                          single_register(qubits_for_dimension(values.size())));
}

PureState two_register_encode(const Eigen::MatrixXd& grid) {
  const auto rows = std::size_t(grid.rows());
  const auto cols = std::size_t(grid.cols());
  if (!is_power_of_two(rows) || !is_power_of_two(cols)) {
    throw InvalidArgument("grid dimensions must be powers of two");
  }
  const std::size_t nx = qubits_for_dimension(cols);
  const std::size_t ny = qubits_for_dimension(rows);
  if (nx == 0 || ny == 0) {
    throw InvalidArgument("two-register encoding needs at least 2 rows and 2 columns");
  }
  RegisterLayout layout{Register{"x", 0, nx}, Register{"y", nx, ny}};
  // Eigen storage is column-major: element (j, i) sits at i * rows + j.
  return amplitude_encode(std::span<const double>(grid.data(), rows * cols),
                          std::move(layout));
}

namespace {
double activate(double v, double a, double b) {
  if (!std::isfinite(v)) throw InvalidArgument("activation input not finite");
  return std::tanh(a * (std::abs(v) - b));
}

void check_slope(double a, double b) {
  if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("tanh activation needs a > 0 and finite b");
  }
}
}  // namespace

Eigen::MatrixXd tanh_activation(const Eigen::MatrixXd& values, double a,
                                double b) {
  check_slope(a, b);
  return values.unaryExpr([=](double v) { return activate(v, a, b); });
}

std::vector<double> tanh_activation(std::span<const double> values, double a,
                                    double b) {
  check_slope(a, b);
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(activate(v, a, b));
  return out;
}

Eigen::MatrixXd truncate_late_time(const Eigen::MatrixXd& grid,
                                   double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("truncation fraction must lie in (0, 1]");
  }
  const auto width =
      Eigen::Index(std::ceil(fraction * double(grid.cols()) - 1e-9));
  if (!is_power_of_two(std::size_t(width))) {
    throw InvalidArgument("truncated width " + std::to_string(width) +
                          " is not a power of two");
  }
  return grid.rightCols(width);
}

Eigen::MatrixXd subsample(const Eigen::MatrixXd& grid, Eigen::Index target_rows,
                          Eigen::Index target_cols, SubsampleMode mode) {
  if (target_rows <= 0 || target_cols <= 0 ||
      !is_power_of_two(std::size_t(target_rows)) ||
      !is_power_of_two(std::size_t(target_cols)) ||
      grid.rows() % target_rows != 0 || grid.cols() % target_cols != 0) {
    throw InvalidArgument("subsample targets must be powers of two dividing the grid");
  }
  const Eigen::Index sr = grid.rows() / target_rows;
  const Eigen::Index sc = grid.cols() / target_cols;
  Eigen::MatrixXd out(target_rows, target_cols);
  for (Eigen::Index c = 0; c < target_cols; ++c) {
    for (Eigen::Index r = 0; r < target_rows; ++r) {
      out(r, c) = mode == SubsampleMode::Stride
                      ? grid(r * sr, c * sc)
                      : grid.block(r * sr, c * sc, sr, sc).mean();
    }
  }
  return out;
}

EncodedSample to_fourier_basis(const EncodedSample& sample) {
  if (sample.basis == Basis::Fourier) {
    throw InvalidArgument("sample is already in the Fourier basis");
  }
  const auto* pure = std::get_if<PureState>(&sample.state);
  if (pure == nullptr) {
    throw InvalidArgument("Fourier basis change needs a pure state");
  }
  PureState out = *pure;
  for (const auto& reg : pure->registers()) out = qft(std::move(out), reg.name);
  return EncodedSample{std::move(out), sample.label, Basis::Fourier,
                       sample.coarse_grained};
}

std::set<std::size_t> coarse_grain_keep_set(const RegisterLayout& layout,
                                            double keep_fraction,
                                            KeptHalf half) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw InvalidArgument("keep fraction must lie in (0, 1]");
  }
  std::set<std::size_t> keep;
  for (const auto& reg : layout) {
    const auto count = std::size_t(std::lround(keep_fraction * double(reg.size)));
    const std::size_t start =
        half == KeptHalf::LowOrder ? reg.first + reg.size - count : reg.first;
    for (std::size_t k = 0; k < count; ++k) keep.insert(start + k);
  }
  if (keep.empty()) throw InvalidArgument("coarse-graining would keep no qubits");
  return keep;
}

EncodedSample coarse_grain(const EncodedSample& sample, double keep_fraction,
                           KeptHalf half) {
  const auto* pure = std::get_if<PureState>(&sample.state);
  if (pure == nullptr) {
    throw InvalidArgument("coarse-graining needs a pure state");
  }
  const auto keep = coarse_grain_keep_set(pure->registers(), keep_fraction, half);
  return EncodedSample{partial_trace(*pure, keep), sample.label, sample.basis,
                       true};
}

namespace {
EncodedSample finish(PureState state, int label, const EncodingOptions& opts) {
  EncodedSample out{std::move(state), label, Basis::Real, false};
  if (opts.basis == Basis::Fourier) out = to_fourier_basis(out);
  if (opts.coarse_grain) out = coarse_grain(out, opts.keep_fraction, opts.kept_half);
  return out;
}
}  // namespace

EncodedSample encode_wave(const FieldSample& sample,
                          const EncodingOptions& opts) {
  sample.validate();
  if (sample.values.rows() != 1) {
    throw InvalidArgument("wave samples must be one-dimensional");
  }
  const Eigen::RowVectorXd row = sample.values.row(0);
  const auto n = qubits_for_dimension(std::size_t(row.size()));
  auto state = amplitude_encode(
      std::span<const double>(row.data(), std::size_t(row.size())),
      single_register(n, "x"));
  return finish(std::move(state), sample.label, opts);
}

EncodedSample encode_flow(const FieldSample& sample,
                          const EncodingOptions& opts) {
  sample.validate();
  Eigen::MatrixXd grid = truncate_late_time(sample.values, opts.truncate_fraction);
  grid = subsample(grid, opts.subsample_rows, opts.subsample_cols,
                   opts.subsample_mode);
  if (opts.activation) {
    const double b = opts.tanh_b.value_or(grid.cwiseAbs().mean());
    grid = tanh_activation(grid, opts.tanh_a, b);
  }
  return finish(two_register_encode(grid), sample.label, opts);
}

}  // namespace qsml

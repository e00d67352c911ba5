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
#include "qsml/encode.hpp"

using namespace qsml;

namespace {
std::vector<double> random_values(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

double max_dev(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}
}  // namespace

TEST(AmplitudeEncode, BasisVector) {
  const std::vector<double> v{1, 0, 0, 0};
  const auto s = amplitude_encode(v);
  EXPECT_EQ(s.n_qubits(), 2u);
  EXPECT_EQ(s.amplitudes()(0), std::complex<double>(1));
}

TEST(AmplitudeEncode, Normalizes) {
  const std::vector<double> v{3, 4};
  const auto s = amplitude_encode(v);
  EXPECT_NEAR(s.amplitudes()(0).real(), 0.6, 1e-15);
  EXPECT_NEAR(s.amplitudes()(1).real(), 0.8, 1e-15);
  const std::vector<double> ones(8, 1.0);
  const auto u = amplitude_encode(ones);
  for (int i = 0; i < 8; ++i) {
    EXPECT_NEAR(u.amplitudes()(i).real(), 1.0 / std::sqrt(8.0), 1e-15);
  }
}

TEST(AmplitudeEncode, KeepsSigns) {
  const std::vector<double> v{-1, 1};
  const auto s = amplitude_encode(v);
  EXPECT_LT(s.amplitudes()(0).real(), 0.0);
}

TEST(AmplitudeEncode, Errors) {
  EXPECT_THROW(amplitude_encode(std::vector<double>{0, 0}), InvalidArgument);
  EXPECT_THROW(amplitude_encode(std::vector<double>{1, 2, 3}), InvalidArgument);
}

TEST(AmplitudeEncode, ScaleInvariant) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> scale(1e-6, 1e6);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = random_values(16, rng);
    const double c = scale(rng);
    std::vector<double> w = v;
    for (auto& x : w) x *= c;
    EXPECT_LE(max_dev(amplitude_encode(v).amplitudes(),
                      amplitude_encode(w).amplitudes()),
              1e-12);
  }
}

TEST(TwoRegisterEncode, SingleCell) {
  Eigen::MatrixXd g(2, 2);
  g << 1, 0, 0, 0;
  const auto s = two_register_encode(g);
  EXPECT_EQ(s.amplitudes()(0), std::complex<double>(1));
  EXPECT_EQ(s.registers()[0], (Register{"x", 0, 1}));
  EXPECT_EQ(s.registers()[1], (Register{"y", 1, 1}));
}

TEST(TwoRegisterEncode, DiagonalIsBell) {
  Eigen::MatrixXd g(2, 2);
  g << 1, 0, 0, 1;
  g /= std::sqrt(2.0);
  const auto s = two_register_encode(g);
  EXPECT_NEAR(s.amplitudes()(0b00).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.amplitudes()(0b11).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(s.amplitudes()(0b01)), 0.0, 1e-15);
}

TEST(TwoRegisterEncode, FlatIndexOracle) {
  // Column index i (x) goes to the first register, row index j (y) second.
  std::mt19937_64 rng(2);
  for (auto [rows, cols] : {std::pair{4, 4}, std::pair{2, 8}, std::pair{8, 4}}) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Random(rows, cols);
    const double norm = g.norm();
    const auto s = two_register_encode(g);
    for (int i = 0; i < cols; ++i) {
      for (int j = 0; j < rows; ++j) {
        EXPECT_DOUBLE_EQ(s.amplitudes()(i * rows + j).real(), g(j, i) / norm);
      }
    }
  }
}

TEST(TwoRegisterEncode, Errors) {
  EXPECT_THROW(two_register_encode(Eigen::MatrixXd::Zero(4, 4)), InvalidArgument);
  EXPECT_THROW(two_register_encode(Eigen::MatrixXd::Ones(3, 4)), InvalidArgument);
}

TEST(TanhActivation, Examples) {
  EXPECT_EQ(tanh_activation(std::vector<double>{0.0}, 1, 0)[0], 0.0);
  // Direct evaluation of tanh(1) = (e^2 - 1)/(e^2 + 1).
  const double e2 = std::exp(2.0);
  EXPECT_NEAR(tanh_activation(std::vector<double>{-1.0}, 1, 0)[0],
              (e2 - 1) / (e2 + 1), 1e-15);
  EXPECT_NEAR(tanh_activation(std::vector<double>{-1.0}, 1, 0)[0], 0.7616, 1e-4);
  EXPECT_EQ(tanh_activation(std::vector<double>{0.5}, 2, 0.5)[0], 0.0);
}

TEST(TanhActivation, Errors) {
  EXPECT_THROW(tanh_activation(std::vector<double>{1.0}, 0.0, 0.0), InvalidArgument);
  EXPECT_THROW(tanh_activation(std::vector<double>{INFINITY}, 1.0, 0.0),
               InvalidArgument);
}

TEST(TanhActivation, OutputInOpenInterval) {
  Eigen::MatrixXd g = 5.0 * Eigen::MatrixXd::Random(8, 8);
  const auto out = tanh_activation(g, 3.0, 0.5);
  EXPECT_LT(out.cwiseAbs().maxCoeff(), 1.0);
}

TEST(Truncate, KeepsLastColumns) {
  Eigen::MatrixXd g(4, 8);
  for (int c = 0; c < 8; ++c) g.col(c).setConstant(c);
  const auto t = truncate_late_time(g, 0.5);
  ASSERT_EQ(t.cols(), 4);
  EXPECT_EQ(t(0, 0), 4.0);
  EXPECT_EQ(t(3, 3), 7.0);
  EXPECT_EQ(truncate_late_time(g, 1.0), g);
  EXPECT_EQ(truncate_late_time(Eigen::MatrixXd::Ones(128, 128), 0.25).cols(), 32);
  EXPECT_THROW(truncate_late_time(g, 0.75), InvalidArgument);
  EXPECT_THROW(truncate_late_time(g, 0.0), InvalidArgument);
}

TEST(Subsample, StrideStart) {
  Eigen::MatrixXd g(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) g(r, c) = 4 * r + c;
  }
  Eigen::MatrixXd expected(2, 2);
  expected << 0, 2, 8, 10;
  EXPECT_EQ(subsample(g, 2, 2), expected);
  EXPECT_EQ(subsample(g, 4, 4), g);
  Eigen::MatrixXd mean(2, 2);
  mean << 2.5, 4.5, 10.5, 12.5;
  EXPECT_EQ(subsample(g, 2, 2, SubsampleMode::BlockMean), mean);
  EXPECT_THROW(subsample(g, 3, 2), InvalidArgument);
  EXPECT_THROW(subsample(g, 8, 2), InvalidArgument);
}

TEST(Subsample, FlowGeometryGivesEightQubits) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Random(128, 128).cwiseAbs();
  const auto t = truncate_late_time(g, 0.25);
  const auto s = subsample(t, 16, 16);
  EXPECT_EQ(two_register_encode(s).n_qubits(), 8u);
  EXPECT_EQ(two_register_encode(t).n_qubits(), 12u);
}

TEST(FourierBasis, SingleQubit) {
  EncodedSample s{amplitude_encode(std::vector<double>{1, 0}), 1, Basis::Real, false};
  const auto f = to_fourier_basis(s);
  EXPECT_EQ(f.basis, Basis::Fourier);
  const auto& a = std::get<PureState>(f.state).amplitudes();
  EXPECT_NEAR(a(0).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(a(1).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(to_fourier_basis(f), InvalidArgument);
}

TEST(FourierBasis, TwoRegistersMatchKroneckerDft) {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd g = Eigen::MatrixXd::Random(4, 4);
  const auto psi = two_register_encode(g);
  EncodedSample s{psi, 1, Basis::Real, false};
  const auto f = to_fourier_basis(s);
  const auto dft = oracle::dft_matrix(4);
  Eigen::MatrixXcd kron(16, 16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) kron.block(4 * a, 4 * b, 4, 4) = dft(a, b) * dft;
  }
  EXPECT_LT(max_dev(std::get<PureState>(f.state).amplitudes(),
                    kron * psi.amplitudes()),
            1e-12);
}

TEST(FourierBasis, UniformGoesToZeroOnEachRegister) {
  const auto psi = two_register_encode(Eigen::MatrixXd::Ones(4, 8));
  const auto f = to_fourier_basis({psi, 1, Basis::Real, false});
  EXPECT_NEAR(std::abs(std::get<PureState>(f.state).amplitudes()(0)), 1.0, 1e-12);
}

TEST(FourierBasis, InvertedByInverseQft) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Random(8, 16);
    const auto psi = two_register_encode(g);
    auto f = std::get<PureState>(to_fourier_basis({psi, 1, Basis::Real, false}).state);
    EXPECT_NEAR(f.norm(), 1.0, 1e-12);
    f = inverse_qft(inverse_qft(std::move(f), "x"), "y");
    EXPECT_LE(max_dev(f.amplitudes(), psi.amplitudes()), 1e-10);
  }
}

TEST(CoarseGrain, KeepsLowOrderHalfByDefault) {
  const RegisterLayout layout{{"x", 0, 4}, {"y", 4, 4}};
  EXPECT_EQ(coarse_grain_keep_set(layout, 0.5, KeptHalf::LowOrder),
            (std::set<std::size_t>{2, 3, 6, 7}));
  EXPECT_EQ(coarse_grain_keep_set(layout, 0.5, KeptHalf::HighOrder),
            (std::set<std::size_t>{0, 1, 4, 5}));
}

TEST(CoarseGrain, TwelveToSix) {
  std::mt19937_64 rng(5);
  const auto psi = PureState(oracle::random_state(12, rng), single_register(12, "x"));
  const auto f = to_fourier_basis({psi, -1, Basis::Real, false});
  const auto cg = coarse_grain(f);
  const auto& rho = std::get<MixedState>(cg.state);
  EXPECT_EQ(rho.n_qubits(), 6u);
  EXPECT_TRUE(cg.coarse_grained);
  EXPECT_EQ(cg.basis, Basis::Fourier);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-10);
  EXPECT_GE(rho.min_eigenvalue(), -1e-10);
}

TEST(CoarseGrain, ProductStateGivesKeptFactor) {
  std::mt19937_64 rng(6);
  const auto top = oracle::random_state(2, rng);
  const auto low = oracle::random_state(2, rng);
  Eigen::VectorXcd psi(16);
  for (int a = 0; a < 4; ++a) psi.segment(4 * a, 4) = top(a) * low;
  const auto cg = coarse_grain({PureState(psi), 1, Basis::Fourier, false});
  EXPECT_LT(max_dev(std::get<MixedState>(cg.state).matrix(), low * low.adjoint()),
            1e-12);
}

TEST(CoarseGrain, RandomFourQubitMatchesDenseOracle) {
  std::mt19937_64 rng(7);
  const auto psi = oracle::random_state(4, rng);
  const auto cg = coarse_grain({PureState(psi), 1, Basis::Fourier, false}, 0.5,
                               KeptHalf::HighOrder);
  EXPECT_LT(max_dev(std::get<MixedState>(cg.state).matrix(),
                    oracle::partial_trace(psi, 4, {0, 1})),
            1e-12);
}

TEST(Pipeline, FlowIsBitReproducible) {
  FieldSample f{Eigen::MatrixXd::Random(128, 128).cwiseAbs(), 1, {}};
  EncodingOptions opts;
  opts.basis = Basis::Fourier;
  const auto a = encode_flow(f, opts);
  const auto b = encode_flow(f, opts);
  EXPECT_EQ(a.n_qubits(), 8u);
  EXPECT_EQ(std::get<PureState>(a.state).amplitudes(),
            std::get<PureState>(b.state).amplitudes());
}

TEST(Pipeline, WaveEncodings) {
  std::mt19937_64 rng(8);
  FieldSample f{Eigen::RowVectorXd::Random(4096), -1, {}};
  EncodingOptions opts;
  EXPECT_EQ(encode_wave(f, opts).n_qubits(), 12u);
  opts.basis = Basis::Fourier;
  opts.coarse_grain = true;
  const auto cg = encode_wave(f, opts);
  EXPECT_EQ(cg.n_qubits(), 6u);
  EXPECT_TRUE(std::holds_alternative<MixedState>(cg.state));
}

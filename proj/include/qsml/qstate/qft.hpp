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

#include <numbers>
#include <string_view>
#include <vector>

#include "qsml/qstate/gates.hpp"

namespace qsml {

/// Gate sequence of the quantum Fourier transform on `reg`, bit-reversal
/// swaps included, so that amplitude k of the output is
/// sum_j x_j exp(2 pi i j k / N) / sqrt(N) with qubit reg.first as the MSB.
/// m(m+1)/2 Hadamard/controlled-phase gates plus floor(m/2) swaps.
inline std::vector<GateOp> qft_circuit(const Register& reg) {
  std::vector<GateOp> ops;
  const std::size_t m = reg.size;
  ops.reserve(m * (m + 1) / 2 + m / 2);
  for (std::size_t j = 0; j < m; ++j) {
    ops.push_back(gate::h(reg.first + j));
    for (std::size_t k = j + 1; k < m; ++k) {
      const double phi =
          2.0 * std::numbers::pi / double(std::size_t{1} << (k - j + 1));
      ops.push_back(gate::cphase(reg.first + k, reg.first + j, phi));
    }
  }
  for (std::size_t j = 0; j < m / 2; ++j) {
    ops.push_back(gate::swap(reg.first + j, reg.first + m - 1 - j));
  }
  return ops;
}

template <typename Real>
BasicPureState<Real> qft(BasicPureState<Real> state, std::string_view reg) {
  const Register r = state.find_register(reg);
  auto* amps = state.mutable_amplitudes().data();
  for (const auto& op : qft_circuit(r)) {
    kernels::apply(amps, state.n_qubits(), op);
  }
  return state;
}

template <typename Real>
BasicPureState<Real> inverse_qft(BasicPureState<Real> state,
                                 std::string_view reg) {
  const Register r = state.find_register(reg);
  const auto ops = qft_circuit(r);
  auto* amps = state.mutable_amplitudes().data();
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    kernels::apply(amps, state.n_qubits(), *it, /*inverse=*/true);
  }
  return state;
}

}  // namespace qsml

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
#include <string>
#include <vector>

#include "qsml/qstate.hpp"

namespace qsml {

/// Trainable angles in radians.
using ParamVector = Eigen::VectorXd;

enum class LayerKind { Rotation, Entangling, Conv, Pool };

/// One gate of a template. `slot` indexes the parameter vector for
/// rotation gates; fixed gates use kFixed.
struct Placement {
  static constexpr std::ptrdiff_t kFixed = -1;

  GateKind kind = GateKind::CNOT;
  std::array<std::size_t, 2> qubits{0, 0};
  std::ptrdiff_t slot = kFixed;

  GateOp bind(const ParamVector& params) const {
    GateOp g{kind, qubits, std::nullopt};
    if (slot != kFixed) g.angle = params(slot);
    return g;
  }
};

struct Layer {
  LayerKind kind = LayerKind::Rotation;
  std::vector<Placement> gates;
  std::vector<std::size_t> active_after;  // qubits still in play
};

struct Readout {
  std::string register_name;
  std::size_t qubit = 0;
};

/// Structural description of a parameterized circuit.
class CircuitTemplate {
 public:
  CircuitTemplate(std::size_t n_qubits, RegisterLayout layout,
                  std::vector<Layer> layers, std::vector<Readout> readouts);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t num_params() const { return num_params_; }
  const RegisterLayout& registers() const { return layout_; }
  const std::vector<Layer>& layers() const { return layers_; }
  const std::vector<Readout>& readouts() const { return readouts_; }

  /// Gates in application order.
  const std::vector<Placement>& gates() const { return flat_; }

  std::size_t count_gates(LayerKind layer_kind, GateKind gate_kind) const;

 private:
  std::size_t n_qubits_;
  RegisterLayout layout_;
  std::vector<Layer> layers_;
  std::vector<Readout> readouts_;
  std::vector<Placement> flat_;
  std::size_t num_params_ = 0;
};

/// depth x [RY, RZ on every qubit; CNOT ring k -> k+1 mod n]. Readout qubit 0.
CircuitTemplate build_dqnn(std::size_t n_qubits, std::size_t depth,
                           const std::string& register_name = "x");

/// Conv/pool stages down to one active qubit on a power-of-two register.
CircuitTemplate build_qcnn(std::size_t n_qubits,
                           const std::string& register_name = "x");

/// Independent QCNNs on registers "x" (first) and "y".
CircuitTemplate build_double_qcnn(std::size_t nx_qubits, std::size_t ny_qubits);

/// i.i.d. uniform angles in [-scale, scale].
ParamVector initial_params(const CircuitTemplate& tmpl, std::uint64_t seed,
                           double scale = 0.1);

void check_params(const CircuitTemplate& tmpl, const ParamVector& params);

PureState apply_circuit(const CircuitTemplate& tmpl, const ParamVector& params,
                        PureState state);
MixedState apply_circuit(const CircuitTemplate& tmpl, const ParamVector& params,
                         MixedState state);

namespace detail {
// Unchecked raw forms used by the training loop.
void run_circuit(const CircuitTemplate& tmpl, const ParamVector& params,
                 AmplitudeVector<double>& psi);
void run_circuit(const CircuitTemplate& tmpl, const ParamVector& params,
                 DensityMatrix<double>& rho);
}  // namespace detail

}  // namespace qsml

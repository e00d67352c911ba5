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

#include "qsml/ansatz.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "qsml/encode.hpp"

namespace qsml {

CircuitTemplate::CircuitTemplate(std::size_t n_qubits, RegisterLayout layout,
                                 std::vector<Layer> layers,
                                 std::vector<Readout> readouts)
    : n_qubits_(n_qubits),
      layout_(std::move(layout)),
      layers_(std::move(layers)),
      readouts_(std::move(readouts)) {
  if (n_qubits_ == 0 || n_qubits_ > kMaxQubits) {
    throw InvalidArgument("template qubit count must be in [1, 24]");
  }
  validate_layout(layout_, n_qubits_);

  std::set<std::size_t> active;
  for (std::size_t q = 0; q < n_qubits_; ++q) active.insert(q);
  std::vector<bool> slot_seen;
  for (const auto& layer : layers_) {
    for (const auto& p : layer.gates) {
      GateOp probe{p.kind, p.qubits, std::nullopt};
      if (p.slot != Placement::kFixed) probe.angle = 0.0;
      validate_gate(probe, n_qubits_);
      for (std::size_t k = 0; k < gate_arity(p.kind); ++k) {
        if (!active.count(p.qubits[k])) {
          throw InvalidArgument("gate acts on an inactive qubit");
        }
      }
      if (p.slot != Placement::kFixed) {
        const auto s = std::size_t(p.slot);
        if (slot_seen.size() <= s) slot_seen.resize(s + 1, false);
        if (slot_seen[s]) throw InvalidArgument("parameter slot used twice");
        slot_seen[s] = true;
      }
      flat_.push_back(p);
    }
    const std::set<std::size_t> next(layer.active_after.begin(),
                                     layer.active_after.end());
    if (layer.kind == LayerKind::Pool) {
      if (next.size() >= active.size() ||
          !std::includes(active.begin(), active.end(), next.begin(), next.end())) {
        throw InvalidArgument("pool layers must strictly shrink the active set");
      }
    } else if (next != active) {
      throw InvalidArgument("only pool layers may change the active set");
    }
    active = next;
  }
  if (std::find(slot_seen.begin(), slot_seen.end(), false) != slot_seen.end()) {
    throw InvalidArgument("parameter slots must be contiguous from 0");
  }
  num_params_ = slot_seen.size();
  for (const auto& r : readouts_) {
    const auto& reg = find_register(layout_, r.register_name);
    if (r.qubit < reg.first || r.qubit >= reg.first + reg.size) {
      throw InvalidArgument("readout qubit outside its register");
    }
    if (!active.count(r.qubit)) {
      throw InvalidArgument("readout qubit is not active after the last layer");
    }
  }
}

std::size_t CircuitTemplate::count_gates(LayerKind layer_kind,
                                         GateKind gate_kind) const {
  std::size_t n = 0;
  for (const auto& layer : layers_) {
    if (layer.kind != layer_kind) continue;
    n += std::size_t(std::count_if(layer.gates.begin(), layer.gates.end(),
                                   [&](const Placement& p) {
                                     return p.kind == gate_kind;
                                   }));
  }
  return n;
}

namespace {
std::vector<std::size_t> all_qubits(std::size_t first, std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = first + k;
  return out;
}

// Conv/pool stages of one QCNN on qubits [first, first + n). Slots start at
// `slot` and advance.
void append_qcnn(std::size_t first, std::size_t n, std::ptrdiff_t& slot,
                 std::vector<Layer>& layers) {
  std::vector<std::size_t> active = all_qubits(first, n);
  while (active.size() > 1) {
    Layer conv{LayerKind::Conv, {}, active};
    Layer pool{LayerKind::Pool, {}, {}};
    for (std::size_t k = 0; k + 1 < active.size(); k += 2) {
      const std::size_t lo = active[k];
      const std::size_t hi = active[k + 1];
      conv.gates.push_back({GateKind::RY, {lo, 0}, slot++});
      conv.gates.push_back({GateKind::RY, {hi, 0}, slot++});
      conv.gates.push_back({GateKind::CNOT, {lo, hi}, Placement::kFixed});
      conv.gates.push_back({GateKind::RY, {lo, 0}, slot++});
      conv.gates.push_back({GateKind::RY, {hi, 0}, slot++});
      // Pool: the discarded (upper-index) qubit controls its kept partner.
      pool.gates.push_back({GateKind::CNOT, {hi, lo}, Placement::kFixed});
      pool.active_after.push_back(lo);
    }
    layers.push_back(std::move(conv));
    active = pool.active_after;
    layers.push_back(std::move(pool));
  }
}

void require_qcnn_size(std::size_t n) {
  if (n < 2 || !is_power_of_two(n)) {
    throw InvalidArgument("QCNN register size must be a power of two >= 2");
  }
}

// Pool layers shrink only their own register; the other register's qubits
// stay active, so active sets are merged across the two halves.
void merge_active(std::vector<Layer>& layers, const std::vector<std::size_t>& other) {
  for (auto& layer : layers) {
    layer.active_after.insert(layer.active_after.end(), other.begin(), other.end());
    std::sort(layer.active_after.begin(), layer.active_after.end());
  }
}
}  // namespace

CircuitTemplate build_dqnn(std::size_t n_qubits, std::size_t depth,
                           const std::string& register_name) {
  if (n_qubits == 0) throw InvalidArgument("DQNN needs at least one qubit");
  std::vector<Layer> layers;
  const auto everyone = all_qubits(0, n_qubits);
  std::ptrdiff_t slot = 0;
  for (std::size_t d = 0; d < depth; ++d) {
    Layer rot{LayerKind::Rotation, {}, everyone};
    for (std::size_t q = 0; q < n_qubits; ++q) {
      rot.gates.push_back({GateKind::RY, {q, 0}, slot++});
      rot.gates.push_back({GateKind::RZ, {q, 0}, slot++});
    }
    layers.push_back(std::move(rot));
    if (n_qubits > 1) {
      Layer ent{LayerKind::Entangling, {}, everyone};
      for (std::size_t q = 0; q < n_qubits; ++q) {
        ent.gates.push_back(
            {GateKind::CNOT, {q, (q + 1) % n_qubits}, Placement::kFixed});
      }
      layers.push_back(std::move(ent));
    }
  }
  return CircuitTemplate(n_qubits, single_register(n_qubits, register_name),
                         std::move(layers), {Readout{register_name, 0}});
}

CircuitTemplate build_qcnn(std::size_t n_qubits,
                           const std::string& register_name) {
  require_qcnn_size(n_qubits);
  std::vector<Layer> layers;
  std::ptrdiff_t slot = 0;
  append_qcnn(0, n_qubits, slot, layers);
  return CircuitTemplate(n_qubits, single_register(n_qubits, register_name),
                         std::move(layers), {Readout{register_name, 0}});
}

CircuitTemplate build_double_qcnn(std::size_t nx_qubits, std::size_t ny_qubits) {
  require_qcnn_size(nx_qubits);
  require_qcnn_size(ny_qubits);
  std::ptrdiff_t slot = 0;
  std::vector<Layer> x_layers;
  std::vector<Layer> y_layers;
  append_qcnn(0, nx_qubits, slot, x_layers);
  append_qcnn(nx_qubits, ny_qubits, slot, y_layers);
  merge_active(x_layers, all_qubits(nx_qubits, ny_qubits));
  merge_active(y_layers, {0});  // x register is pooled down to qubit 0
  std::vector<Layer> layers = std::move(x_layers);
  layers.insert(layers.end(), std::make_move_iterator(y_layers.begin()),
                std::make_move_iterator(y_layers.end()));
  RegisterLayout layout{Register{"x", 0, nx_qubits},
                        Register{"y", nx_qubits, ny_qubits}};
  return CircuitTemplate(nx_qubits + ny_qubits, std::move(layout),
                         std::move(layers),
                         {Readout{"x", 0}, Readout{"y", nx_qubits}});
}

ParamVector initial_params(const CircuitTemplate& tmpl, std::uint64_t seed,
                           double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  ParamVector p(static_cast<Eigen::Index>(tmpl.num_params()));
  for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = dist(rng);
  return p;
}

void check_params(const CircuitTemplate& tmpl, const ParamVector& params) {
  if (std::size_t(params.size()) != tmpl.num_params()) {
    throw InvalidArgument("expected " + std::to_string(tmpl.num_params()) +
                          " parameters, got " + std::to_string(params.size()));
  }
  if (!params.allFinite()) throw InvalidArgument("parameters must be finite");
}

namespace detail {
void run_circuit(const CircuitTemplate& tmpl, const ParamVector& params,
                 AmplitudeVector<double>& psi) {
  for (const auto& p : tmpl.gates()) {
    kernels::apply(psi.data(), tmpl.n_qubits(), p.bind(params));
  }
}

void run_circuit(const CircuitTemplate& tmpl, const ParamVector& params,
                 DensityMatrix<double>& rho) {
  for (const auto& p : tmpl.gates()) {
    conjugate_inplace(rho, tmpl.n_qubits(), p.bind(params));
  }
}
}  // namespace detail

namespace {
void check_state(const CircuitTemplate& tmpl, std::size_t n_qubits) {
  if (n_qubits != tmpl.n_qubits()) {
    throw InvalidArgument("circuit acts on " + std::to_string(tmpl.n_qubits()) +
                          " qubits, state has " + std::to_string(n_qubits));
  }
}
}  // namespace

PureState apply_circuit(const CircuitTemplate& tmpl, const ParamVector& params,
                        PureState state) {
  check_params(tmpl, params);
  check_state(tmpl, state.n_qubits());
  detail::run_circuit(tmpl, params, state.mutable_amplitudes());
  return state;
}

MixedState apply_circuit(const CircuitTemplate& tmpl, const ParamVector& params,
                         MixedState state) {
  check_params(tmpl, params);
  check_state(tmpl, state.n_qubits());
  detail::run_circuit(tmpl, params, state.mutable_matrix());
  return state;
}

}  // namespace qsml

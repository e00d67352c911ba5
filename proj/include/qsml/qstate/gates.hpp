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

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include "qsml/qstate/state.hpp"

namespace qsml {

enum class GateKind { H, X, Y, Z, RX, RY, RZ, CNOT, CZ, CPHASE, SWAP };

constexpr std::size_t gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::CPHASE:
    case GateKind::SWAP:
      return 2;
    default:
      return 1;
  }
}

constexpr bool gate_is_parameterized(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY ||
         kind == GateKind::RZ || kind == GateKind::CPHASE;
}

std::string to_string(GateKind kind);

/// A gate placed on concrete qubits. For CNOT targets = {control, target};
/// for CPHASE the phase e^{i angle} lands on |11>.
struct GateOp {
  GateKind kind = GateKind::H;
  std::array<std::size_t, 2> targets{0, 0};
  std::optional<double> angle;
};

namespace gate {
inline GateOp h(std::size_t q) { return {GateKind::H, {q, 0}, std::nullopt}; }
inline GateOp x(std::size_t q) { return {GateKind::X, {q, 0}, std::nullopt}; }
inline GateOp y(std::size_t q) { return {GateKind::Y, {q, 0}, std::nullopt}; }
inline GateOp z(std::size_t q) { return {GateKind::Z, {q, 0}, std::nullopt}; }
inline GateOp rx(std::size_t q, double theta) { return {GateKind::RX, {q, 0}, theta}; }
inline GateOp ry(std::size_t q, double theta) { return {GateKind::RY, {q, 0}, theta}; }
inline GateOp rz(std::size_t q, double theta) { return {GateKind::RZ, {q, 0}, theta}; }
inline GateOp cnot(std::size_t control, std::size_t target) {
  return {GateKind::CNOT, {control, target}, std::nullopt};
}
inline GateOp cz(std::size_t a, std::size_t b) {
  return {GateKind::CZ, {a, b}, std::nullopt};
}
inline GateOp cphase(std::size_t a, std::size_t b, double phi) {
  return {GateKind::CPHASE, {a, b}, phi};
}
inline GateOp swap(std::size_t a, std::size_t b) {
  return {GateKind::SWAP, {a, b}, std::nullopt};
}
}  // namespace gate

inline void validate_gate(const GateOp& g, std::size_t n_qubits) {
  const std::size_t arity = gate_arity(g.kind);
  for (std::size_t k = 0; k < arity; ++k) {
    if (g.targets[k] >= n_qubits) {
      throw InvalidArgument("gate target " + std::to_string(g.targets[k]) +
                            " out of range for " + std::to_string(n_qubits) +
                            " qubits");
    }
  }
  if (arity == 2 && g.targets[0] == g.targets[1]) {
    throw InvalidArgument("two-qubit gate targets must be distinct");
  }
  if (gate_is_parameterized(g.kind) != g.angle.has_value()) {
    throw InvalidArgument(gate_is_parameterized(g.kind)
                              ? "parameterized gate is missing its angle"
                              : "fixed gate must not carry an angle");
  }
  if (g.angle && !std::isfinite(*g.angle)) {
    throw InvalidArgument("gate angle must be finite");
  }
}

namespace kernels {

// All kernels act in place on a contiguous block of 2^n amplitudes.

template <typename Real>
void apply_1q(std::complex<Real>* amps, std::size_t n_qubits, std::size_t q,
              std::complex<Real> m00, std::complex<Real> m01,
              std::complex<Real> m10, std::complex<Real> m11) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t stride = qubit_mask(n_qubits, q);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const auto a0 = amps[i];
      const auto a1 = amps[i + stride];
      amps[i] = m00 * a0 + m01 * a1;
      amps[i + stride] = m10 * a0 + m11 * a1;
    }
  }
}

// Real-valued 2x2 matrix, e.g. H or RY.
template <typename Real>
void apply_1q_real(std::complex<Real>* amps, std::size_t n_qubits,
                   std::size_t q, Real m00, Real m01, Real m10, Real m11) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t stride = qubit_mask(n_qubits, q);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const auto a0 = amps[i];
      const auto a1 = amps[i + stride];
      amps[i] = m00 * a0 + m01 * a1;
      amps[i + stride] = m10 * a0 + m11 * a1;
    }
  }
}

template <typename Real>
void apply_diag_1q(std::complex<Real>* amps, std::size_t n_qubits,
                   std::size_t q, std::complex<Real> d0,
                   std::complex<Real> d1) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t stride = qubit_mask(n_qubits, q);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      amps[i] *= d0;
      amps[i + stride] *= d1;
    }
  }
}

template <typename Real>
void apply_x(std::complex<Real>* amps, std::size_t n_qubits, std::size_t q) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t stride = qubit_mask(n_qubits, q);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      std::swap(amps[i], amps[i + stride]);
    }
  }
}

template <typename Real>
void apply_cnot(std::complex<Real>* amps, std::size_t n_qubits,
                std::size_t control, std::size_t target) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t cmask = qubit_mask(n_qubits, control);
  const std::size_t tmask = qubit_mask(n_qubits, target);
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps[i], amps[i | tmask]);
  }
}

template <typename Real>
void apply_controlled_phase(std::complex<Real>* amps, std::size_t n_qubits,
                            std::size_t a, std::size_t b,
                            std::complex<Real> phase) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t both = qubit_mask(n_qubits, a) | qubit_mask(n_qubits, b);
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & both) == both) amps[i] *= phase;
  }
}

template <typename Real>
void apply_swap(std::complex<Real>* amps, std::size_t n_qubits, std::size_t a,
                std::size_t b) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t amask = qubit_mask(n_qubits, a);
  const std::size_t bmask = qubit_mask(n_qubits, b);
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & amask) && !(i & bmask)) std::swap(amps[i], amps[(i ^ amask) | bmask]);
  }
}

/// Applies g (or its inverse) without validation.
template <typename Real>
void apply(std::complex<Real>* amps, std::size_t n, const GateOp& g,
           bool inverse = false) {
  using C = std::complex<Real>;
  const std::size_t q = g.targets[0];
  const Real theta = g.angle ? Real(inverse ? -*g.angle : *g.angle) : Real(0);
  const Real c = std::cos(theta / 2);
  const Real s = std::sin(theta / 2);
  switch (g.kind) {
    case GateKind::H: {
      const Real r = Real(1) / std::sqrt(Real(2));
      apply_1q_real<Real>(amps, n, q, r, r, r, -r);
      break;
    }
    case GateKind::X:
      apply_x(amps, n, q);
      break;
    case GateKind::Y:
      apply_1q<Real>(amps, n, q, C(0), C(0, -1), C(0, 1), C(0));
      break;
    case GateKind::Z:
      apply_diag_1q<Real>(amps, n, q, C(1), C(-1));
      break;
    case GateKind::RX:
      apply_1q<Real>(amps, n, q, C(c), C(0, -s), C(0, -s), C(c));
      break;
    case GateKind::RY:
      apply_1q_real<Real>(amps, n, q, c, -s, s, c);
      break;
    case GateKind::RZ:
      apply_diag_1q<Real>(amps, n, q, C(c, -s), C(c, s));
      break;
    case GateKind::CNOT:
      apply_cnot(amps, n, g.targets[0], g.targets[1]);
      break;
    case GateKind::CZ:
      apply_controlled_phase<Real>(amps, n, g.targets[0], g.targets[1], C(-1));
      break;
    case GateKind::CPHASE:
      apply_controlled_phase<Real>(amps, n, g.targets[0], g.targets[1],
                                   std::polar(Real(1), theta));
      break;
    case GateKind::SWAP:
      apply_swap(amps, n, g.targets[0], g.targets[1]);
      break;
  }
}

}  // namespace kernels

/// Returns the state transformed by the gate's unitary.
template <typename Real>
BasicPureState<Real> apply_gate(BasicPureState<Real> state, const GateOp& g) {
  validate_gate(g, state.n_qubits());
  kernels::apply(state.mutable_amplitudes().data(), state.n_qubits(), g);
  return state;
}

/// In-place variant used by circuits.
template <typename Real>
void apply_gate_inplace(BasicPureState<Real>& state, const GateOp& g) {
  validate_gate(g, state.n_qubits());
  kernels::apply(state.mutable_amplitudes().data(), state.n_qubits(), g);
}

/// rho -> G rho G^dagger. The column-major matrix is treated as a 2n-qubit
/// vector vec(rho) whose first n qubits index columns and last n index rows,
/// so the map is conj(G) on the first half and G on the second.
template <typename Real>
void conjugate_inplace(DensityMatrix<Real>& rho, std::size_t n_qubits,
                       const GateOp& g, bool inverse = false) {
  std::complex<Real>* v = rho.data();
  const std::size_t n2 = 2 * n_qubits;
  GateOp rows = g;
  for (std::size_t k = 0; k < gate_arity(g.kind); ++k) rows.targets[k] += n_qubits;
  kernels::apply(v, n2, rows, inverse);
  switch (g.kind) {
    case GateKind::RY:
      kernels::apply(v, n2, g, inverse);  // real matrix
      break;
    case GateKind::Y:
      kernels::apply(v, n2, g, inverse);  // conj(Y) = -Y
      for (Eigen::Index i = 0; i < rho.size(); ++i) v[i] = -v[i];
      break;
    default:
      kernels::apply(v, n2, g, !inverse);  // symmetric: conj(G) = G^dagger
      break;
  }
}

template <typename Real>
BasicMixedState<Real> apply_gate(BasicMixedState<Real> state, const GateOp& g) {
  validate_gate(g, state.n_qubits());
  conjugate_inplace(state.mutable_matrix(), state.n_qubits(), g);
  return state;
}

inline std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CPHASE: return "CPHASE";
    case GateKind::SWAP: return "SWAP";
  }
  return "?";
}

}  // namespace qsml

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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qsml/qstate/state.hpp"

namespace qsml {

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

Pauli pauli_from_char(char c);

/// coefficient * (tensor product of the listed Pauli factors). Identity
/// factors are left out.
struct PauliTerm {
  double coefficient = 1.0;
  std::vector<std::pair<std::size_t, Pauli>> factors;  // sorted by qubit
};

/// Real linear combination of Pauli strings.
class Observable {
 public:
  Observable() = default;

  explicit Observable(std::vector<PauliTerm> terms) : terms_(std::move(terms)) {
    for (auto& t : terms_) {
      if (!std::isfinite(t.coefficient)) {
        throw InvalidArgument("observable coefficients must be finite");
      }
      std::sort(t.factors.begin(), t.factors.end());
      for (std::size_t k = 1; k < t.factors.size(); ++k) {
        if (t.factors[k].first == t.factors[k - 1].first) {
          throw InvalidArgument("Pauli string repeats qubit " +
                                std::to_string(t.factors[k].first));
        }
      }
    }
  }

  static Observable pauli(std::size_t qubit, Pauli p, double coefficient = 1.0) {
    return Observable({PauliTerm{coefficient, {{qubit, p}}}});
  }

  const std::vector<PauliTerm>& terms() const { return terms_; }

  /// Qubits touched by any term, sorted.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (const auto& t : terms_) {
      for (const auto& [q, p] : t.factors) out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  void validate(std::size_t n_qubits) const {
    for (std::size_t q : support()) {
      if (q >= n_qubits) {
        throw InvalidArgument("observable acts on qubit " + std::to_string(q) +
                              " of a " + std::to_string(n_qubits) +
                              "-qubit state");
      }
    }
  }

  friend Observable operator*(double a, Observable o) {
    for (auto& t : o.terms_) t.coefficient *= a;
    return o;
  }

  friend Observable operator+(Observable a, const Observable& b) {
    a.terms_.insert(a.terms_.end(), b.terms_.begin(), b.terms_.end());
    return a;
  }

  /// Product of observables with disjoint supports.
  friend Observable operator*(const Observable& a, const Observable& b) {
    std::vector<PauliTerm> out;
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        PauliTerm t{ta.coefficient * tb.coefficient, ta.factors};
        t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
        out.push_back(std::move(t));
      }
    }
    return Observable(std::move(out));
  }

 private:
  std::vector<PauliTerm> terms_;
};

namespace detail {

/// Bit masks of a Pauli string: P|i> = phase(i) |i ^ x_mask>, with
/// phase(i) = i^{y_count} (-1)^{popcount(i & z_mask)}.
struct PauliMasks {
  std::size_t x_mask = 0;
  std::size_t z_mask = 0;
  std::size_t y_count = 0;
};

inline PauliMasks masks_of(const PauliTerm& t, std::size_t n_qubits) {
  PauliMasks m;
  for (const auto& [q, p] : t.factors) {
    const std::size_t bit = qubit_mask(n_qubits, q);
    if (p == Pauli::X || p == Pauli::Y) m.x_mask |= bit;
    if (p == Pauli::Z || p == Pauli::Y) m.z_mask |= bit;
    if (p == Pauli::Y) ++m.y_count;
  }
  return m;
}

template <typename Real>
std::complex<Real> y_phase(std::size_t y_count) {
  switch (y_count % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

inline bool odd_parity(std::size_t v) { return (std::popcount(v) & 1) != 0; }

}  // namespace detail

/// out += coefficient * P |in> for one Pauli string.
template <typename Real>
void accumulate_pauli(const PauliTerm& t, std::size_t n_qubits,
                      const std::complex<Real>* in, std::complex<Real>* out,
                      std::complex<Real> scale = {1, 0}) {
  const auto m = detail::masks_of(t, n_qubits);
  const std::complex<Real> base =
      scale * Real(t.coefficient) * detail::y_phase<Real>(m.y_count);
  const std::size_t dim = std::size_t{1} << n_qubits;
  for (std::size_t i = 0; i < dim; ++i) {
    const auto v = detail::odd_parity(i & m.z_mask) ? -base : base;
    out[i ^ m.x_mask] += v * in[i];
  }
}

/// O |psi> as a raw vector.
template <typename Real>
AmplitudeVector<Real> apply_observable(const Observable& obs,
                                       const AmplitudeVector<Real>& psi,
                                       std::size_t n_qubits) {
  AmplitudeVector<Real> out = AmplitudeVector<Real>::Zero(psi.size());
  for (const auto& t : obs.terms()) {
    accumulate_pauli<Real>(t, n_qubits, psi.data(), out.data());
  }
  return out;
}

/// Dense matrix of the observable on n qubits.
template <typename Real>
DensityMatrix<Real> observable_matrix(const Observable& obs,
                                      std::size_t n_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  const DensityMatrix<Real> basis = DensityMatrix<Real>::Identity(dim, dim);
  DensityMatrix<Real> result = DensityMatrix<Real>::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (const auto& t : obs.terms()) {
      accumulate_pauli<Real>(t, n_qubits, basis.col(c).data(),
                             result.col(c).data());
    }
  }
  return result;
}

/// <psi|O|psi> on raw amplitudes; the imaginary part is rounding noise and
/// is dropped.
template <typename Real>
Real expectation_of(const AmplitudeVector<Real>& psi, std::size_t n_qubits,
                    const Observable& obs) {
  const std::size_t dim = std::size_t(psi.size());
  std::complex<Real> acc = 0;
  for (const auto& t : obs.terms()) {
    const auto m = detail::masks_of(t, n_qubits);
    std::complex<Real> term = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      const auto v = std::conj(psi(Eigen::Index(i ^ m.x_mask))) *
                     psi(Eigen::Index(i));
      term += detail::odd_parity(i & m.z_mask) ? -v : v;
    }
    acc += Real(t.coefficient) * detail::y_phase<Real>(m.y_count) * term;
  }
  return acc.real();
}

/// Tr(rho O) on a raw density matrix.
template <typename Real>
Real expectation_of(const DensityMatrix<Real>& rho, std::size_t n_qubits,
                    const Observable& obs) {
  const std::size_t dim = std::size_t(rho.rows());
  std::complex<Real> acc = 0;
  for (const auto& t : obs.terms()) {
    const auto m = detail::masks_of(t, n_qubits);
    std::complex<Real> term = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      const auto v = rho(Eigen::Index(i), Eigen::Index(i ^ m.x_mask));
      term += detail::odd_parity(i & m.z_mask) ? -v : v;
    }
    acc += Real(t.coefficient) * detail::y_phase<Real>(m.y_count) * term;
  }
  return acc.real();
}

template <typename Real>
Real expectation(const BasicPureState<Real>& state, const Observable& obs) {
  obs.validate(state.n_qubits());
  return expectation_of(state.amplitudes(), state.n_qubits(), obs);
}

template <typename Real>
Real expectation(const BasicMixedState<Real>& state, const Observable& obs) {
  obs.validate(state.n_qubits());
  return expectation_of(state.matrix(), state.n_qubits(), obs);
}

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default:
      throw InvalidArgument(std::string("unknown Pauli '") + c + "'");
  }
}

}  // namespace qsml

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

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsml/error.hpp"

namespace qsml {

/// Largest register the dense simulator accepts.
inline constexpr std::size_t kMaxQubits = 24;

template <typename Real>
using AmplitudeVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using DensityMatrix =
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// A named contiguous block of qubits [first, first + size).
struct Register {
  std::string name;
  std::size_t first = 0;
  std::size_t size = 0;

  bool operator==(const Register&) const = default;
};

using RegisterLayout = std::vector<Register>;

inline RegisterLayout single_register(std::size_t n_qubits,
                                      std::string name = "q") {
  return {Register{std::move(name), 0, n_qubits}};
}

/// Checks that the registers are disjoint, ordered and cover [0, n_qubits).
inline void validate_layout(const RegisterLayout& layout,
                            std::size_t n_qubits) {
  std::size_t next = 0;
  for (const auto& reg : layout) {
    if (reg.size == 0) {
      throw InvalidArgument("register '" + reg.name + "' is empty");
    }
    if (reg.first != next) {
      throw InvalidArgument("register '" + reg.name +
                            "' does not start where the previous one ends");
    }
    for (const auto& other : layout) {
      if (&other != &reg && other.name == reg.name) {
        throw InvalidArgument("duplicate register name '" + reg.name + "'");
      }
    }
    next += reg.size;
  }
  if (next != n_qubits) {
    throw InvalidArgument("register layout covers " + std::to_string(next) +
                          " qubits, state has " + std::to_string(n_qubits));
  }
}

inline const Register& find_register(const RegisterLayout& layout,
                                     std::string_view name) {
  for (const auto& reg : layout) {
    if (reg.name == name) return reg;
  }
  throw InvalidArgument("unknown register '" + std::string(name) + "'");
}

/// Number of qubits n with 2^n == dim, or throws.
inline std::size_t qubits_for_dimension(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw InvalidArgument("dimension " + std::to_string(dim) +
                          " is not a power of two");
  }
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if (n > kMaxQubits) {
    throw InvalidArgument("state exceeds the maximum of " +
                          std::to_string(kMaxQubits) + " qubits");
  }
  return n;
}

/// Qubit q maps to bit (n - 1 - q) of the amplitude index: qubit 0 is the
/// most significant bit.
constexpr std::size_t qubit_mask(std::size_t n_qubits, std::size_t qubit) {
  return std::size_t{1} << (n_qubits - 1 - qubit);
}

/// Normalized pure state over an n-qubit register.
template <typename Real>
class BasicPureState {
 public:
  using Scalar = std::complex<Real>;
  using Vector = AmplitudeVector<Real>;

  static constexpr Real kNormTolerance = Real(1e-10);

  explicit BasicPureState(std::size_t n_qubits)
      : BasicPureState(n_qubits, single_register(n_qubits)) {}

  BasicPureState(std::size_t n_qubits, RegisterLayout layout)
      : n_qubits_(n_qubits), layout_(std::move(layout)) {
    if (n_qubits_ == 0 || n_qubits_ > kMaxQubits) {
      throw InvalidArgument("qubit count must be in [1, 24]");
    }
    validate_layout(layout_, n_qubits_);
    amplitudes_ = Vector::Zero(Eigen::Index(1) << n_qubits_);
    amplitudes_(0) = Scalar(1);
  }

  BasicPureState(Vector amplitudes, RegisterLayout layout)
      : n_qubits_(qubits_for_dimension(std::size_t(amplitudes.size()))),
        amplitudes_(std::move(amplitudes)),
        layout_(std::move(layout)) {
    validate();
  }

  explicit BasicPureState(Vector amplitudes)
      : n_qubits_(qubits_for_dimension(std::size_t(amplitudes.size()))),
        amplitudes_(std::move(amplitudes)),
        layout_(single_register(n_qubits_)) {
    validate();
  }

  /// Computational basis state |index>.
  static BasicPureState basis(std::size_t n_qubits, std::size_t index,
                              RegisterLayout layout) {
    BasicPureState s(n_qubits, std::move(layout));
    if (index >= s.dim()) throw InvalidArgument("basis index out of range");
    s.amplitudes_(0) = Scalar(0);
    s.amplitudes_(Eigen::Index(index)) = Scalar(1);
    return s;
  }
  static BasicPureState basis(std::size_t n_qubits, std::size_t index) {
    return basis(n_qubits, index, single_register(n_qubits));
  }

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  const RegisterLayout& registers() const { return layout_; }
  const Register& find_register(std::string_view name) const {
    return qsml::find_register(layout_, name);
  }
  Real norm() const { return amplitudes_.norm(); }

  /// Raw access for in-place kernels. Kernels must keep the state unitary.
  Vector& mutable_amplitudes() { return amplitudes_; }

 private:
  void validate() const {
    if (n_qubits_ == 0) throw InvalidArgument("state needs at least one qubit");
    validate_layout(layout_, n_qubits_);
    if (!amplitudes_.allFinite()) {
      throw InvalidArgument("amplitudes must be finite");
    }
    if (std::abs(amplitudes_.norm() - Real(1)) > kNormTolerance) {
      throw InvalidArgument("amplitudes are not normalized");
    }
  }

  std::size_t n_qubits_ = 0;
  Vector amplitudes_;
  RegisterLayout layout_;
};

/// Density matrix; only produced by discarding qubits of a pure state.
template <typename Real>
class BasicMixedState {
 public:
  using Scalar = std::complex<Real>;
  using Matrix = DensityMatrix<Real>;

  static constexpr Real kTraceTolerance = Real(1e-10);
  static constexpr Real kHermitianTolerance = Real(1e-12);
  static constexpr Real kEigenTolerance = Real(1e-10);

  BasicMixedState(Matrix matrix, RegisterLayout layout)
      : n_qubits_(qubits_for_dimension(std::size_t(matrix.rows()))),
        matrix_(std::move(matrix)),
        layout_(std::move(layout)) {
    validate();
  }

  explicit BasicMixedState(Matrix matrix)
      : n_qubits_(qubits_for_dimension(std::size_t(matrix.rows()))),
        matrix_(std::move(matrix)),
        layout_(single_register(n_qubits_)) {
    validate();
  }

  /// |psi><psi|
  static BasicMixedState from_pure(const BasicPureState<Real>& psi) {
    const auto& a = psi.amplitudes();
    Matrix rho = a * a.adjoint();
    return BasicMixedState(std::move(rho), psi.registers());
  }

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  const RegisterLayout& registers() const { return layout_; }
  const Register& find_register(std::string_view name) const {
    return qsml::find_register(layout_, name);
  }

  Real hermitian_deviation() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  }
  Real min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_,
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  /// Raw access for in-place conjugation U rho U^dagger.
  Matrix& mutable_matrix() { return matrix_; }

 private:
  void validate() const {
    if (matrix_.rows() != matrix_.cols()) {
      throw InvalidArgument("density matrix must be square");
    }
    validate_layout(layout_, n_qubits_);
    if (!matrix_.allFinite()) throw InvalidArgument("density matrix not finite");
    const Scalar tr = matrix_.trace();
    if (std::abs(tr.real() - Real(1)) > kTraceTolerance ||
        std::abs(tr.imag()) > kTraceTolerance) {
      throw InvalidArgument("density matrix trace is not 1");
    }
    if (hermitian_deviation() > kHermitianTolerance) {
      throw InvalidArgument("density matrix is not Hermitian");
    }
    if (min_eigenvalue() < -kEigenTolerance) {
      throw InvalidArgument("density matrix is not positive semidefinite");
    }
  }

  std::size_t n_qubits_ = 0;
  Matrix matrix_;
  RegisterLayout layout_;
};

using PureState = BasicPureState<double>;
using MixedState = BasicMixedState<double>;

}  // namespace qsml

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

#include "qsml/ansatz.hpp"
#include "qsml/encode.hpp"

namespace qsml {

enum class HypothesisKind { SingleObservable, Covariance };

/// h(rho, theta): either <O> or cov(O1, O2) after the circuit.
struct Hypothesis {
  HypothesisKind kind = HypothesisKind::SingleObservable;
  Observable o1;
  Observable o2;  // covariance only

  /// Pauli on the template's first readout qubit.
  static Hypothesis single(const CircuitTemplate& tmpl, Pauli p = Pauli::Z);
  /// o1 = p1 on the x readout qubit, o2 = p2 on the y readout qubit.
  static Hypothesis covariance(const CircuitTemplate& tmpl, Pauli p1 = Pauli::X,
                               Pauli p2 = Pauli::Z);

  /// Throws unless the observables sit on readout qubits as required.
  void validate(const CircuitTemplate& tmpl) const;
};

/// The three expectations entering the covariance.
struct CovarianceParts {
  double o1 = 0.0;
  double o2 = 0.0;
  double o1o2 = 0.0;

  double value() const { return o1o2 - o1 * o2; }
};

double eval_hypothesis_single(const QuantumState& state,
                              const CircuitTemplate& tmpl,
                              const ParamVector& params, const Observable& obs);

/// cov(O1, O2) = <O1 O2> - <O1><O2> for disjoint supports.
double eval_covariance(const QuantumState& state, const CircuitTemplate& tmpl,
                       const ParamVector& params, const Observable& o1,
                       const Observable& o2);

double eval_hypothesis(const QuantumState& state, const CircuitTemplate& tmpl,
                       const ParamVector& params, const Hypothesis& hyp);

/// Expectations of an already-evolved state.
CovarianceParts covariance_parts(const QuantumState& evolved,
                                 const Observable& o1, const Observable& o2);

}  // namespace qsml

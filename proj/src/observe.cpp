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

#include "qsml/observe.hpp"

#include <algorithm>

namespace qsml {

namespace {
QuantumState evolve(const QuantumState& state, const CircuitTemplate& tmpl,
                    const ParamVector& params) {
  return std::visit(
      [&](const auto& s) -> QuantumState {
        return apply_circuit(tmpl, params, s);
      },
      state);
}

double expect(const QuantumState& state, const Observable& obs) {
  return std::visit([&](const auto& s) { return expectation(s, obs); }, state);
}

bool on_single_readout(const Observable& obs, std::size_t qubit) {
  const auto support = obs.support();
  return support.size() == 1 && support.front() == qubit;
}

bool disjoint(const Observable& a, const Observable& b) {
  const auto sa = a.support();
  const auto sb = b.support();
  std::vector<std::size_t> both;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(both));
  return both.empty();
}

const Readout& readout_for(const CircuitTemplate& tmpl, const std::string& reg) {
  for (const auto& r : tmpl.readouts()) {
    if (r.register_name == reg) return r;
  }
  throw InvalidArgument("template has no readout on register '" + reg + "'");
}

void check_single(const CircuitTemplate& tmpl, const Observable& obs) {
  if (tmpl.readouts().empty() ||
      !on_single_readout(obs, tmpl.readouts().front().qubit)) {
    throw InvalidArgument("observable must act on the readout qubit only");
  }
}

void check_covariance(const CircuitTemplate& tmpl, const Observable& o1,
                      const Observable& o2) {
  if (!disjoint(o1, o2)) {
    throw InvalidArgument("covariance observables must have disjoint supports");
  }
  if (tmpl.readouts().size() < 2) {
    throw InvalidArgument("covariance needs two readout qubits");
  }
  const auto& r1 = tmpl.readouts()[0];
  const auto& r2 = tmpl.readouts()[1];
  if (r1.register_name == r2.register_name) {
    throw InvalidArgument("covariance readouts must sit on different registers");
  }
  if (!on_single_readout(o1, r1.qubit) || !on_single_readout(o2, r2.qubit)) {
    throw InvalidArgument("covariance observables must sit on the readout qubits");
  }
}
}  // namespace

Hypothesis Hypothesis::single(const CircuitTemplate& tmpl, Pauli p) {
  if (tmpl.readouts().empty()) throw InvalidArgument("template has no readout");
  return {HypothesisKind::SingleObservable,
          Observable::pauli(tmpl.readouts().front().qubit, p), Observable{}};
}

Hypothesis Hypothesis::covariance(const CircuitTemplate& tmpl, Pauli p1,
                                  Pauli p2) {
  const auto& rx = readout_for(tmpl, "x");
  const auto& ry = readout_for(tmpl, "y");
  return {HypothesisKind::Covariance, Observable::pauli(rx.qubit, p1),
          Observable::pauli(ry.qubit, p2)};
}

void Hypothesis::validate(const CircuitTemplate& tmpl) const {
  if (kind == HypothesisKind::SingleObservable) {
    check_single(tmpl, o1);
  } else {
    check_covariance(tmpl, o1, o2);
  }
}

double eval_hypothesis_single(const QuantumState& state,
                              const CircuitTemplate& tmpl,
                              const ParamVector& params,
                              const Observable& obs) {
  check_single(tmpl, obs);
  return expect(evolve(state, tmpl, params), obs);
}

CovarianceParts covariance_parts(const QuantumState& evolved,
                                 const Observable& o1, const Observable& o2) {
  return {expect(evolved, o1), expect(evolved, o2), expect(evolved, o1 * o2)};
}

double eval_covariance(const QuantumState& state, const CircuitTemplate& tmpl,
                       const ParamVector& params, const Observable& o1,
                       const Observable& o2) {
  check_covariance(tmpl, o1, o2);
  return covariance_parts(evolve(state, tmpl, params), o1, o2).value();
}

double eval_hypothesis(const QuantumState& state, const CircuitTemplate& tmpl,
                       const ParamVector& params, const Hypothesis& hyp) {
  return hyp.kind == HypothesisKind::SingleObservable
             ? eval_hypothesis_single(state, tmpl, params, hyp.o1)
             : eval_covariance(state, tmpl, params, hyp.o1, hyp.o2);
}

}  // namespace qsml

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
#include <set>
#include <vector>

#include "qsml/qstate/state.hpp"

namespace qsml {

/// Register layout of the kept qubits: each register keeps the qubits of
/// `keep` that fall inside it; registers with nothing kept disappear.
inline RegisterLayout reduced_layout(const RegisterLayout& layout,
                                     const std::vector<std::size_t>& keep) {
  RegisterLayout out;
  std::size_t next = 0;
  for (const auto& reg : layout) {
    const auto count = std::size_t(std::count_if(
        keep.begin(), keep.end(), [&](std::size_t q) {
          return q >= reg.first && q < reg.first + reg.size;
        }));
    if (count > 0) {
      out.push_back(Register{reg.name, next, count});
      next += count;
    }
  }
  return out;
}

/// Reduced density matrix over `keep`. Kept qubits retain their relative
/// order (lowest index becomes the new MSB).
template <typename Real>
BasicMixedState<Real> partial_trace(const BasicPureState<Real>& state,
                                    const std::set<std::size_t>& keep) {
  if (keep.empty()) throw InvalidArgument("partial trace must keep a qubit");
  const std::size_t n = state.n_qubits();
  if (*keep.rbegin() >= n) {
    throw InvalidArgument("kept qubit index out of range");
  }
  const std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < n; ++q) {
    if (!keep.count(q)) traced.push_back(q);
  }
  const std::size_t dim_keep = std::size_t{1} << kept.size();
  const std::size_t dim_trace = std::size_t{1} << traced.size();

  // Split each amplitude index into (kept bits, traced bits) and arrange the
  // amplitudes as a dim_keep x dim_trace matrix M; then rho = M M^dagger.
  DensityMatrix<Real> m(static_cast<Eigen::Index>(dim_keep),
                        static_cast<Eigen::Index>(dim_trace));
  const auto& psi = state.amplitudes();
  for (std::size_t i = 0; i < state.dim(); ++i) {
    std::size_t a = 0;
    for (std::size_t q : kept) a = (a << 1) | ((i & qubit_mask(n, q)) ? 1 : 0);
    std::size_t b = 0;
    for (std::size_t q : traced) {
      b = (b << 1) | ((i & qubit_mask(n, q)) ? 1 : 0);
    }
    m(Eigen::Index(a), Eigen::Index(b)) = psi(Eigen::Index(i));
  }
  DensityMatrix<Real> rho = m * m.adjoint();
  // Symmetrize away rounding and absorb the input's norm drift.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  rho /= rho.trace().real();
  return BasicMixedState<Real>(std::move(rho),
                               reduced_layout(state.registers(), kept));
}

}  // namespace qsml

// Copyright 2026 The qcensor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCENSOR_COHERENCE_H
#define QCENSOR_COHERENCE_H

#include "qcensor/channel.h"
#include "qcensor/state.h"

namespace qcensor {

/// Tolerance used when a verdict depends on whether a state is free. Looser
/// than arithmetic tolerances so that roundoff cannot flip a verdict.
inline constexpr double kFreeStateTol = 1e-9;

/// The computational product basis |a_1 ... a_N> on `dims`.
class IncoherentBasis {
  public:
    explicit IncoherentBasis(Dims dims);

    const Dims &dims() const noexcept {
        return dims_;
    }
    std::size_t size() const noexcept {
        return total_dim(dims_);
    }
    /// Per-site digits of basis index `index`.
    std::vector<int> digits(std::size_t index) const;
    /// Number of sites on which basis labels `a` and `b` differ.
    int mismatch(std::size_t a, std::size_t b) const;

  private:
    Dims dims_;
};

struct CoherenceReport {
    double l1_value = 0.0;
    double max_offdiag = 0.0;
    bool is_free = true;
};

/// Keeps only the diagonal in the incoherent basis.
DensityOperator dephase(const DensityOperator &rho);

/// Kraus form {|a><a|} of the dephasing map on `dims`.
KrausChannel dephasing_channel(const Dims &dims);

bool is_incoherent_state(const DensityOperator &rho, double tol = kFreeStateTol);

/// Sum of moduli of the off-diagonal entries.
double l1_coherence(const DensityOperator &rho);
double l1_coherence(const ComplexMatrix &m);

double max_offdiag(const ComplexMatrix &m);

/// `is_free` is decided by the largest off-diagonal modulus against `tol`.
CoherenceReport coherence_report(const DensityOperator &rho, double tol = kFreeStateTol);

}  // namespace qcensor

#endif

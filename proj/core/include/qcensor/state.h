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

#ifndef QCENSOR_STATE_H
#define QCENSOR_STATE_H

#include <cstdint>
#include <vector>

#include "qcensor/linalg.h"

namespace qcensor {

/// Numeric tolerances used by validation and equality checks. Each value
/// must lie in [0, 1e-3].
struct Tolerances {
    double herm = 1e-10;
    double psd = 1e-9;
    double trace = 1e-10;
    double eq = 1e-10;

    void check() const;
};

class DensityOperator;

namespace detail {
// Wraps a matrix produced by an invariant-preserving operation without
// re-running the eigenvalue check.
DensityOperator adopt(Dims dims, ComplexMatrix matrix);
}  // namespace detail

/// A positive semidefinite, unit-trace operator on a composite system.
///
/// Instances only come out of `validate_density` or out of operations that
/// preserve the invariants, so holding one means the invariants hold. An
/// empty `dims` list denotes the trivial one-dimensional system.
class DensityOperator {
  public:
    const Dims &dims() const noexcept {
        return dims_;
    }
    const ComplexMatrix &matrix() const noexcept {
        return matrix_;
    }
    int dim() const noexcept {
        return static_cast<int>(matrix_.rows());
    }
    int num_sites() const noexcept {
        return static_cast<int>(dims_.size());
    }
    Complex operator()(int row, int col) const {
        return matrix_(row, col);
    }
    double purity() const;

  private:
    DensityOperator(Dims dims, ComplexMatrix matrix) : dims_(std::move(dims)), matrix_(std::move(matrix)) {
    }
    friend DensityOperator detail::adopt(Dims dims, ComplexMatrix matrix);

    Dims dims_;
    ComplexMatrix matrix_;
};

/// Possibly subnormalized positive operator, as produced by a single branch
/// of an instrument or any trace-non-increasing map.
struct Operator {
    Dims dims;
    ComplexMatrix matrix;

    double trace() const {
        return matrix.trace().real();
    }
};

/// Checks squareness, Hermiticity, the eigenvalue floor and the trace.
/// Throws Error with NotSquare, NotHermitian, NotPositive, TraceNotOne,
/// NonFinite or DimensionMismatch.
DensityOperator validate_density(const ComplexMatrix &m, const Dims &dims, const Tolerances &tol = {});

/// Renormalizes a branch output to unit trace and validates it.
DensityOperator normalize(const Operator &op, const Tolerances &tol = {});

/// The 1x1 state [1] of the trivial system (no sites).
DensityOperator trivial_state();

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b);
DensityOperator tensor(const std::vector<DensityOperator> &factors);

/// Reduced state on `keep` (0-based site indices, any order; the result
/// keeps the original site order). Throws EmptyKeepSet or IndexOutOfRange.
DensityOperator partial_trace(const DensityOperator &rho, const std::vector<int> &keep);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
double fidelity(const DensityOperator &rho, const DensityOperator &sigma);

/// Half the trace norm of rho - sigma.
double trace_distance(const DensityOperator &rho, const DensityOperator &sigma);

/// Ginibre-style random state G G^dagger / Tr(G G^dagger) with G of width
/// `rank`. Deterministic in `seed`.
DensityOperator random_density(const Dims &dims, int rank, std::uint64_t seed);

DensityOperator maximally_mixed(const Dims &dims);
DensityOperator basis_state(const Dims &dims, std::size_t index);
DensityOperator diagonal_state(const Dims &dims, const std::vector<double> &probabilities);
DensityOperator pure_state(const Dims &dims, const Eigen::VectorXcd &amplitudes);

/// Uniform superposition over the product basis of `dims`, i.e. the tensor
/// power of maximally coherent single-site states.
DensityOperator maximally_coherent_state(const Dims &dims);
/// (|0...0> + |1...1>)/sqrt(2) projector on `dims`.
DensityOperator ghz_state(const Dims &dims);

/// |+><+| on `n` qubits (tensor power of the maximally coherent qubit state).
DensityOperator plus_state(int n);
/// (|0...0> + |1...1>)/sqrt(2) projector on `n` qubits.
DensityOperator ghz_state(int n);
/// (|00> + |11>)/sqrt(2) projector.
DensityOperator bell_state();

}  // namespace qcensor

#endif

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

#ifndef QCENSOR_LINALG_H
#define QCENSOR_LINALG_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace qcensor {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Subsystem dimensions, left to right in tensor order.
using Dims = std::vector<int>;

std::size_t total_dim(const Dims &dims);

/// Builds a matrix from row-major nested lists.
ComplexMatrix matrix_from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

double max_abs_entry(const ComplexMatrix &m);
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
bool all_finite(const ComplexMatrix &m);

/// Eigenvalues (ascending) of the Hermitian part of `m`.
RealVector hermitian_eigenvalues(const ComplexMatrix &m);

/// Eigenvalues below this fraction of the largest one count as roundoff in
/// psd_sqrt and psd_sqrt_trace.
inline constexpr double kPsdRelativeCutoff = 1e-14;

/// Square root of a positive semidefinite matrix; eigenvalues at roundoff
/// level (including negative ones) are clipped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix &m);

/// Tr sqrt(m) for positive semidefinite `m`, with the same clipping.
double psd_sqrt_trace(const ComplexMatrix &m);

/// Multiplies `op` (d_out x dims[site]) onto the row index of `x` belonging to
/// `site`. Rows of `x` are laid out by `dims`; columns are untouched.
ComplexMatrix left_apply_on_site(const ComplexMatrix &op, const ComplexMatrix &x, const Dims &dims, int site);

/// Sum over `ops` of (op on site) x (op on site)^dagger for a square `x`
/// whose rows and columns are both laid out by `dims`.
ComplexMatrix conjugate_on_site(const std::vector<ComplexMatrix> &ops, const ComplexMatrix &x, const Dims &dims, int site);

}  // namespace qcensor

#endif

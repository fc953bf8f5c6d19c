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

#include "qcensor/state.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qcensor/error.h"

namespace qcensor {

namespace {

void check_dims(const Dims &dims) {
    for (int d : dims) {
        if (d < 2) {
            throw Error(ErrorCode::InvalidArgument, "subsystem dimension " + std::to_string(d) + " < 2");
        }
    }
}

void require_same_dim(const DensityOperator &a, const DensityOperator &b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "total dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    }
}

}  // namespace

void Tolerances::check() const {
    for (double t : {herm, psd, trace, eq}) {
        if (!(t >= 0.0 && t <= 1e-3)) {
            throw Error(ErrorCode::InvalidArgument, "tolerance outside [0, 1e-3]");
        }
    }
}

namespace detail {
DensityOperator adopt(Dims dims, ComplexMatrix matrix) {
    return DensityOperator(std::move(dims), std::move(matrix));
}
}  // namespace detail

double DensityOperator::purity() const {
    return (matrix_ * matrix_).trace().real();
}

DensityOperator validate_density(const ComplexMatrix &m, const Dims &dims, const Tolerances &tol) {
    tol.check();
    check_dims(dims);
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::NotSquare, std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (static_cast<std::size_t>(m.rows()) != total_dim(dims)) {
        throw Error(ErrorCode::DimensionMismatch, "matrix side " + std::to_string(m.rows()) +
                                                      " != product of dims " + std::to_string(total_dim(dims)));
    }
    if (!all_finite(m)) {
        throw Error(ErrorCode::NonFinite, "matrix has NaN or Inf entries");
    }
    const double herm_dev = max_abs_diff(m, m.adjoint());
    if (herm_dev > tol.herm) {
        throw Error(ErrorCode::NotHermitian, "max |m - m^dagger| = " + std::to_string(herm_dev));
    }
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
        throw Error(ErrorCode::TraceNotOne, "trace = " + std::to_string(tr));
    }
    const double min_eig = hermitian_eigenvalues(m).minCoeff();
    if (min_eig < -tol.psd) {
        throw Error(ErrorCode::NotPositive, "minimum eigenvalue = " + std::to_string(min_eig));
    }
    return detail::adopt(dims, m);
}

DensityOperator normalize(const Operator &op, const Tolerances &tol) {
    const double tr = op.trace();
    if (!(tr > 0.0)) {
        throw Error(ErrorCode::TraceNotOne, "cannot normalize an operator with trace " + std::to_string(tr));
    }
    ComplexMatrix m = op.matrix / tr;
    m = 0.5 * (m + m.adjoint());
    return validate_density(m, op.dims, tol);
}

DensityOperator trivial_state() {
    return detail::adopt({}, ComplexMatrix::Ones(1, 1));
}

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
    Dims dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return detail::adopt(std::move(dims), kron(a.matrix(), b.matrix()));
}

DensityOperator tensor(const std::vector<DensityOperator> &factors) {
    DensityOperator acc = trivial_state();
    for (const auto &f : factors) {
        acc = tensor(acc, f);
    }
    return acc;
}

DensityOperator partial_trace(const DensityOperator &rho, const std::vector<int> &keep) {
    if (keep.empty()) {
        throw Error(ErrorCode::EmptyKeepSet, "keep set is empty");
    }
    const Dims &dims = rho.dims();
    const int n = static_cast<int>(dims.size());
    std::vector<bool> kept(n, false);
    for (int k : keep) {
        if (k < 0 || k >= n) {
            throw Error(ErrorCode::IndexOutOfRange, "site " + std::to_string(k) + " of " + std::to_string(n));
        }
        kept[k] = true;
    }

    Dims keep_dims;
    Dims drop_dims;
    for (int i = 0; i < n; ++i) {
        (kept[i] ? keep_dims : drop_dims).push_back(dims[i]);
    }
    const std::size_t n_keep = total_dim(keep_dims);
    const std::size_t n_drop = total_dim(drop_dims);

    // Global index of the (kept, dropped) multi-index pair.
    std::vector<std::size_t> global(n_keep * n_drop);
    std::vector<int> digits(n, 0);
    for (std::size_t g = 0; g < total_dim(dims); ++g) {
        std::size_t rem = g;
        for (int i = n - 1; i >= 0; --i) {
            digits[i] = static_cast<int>(rem % dims[i]);
            rem /= dims[i];
        }
        std::size_t ki = 0;
        std::size_t di = 0;
        for (int i = 0; i < n; ++i) {
            if (kept[i]) {
                ki = ki * dims[i] + digits[i];
            } else {
                di = di * dims[i] + digits[i];
            }
        }
        global[ki * n_drop + di] = g;
    }

    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(n_keep), static_cast<Eigen::Index>(n_keep));
    const ComplexMatrix &m = rho.matrix();
    for (std::size_t r = 0; r < n_keep; ++r) {
        for (std::size_t c = 0; c < n_keep; ++c) {
            Complex acc{};
            for (std::size_t k = 0; k < n_drop; ++k) {
                acc += m(static_cast<Eigen::Index>(global[r * n_drop + k]),
                         static_cast<Eigen::Index>(global[c * n_drop + k]));
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    }
    return detail::adopt(std::move(keep_dims), std::move(out));
}

double fidelity(const DensityOperator &rho, const DensityOperator &sigma) {
    require_same_dim(rho, sigma);
    const ComplexMatrix root = psd_sqrt(rho.matrix());
    const ComplexMatrix inner = root * sigma.matrix() * root;
    const double s = psd_sqrt_trace(inner);
    return std::clamp(s * s, 0.0, 1.0);
}

double trace_distance(const DensityOperator &rho, const DensityOperator &sigma) {
    require_same_dim(rho, sigma);
    const RealVector eig = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
    return std::clamp(0.5 * eig.cwiseAbs().sum(), 0.0, 1.0);
}

DensityOperator random_density(const Dims &dims, int rank, std::uint64_t seed) {
    check_dims(dims);
    const auto n = static_cast<Eigen::Index>(total_dim(dims));
    if (rank < 1 || rank > n) {
        throw Error(ErrorCode::RankTooLarge, "rank " + std::to_string(rank) + " for total dimension " + std::to_string(n));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(n, rank);
    for (Eigen::Index c = 0; c < rank; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c) = Complex(re, im);
        }
    }
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    m = 0.5 * (m + m.adjoint());
    return detail::adopt(dims, std::move(m));
}

DensityOperator maximally_mixed(const Dims &dims) {
    check_dims(dims);
    const auto n = static_cast<Eigen::Index>(total_dim(dims));
    return detail::adopt(dims, ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

DensityOperator basis_state(const Dims &dims, std::size_t index) {
    check_dims(dims);
    const auto n = total_dim(dims);
    if (index >= n) {
        throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(index));
    }
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return detail::adopt(dims, std::move(m));
}

DensityOperator diagonal_state(const Dims &dims, const std::vector<double> &probabilities) {
    if (probabilities.size() != total_dim(dims)) {
        throw Error(ErrorCode::DimensionMismatch, "probability vector length");
    }
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(probabilities.size()),
                                          static_cast<Eigen::Index>(probabilities.size()));
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = probabilities[i];
    }
    return validate_density(m, dims);
}

DensityOperator pure_state(const Dims &dims, const Eigen::VectorXcd &amplitudes) {
    if (static_cast<std::size_t>(amplitudes.size()) != total_dim(dims)) {
        throw Error(ErrorCode::DimensionMismatch, "amplitude vector length");
    }
    const double norm = amplitudes.norm();
    if (!(norm > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "zero amplitude vector");
    }
    const Eigen::VectorXcd psi = amplitudes / norm;
    return validate_density(psi * psi.adjoint(), dims);
}

DensityOperator maximally_coherent_state(const Dims &dims) {
    const auto size = static_cast<Eigen::Index>(total_dim(dims));
    return pure_state(dims, Eigen::VectorXcd::Ones(size));
}

DensityOperator ghz_state(const Dims &dims) {
    check_dims(dims);
    if (dims.empty()) {
        throw Error(ErrorCode::InvalidArgument, "GHZ state needs at least one site");
    }
    const auto size = static_cast<Eigen::Index>(total_dim(dims));
    Eigen::Index all_ones = 0;
    for (int d : dims) {
        all_ones = all_ones * d + 1;
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(size);
    psi(0) = 1.0;
    psi(all_ones) = 1.0;
    return pure_state(dims, psi);
}

DensityOperator plus_state(int n) {
    return maximally_coherent_state(Dims(static_cast<std::size_t>(n), 2));
}

DensityOperator ghz_state(int n) {
    return ghz_state(Dims(static_cast<std::size_t>(n), 2));
}

DensityOperator bell_state() {
    return ghz_state(2);
}

}  // namespace qcensor

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

#include "qcensor/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qcensor/error.h"

namespace qcensor {

std::size_t total_dim(const Dims &dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, [](std::size_t acc, int d) {
        return acc * static_cast<std::size_t>(d);
    });
}

ComplexMatrix matrix_from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = n_rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.begin()->size());
    ComplexMatrix m(n_rows, n_cols);
    Eigen::Index r = 0;
    for (const auto &row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != n_cols) {
            throw Error(ErrorCode::InvalidArgument, "ragged row list");
        }
        Eigen::Index c = 0;
        for (const auto &v : row) {
            m(r, c++) = v;
        }
        ++r;
    }
    return m;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double max_abs_entry(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
    }
    return max_abs_entry(a - b);
}

bool all_finite(const ComplexMatrix &m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const Complex v = m.data()[i];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            return false;
        }
    }
    return true;
}

RealVector hermitian_eigenvalues(const ComplexMatrix &m) {
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

namespace {

// Eigenvalues at roundoff level relative to the largest one are zeroed
// before taking square roots: sqrt(1e-17) would otherwise leak 3e-9.
RealVector clip_roundoff(RealVector eig) {
    const double cutoff = kPsdRelativeCutoff * std::max(eig.cwiseAbs().maxCoeff(), 0.0);
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        if (eig(i) <= cutoff) {
            eig(i) = 0.0;
        }
    }
    return eig;
}

}  // namespace

ComplexMatrix psd_sqrt(const ComplexMatrix &m) {
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    RealVector roots = clip_roundoff(solver.eigenvalues()).cwiseSqrt();
    const ComplexMatrix &v = solver.eigenvectors();
    return v * roots.cast<Complex>().asDiagonal() * v.adjoint();
}

double psd_sqrt_trace(const ComplexMatrix &m) {
    return clip_roundoff(hermitian_eigenvalues(m)).cwiseSqrt().sum();
}

ComplexMatrix left_apply_on_site(const ComplexMatrix &op, const ComplexMatrix &x, const Dims &dims, int site) {
    if (site < 0 || site >= static_cast<int>(dims.size())) {
        throw Error(ErrorCode::IndexOutOfRange, "site " + std::to_string(site));
    }
    const auto d_in = static_cast<Eigen::Index>(dims[site]);
    if (op.cols() != d_in || x.rows() != static_cast<Eigen::Index>(total_dim(dims))) {
        throw Error(ErrorCode::DimensionMismatch, "local operator does not fit site " + std::to_string(site));
    }
    const Dims left(dims.begin(), dims.begin() + site);
    const Dims right(dims.begin() + site + 1, dims.end());
    const auto n_left = static_cast<Eigen::Index>(total_dim(left));
    const auto n_right = static_cast<Eigen::Index>(total_dim(right));
    const Eigen::Index d_out = op.rows();

    ComplexMatrix out = ComplexMatrix::Zero(n_left * d_out * n_right, x.cols());
    for (Eigen::Index l = 0; l < n_left; ++l) {
        for (Eigen::Index o = 0; o < d_out; ++o) {
            for (Eigen::Index i = 0; i < d_in; ++i) {
                const Complex w = op(o, i);
                if (w == Complex{}) {
                    continue;
                }
                out.middleRows((l * d_out + o) * n_right, n_right) += w * x.middleRows((l * d_in + i) * n_right, n_right);
            }
        }
    }
    return out;
}

ComplexMatrix conjugate_on_site(const std::vector<ComplexMatrix> &ops, const ComplexMatrix &x, const Dims &dims, int site) {
    ComplexMatrix acc;
    for (const auto &op : ops) {
        const ComplexMatrix half = left_apply_on_site(op, x, dims, site);
        // (op half^dagger)^dagger = half op^dagger
        const ComplexMatrix term = left_apply_on_site(op, half.adjoint(), dims, site).adjoint();
        if (acc.size() == 0) {
            acc = term;
        } else {
            acc += term;
        }
    }
    return acc;
}

}  // namespace qcensor

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

#include "qcensor/coherence.h"

#include <string>

#include "qcensor/error.h"

namespace qcensor {

IncoherentBasis::IncoherentBasis(Dims dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "incoherent basis needs at least one site");
    }
    for (int d : dims_) {
        if (d < 2) {
            throw Error(ErrorCode::InvalidArgument, "site dimension " + std::to_string(d) + " < 2");
        }
    }
}

std::vector<int> IncoherentBasis::digits(std::size_t index) const {
    std::vector<int> out(dims_.size());
    for (std::size_t i = dims_.size(); i-- > 0;) {
        out[i] = static_cast<int>(index % static_cast<std::size_t>(dims_[i]));
        index /= static_cast<std::size_t>(dims_[i]);
    }
    return out;
}

int IncoherentBasis::mismatch(std::size_t a, std::size_t b) const {
    int count = 0;
    for (std::size_t i = dims_.size(); i-- > 0;) {
        const auto d = static_cast<std::size_t>(dims_[i]);
        if (a % d != b % d) {
            ++count;
        }
        a /= d;
        b /= d;
    }
    return count;
}

DensityOperator dephase(const DensityOperator &rho) {
    ComplexMatrix m = ComplexMatrix::Zero(rho.dim(), rho.dim());
    m.diagonal() = rho.matrix().diagonal().real().cast<Complex>();
    return detail::adopt(rho.dims(), std::move(m));
}

KrausChannel dephasing_channel(const Dims &dims) {
    const auto n = static_cast<Eigen::Index>(total_dim(dims));
    std::vector<ComplexMatrix> ops;
    ops.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index a = 0; a < n; ++a) {
        ComplexMatrix p = ComplexMatrix::Zero(n, n);
        p(a, a) = 1.0;
        ops.push_back(std::move(p));
    }
    return KrausChannel(dims, dims, std::move(ops));
}

double max_offdiag(const ComplexMatrix &m) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (r != c) {
                best = std::max(best, std::abs(m(r, c)));
            }
        }
    }
    return best;
}

bool is_incoherent_state(const DensityOperator &rho, double tol) {
    return max_offdiag(rho.matrix()) <= tol;
}

double l1_coherence(const ComplexMatrix &m) {
    double sum = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (r != c) {
                sum += std::abs(m(r, c));
            }
        }
    }
    return sum;
}

double l1_coherence(const DensityOperator &rho) {
    return l1_coherence(rho.matrix());
}

CoherenceReport coherence_report(const DensityOperator &rho, double tol) {
    CoherenceReport r;
    r.l1_value = l1_coherence(rho);
    r.max_offdiag = max_offdiag(rho.matrix());
    r.is_free = r.max_offdiag <= tol;
    return r;
}

}  // namespace qcensor

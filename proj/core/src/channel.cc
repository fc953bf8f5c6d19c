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

#include "qcensor/channel.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qcensor/error.h"

namespace qcensor {

namespace {

std::string dims_str(const Dims &dims) {
    std::string s = "[";
    for (std::size_t i = 0; i < dims.size(); ++i) {
        s += (i ? "," : "") + std::to_string(dims[i]);
    }
    return s + "]";
}

void require_fits(const KrausChannel &ch, const Dims &dims) {
    if (total_dim(ch.in_dims()) != total_dim(dims)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "channel input " + dims_str(ch.in_dims()) + " vs state " + dims_str(dims));
    }
}

// Output dims: the channel's declared output split when the input split
// matches the state, otherwise the state's own split when sizes agree.
Dims output_dims(const KrausChannel &ch, const Dims &state_dims) {
    if (ch.in_dims() == state_dims || total_dim(ch.out_dims()) != total_dim(state_dims)) {
        return ch.out_dims();
    }
    return state_dims;
}

ComplexMatrix kraus_action(const KrausChannel &ch, const ComplexMatrix &x) {
    const auto n = static_cast<Eigen::Index>(total_dim(ch.out_dims()));
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto &m : ch.kraus()) {
        out.noalias() += m * x * m.adjoint();
    }
    return out;
}

}  // namespace

KrausChannel::KrausChannel(Dims in_dims, Dims out_dims, std::vector<ComplexMatrix> kraus, TpMode mode)
    : in_dims_(std::move(in_dims)), out_dims_(std::move(out_dims)), kraus_(std::move(kraus)), mode_(mode) {
    if (kraus_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "Kraus list is empty");
    }
    const auto n_in = static_cast<Eigen::Index>(total_dim(in_dims_));
    const auto n_out = static_cast<Eigen::Index>(total_dim(out_dims_));
    for (const auto &m : kraus_) {
        if (m.rows() != n_out || m.cols() != n_in) {
            throw Error(ErrorCode::DimensionMismatch, "Kraus operator is " + std::to_string(m.rows()) + "x" +
                                                          std::to_string(m.cols()) + ", expected " +
                                                          std::to_string(n_out) + "x" + std::to_string(n_in));
        }
        if (!all_finite(m)) {
            throw Error(ErrorCode::NonFinite, "Kraus operator has NaN or Inf entries");
        }
    }
}

KrausChannel KrausChannel::identity(const Dims &dims) {
    const auto n = static_cast<Eigen::Index>(total_dim(dims));
    return KrausChannel(dims, dims, {ComplexMatrix::Identity(n, n)});
}

KrausChannel KrausChannel::unitary(const Dims &dims, const ComplexMatrix &u) {
    return KrausChannel(dims, dims, {u});
}

ComplexMatrix KrausChannel::completeness() const {
    const auto n = static_cast<Eigen::Index>(total_dim(in_dims_));
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (const auto &m : kraus_) {
        acc.noalias() += m.adjoint() * m;
    }
    return acc;
}

DensityOperator apply(const KrausChannel &ch, const DensityOperator &rho) {
    if (ch.tp_mode() != TpMode::TracePreserving) {
        throw Error(ErrorCode::NotTracePreserving, "apply() needs a trace-preserving channel; use apply_branch()");
    }
    require_fits(ch, rho.dims());
    ComplexMatrix out = kraus_action(ch, rho.matrix());
    const double tr = out.trace().real();
    if (std::abs(tr - 1.0) > 1e-8) {
        throw Error(ErrorCode::NotTracePreserving, "output trace " + std::to_string(tr));
    }
    out = 0.5 * (out + out.adjoint());
    return detail::adopt(output_dims(ch, rho.dims()), std::move(out));
}

Operator apply_branch(const KrausChannel &ch, const DensityOperator &rho) {
    require_fits(ch, rho.dims());
    return Operator{output_dims(ch, rho.dims()), kraus_action(ch, rho.matrix())};
}

Operator apply_branch(const KrausChannel &ch, const Operator &x) {
    require_fits(ch, x.dims);
    return Operator{output_dims(ch, x.dims), kraus_action(ch, x.matrix)};
}

DensityOperator apply_on_site(const KrausChannel &ch, const DensityOperator &rho, int site) {
    if (site < 0 || site >= rho.num_sites()) {
        throw Error(ErrorCode::IndexOutOfRange, "site " + std::to_string(site));
    }
    if (ch.in_dims().size() != 1 || ch.in_dims()[0] != rho.dims()[site] || ch.out_dims().size() != 1) {
        throw Error(ErrorCode::DimensionMismatch, "apply_on_site needs a single-site channel of matching dimension");
    }
    if (ch.tp_mode() != TpMode::TracePreserving) {
        throw Error(ErrorCode::NotTracePreserving, "apply_on_site needs a trace-preserving channel");
    }
    ComplexMatrix out = conjugate_on_site(ch.kraus(), rho.matrix(), rho.dims(), site);
    out = 0.5 * (out + out.adjoint());
    Dims dims = rho.dims();
    dims[site] = ch.out_dims()[0];
    return detail::adopt(std::move(dims), std::move(out));
}

KrausVerdict validate_kraus(const KrausChannel &ch, const Tolerances &tol) {
    tol.check();
    KrausVerdict v;
    const ComplexMatrix c = ch.completeness();
    const auto n = c.rows();
    v.deviation = max_abs_diff(c, ComplexMatrix::Identity(n, n));
    v.excess = std::max(0.0, hermitian_eigenvalues(c).maxCoeff() - 1.0);
    const double t = std::max(tol.eq, tol.trace);
    v.trace_preserving = v.deviation <= t;
    v.trace_non_increasing = v.excess <= t;
    v.valid = ch.tp_mode() == TpMode::TracePreserving ? v.trace_preserving : v.trace_non_increasing;
    return v;
}

KrausChannel compose(const KrausChannel &late, const KrausChannel &early) {
    if (total_dim(early.out_dims()) != total_dim(late.in_dims())) {
        throw Error(ErrorCode::DimensionMismatch,
                    "early output " + dims_str(early.out_dims()) + " vs late input " + dims_str(late.in_dims()));
    }
    std::vector<ComplexMatrix> ops;
    ops.reserve(late.size() * early.size());
    for (const auto &l : late.kraus()) {
        for (const auto &e : early.kraus()) {
            ops.push_back(l * e);
        }
    }
    const TpMode mode = late.tp_mode() == TpMode::TracePreserving && early.tp_mode() == TpMode::TracePreserving
                            ? TpMode::TracePreserving
                            : TpMode::TraceNonIncreasing;
    return KrausChannel(early.in_dims(), late.out_dims(), std::move(ops), mode);
}

KrausChannel tensor_channels(const std::vector<KrausChannel> &factors) {
    if (factors.empty()) {
        throw Error(ErrorCode::InvalidArgument, "tensor_channels needs at least one factor");
    }
    Dims in_dims;
    Dims out_dims;
    std::vector<ComplexMatrix> ops{ComplexMatrix::Ones(1, 1)};
    TpMode mode = TpMode::TracePreserving;
    for (const auto &f : factors) {
        in_dims.insert(in_dims.end(), f.in_dims().begin(), f.in_dims().end());
        out_dims.insert(out_dims.end(), f.out_dims().begin(), f.out_dims().end());
        std::vector<ComplexMatrix> next;
        next.reserve(ops.size() * f.size());
        for (const auto &a : ops) {
            for (const auto &b : f.kraus()) {
                next.push_back(kron(a, b));
            }
        }
        ops = std::move(next);
        if (f.tp_mode() != TpMode::TracePreserving) {
            mode = TpMode::TraceNonIncreasing;
        }
    }
    return KrausChannel(std::move(in_dims), std::move(out_dims), std::move(ops), mode);
}

KrausChannel scaled(const KrausChannel &ch, double weight) {
    if (!(weight >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "negative channel weight");
    }
    std::vector<ComplexMatrix> ops;
    ops.reserve(ch.size());
    const double s = std::sqrt(weight);
    for (const auto &m : ch.kraus()) {
        ops.push_back(s * m);
    }
    return KrausChannel(ch.in_dims(), ch.out_dims(), std::move(ops), TpMode::TraceNonIncreasing);
}

IncoherenceCheck is_incoherent(const KrausChannel &ch, double zero_tol) {
    IncoherenceCheck check;
    for (std::size_t k = 0; k < ch.size(); ++k) {
        const ComplexMatrix &m = ch.kraus()[k];
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            int nonzero = 0;
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                if (std::abs(m(r, c)) > zero_tol) {
                    ++nonzero;
                }
            }
            if (nonzero > 1) {
                check.incoherent = false;
                check.kraus_index = k;
                check.column = c;
                return check;
            }
        }
    }
    return check;
}

FreeUnitary FreeUnitary::inverse() const {
    const std::size_t n = permutation.size();
    FreeUnitary inv;
    inv.permutation.assign(n, 0);
    inv.phases.assign(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const auto target = static_cast<std::size_t>(permutation[a]);
        inv.permutation[target] = static_cast<int>(a);
        inv.phases[target] = -phases[a];
    }
    return inv;
}

ComplexMatrix FreeUnitary::matrix() const {
    const auto n = static_cast<Eigen::Index>(permutation.size());
    ComplexMatrix u = ComplexMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        u(permutation[static_cast<std::size_t>(a)], a) = std::polar(1.0, phases[static_cast<std::size_t>(a)]);
    }
    return u;
}

FreeUnitary FreeUnitary::identity(int dim) {
    FreeUnitary u;
    u.permutation.resize(static_cast<std::size_t>(dim));
    std::iota(u.permutation.begin(), u.permutation.end(), 0);
    u.phases.assign(static_cast<std::size_t>(dim), 0.0);
    return u;
}

KrausChannel make_free_unitary(const FreeUnitary &u, int dim) {
    const auto n = static_cast<std::size_t>(dim);
    if (u.permutation.size() != n || u.phases.size() != n) {
        throw Error(ErrorCode::NotAPermutation, "permutation/phase length differs from dimension " + std::to_string(dim));
    }
    std::vector<bool> seen(n, false);
    for (int p : u.permutation) {
        if (p < 0 || static_cast<std::size_t>(p) >= n || seen[static_cast<std::size_t>(p)]) {
            throw Error(ErrorCode::NotAPermutation, "entry " + std::to_string(p) + " repeated or out of range");
        }
        seen[static_cast<std::size_t>(p)] = true;
    }
    return KrausChannel::unitary({dim}, u.matrix());
}

KrausChannel swap_channel(int dim_a, int dim_b) {
    if (dim_a < 2 || dim_b < 2) {
        throw Error(ErrorCode::InvalidArgument, "swap needs dimensions >= 2");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < dim_a; ++a) {
        for (Eigen::Index b = 0; b < dim_b; ++b) {
            m(b * dim_a + a, a * dim_b + b) = 1.0;
        }
    }
    return KrausChannel({dim_a, dim_b}, {dim_b, dim_a}, {m});
}

KrausChannel permute_sites(const Dims &dims, const std::vector<int> &perm) {
    const std::size_t n = dims.size();
    if (perm.size() != n) {
        throw Error(ErrorCode::NotAPermutation, "site permutation length");
    }
    std::vector<bool> seen(n, false);
    for (int p : perm) {
        if (p < 0 || static_cast<std::size_t>(p) >= n || seen[static_cast<std::size_t>(p)]) {
            throw Error(ErrorCode::NotAPermutation, "site permutation entry " + std::to_string(p));
        }
        seen[static_cast<std::size_t>(p)] = true;
    }
    Dims out_dims(n);
    for (std::size_t i = 0; i < n; ++i) {
        out_dims[static_cast<std::size_t>(perm[i])] = dims[i];
    }
    const auto total = static_cast<Eigen::Index>(total_dim(dims));
    ComplexMatrix m = ComplexMatrix::Zero(total, total);
    std::vector<int> digits(n);
    std::vector<int> moved(n);
    for (Eigen::Index g = 0; g < total; ++g) {
        Eigen::Index rem = g;
        for (std::size_t i = n; i-- > 0;) {
            digits[i] = static_cast<int>(rem % dims[i]);
            rem /= dims[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            moved[static_cast<std::size_t>(perm[i])] = digits[i];
        }
        Eigen::Index out = 0;
        for (std::size_t i = 0; i < n; ++i) {
            out = out * out_dims[i] + moved[i];
        }
        m(out, g) = 1.0;
    }
    return KrausChannel(dims, out_dims, {m});
}

std::vector<ComplexMatrix> IoStructure::kraus_matrices() const {
    std::vector<ComplexMatrix> ops;
    ops.reserve(num_kraus());
    for (std::size_t a = 0; a < num_kraus(); ++a) {
        ComplexMatrix m = ComplexMatrix::Zero(dim_out, dim_in);
        for (int b = 0; b < dim_in; ++b) {
            m(column_map[a][static_cast<std::size_t>(b)], b) += coeff[a][static_cast<std::size_t>(b)];
        }
        ops.push_back(std::move(m));
    }
    return ops;
}

bool IoStructure::enforce_completeness() {
    const std::size_t k = num_kraus();
    using Vec = Eigen::VectorXcd;
    for (int b = 0; b < dim_in; ++b) {
        std::vector<Vec> basis;
        for (int prev = 0; prev < b; ++prev) {
            Vec u = Vec::Zero(static_cast<Eigen::Index>(k));
            bool any = false;
            for (std::size_t a = 0; a < k; ++a) {
                if (column_map[a][static_cast<std::size_t>(b)] == column_map[a][static_cast<std::size_t>(prev)]) {
                    u(static_cast<Eigen::Index>(a)) = coeff[a][static_cast<std::size_t>(prev)];
                    any = true;
                }
            }
            if (!any) {
                continue;
            }
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto &q : basis) {
                    u -= q * q.dot(u);
                }
            }
            const double norm = u.norm();
            if (norm > 1e-12) {
                basis.push_back(u / norm);
            }
        }
        Vec v(static_cast<Eigen::Index>(k));
        for (std::size_t a = 0; a < k; ++a) {
            v(static_cast<Eigen::Index>(a)) = coeff[a][static_cast<std::size_t>(b)];
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &q : basis) {
                v -= q * q.dot(v);
            }
        }
        const double norm = v.norm();
        if (norm < 1e-9) {
            return false;
        }
        v /= norm;
        for (std::size_t a = 0; a < k; ++a) {
            coeff[a][static_cast<std::size_t>(b)] = v(static_cast<Eigen::Index>(a));
        }
    }
    return true;
}

IncoherentChannel::IncoherentChannel(IoStructure structure, TpMode mode)
    : structure_(std::move(structure)),
      channel_({structure_.dim_in}, {structure_.dim_out}, structure_.kraus_matrices(), mode) {
    if (mode == TpMode::TracePreserving && !validate_kraus(channel_).trace_preserving) {
        throw Error(ErrorCode::NotTracePreserving, "incoherent structure violates completeness");
    }
}

IncoherentChannel IncoherentChannel::from_kraus(const KrausChannel &ch) {
    const auto check = is_incoherent(ch);
    if (!check) {
        throw Error(ErrorCode::NotIncoherentFactor,
                    "Kraus operator " + std::to_string(*check.kraus_index) + " column " + std::to_string(*check.column));
    }
    IoStructure s;
    s.dim_in = static_cast<int>(total_dim(ch.in_dims()));
    s.dim_out = static_cast<int>(total_dim(ch.out_dims()));
    for (const auto &m : ch.kraus()) {
        std::vector<int> f(static_cast<std::size_t>(s.dim_in), 0);
        std::vector<Complex> c(static_cast<std::size_t>(s.dim_in), Complex{});
        for (Eigen::Index col = 0; col < m.cols(); ++col) {
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                if (std::abs(m(r, col)) > kStructuralZero) {
                    f[static_cast<std::size_t>(col)] = static_cast<int>(r);
                    c[static_cast<std::size_t>(col)] = m(r, col);
                }
            }
        }
        s.column_map.push_back(std::move(f));
        s.coeff.push_back(std::move(c));
    }
    // Keep the caller's dims split.
    IncoherentChannel out(std::move(s), ch.tp_mode());
    out.channel_ = KrausChannel(ch.in_dims(), ch.out_dims(), out.structure_.kraus_matrices(), ch.tp_mode());
    return out;
}

namespace {

IoStructure random_structure(int dim, int n_kraus, std::mt19937_64 &rng, bool permutations_only) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, dim - 1);
    IoStructure s;
    s.dim_in = dim;
    s.dim_out = dim;
    for (int a = 0; a < n_kraus; ++a) {
        std::vector<int> f(static_cast<std::size_t>(dim));
        if (permutations_only) {
            std::iota(f.begin(), f.end(), 0);
            std::shuffle(f.begin(), f.end(), rng);
        } else {
            for (auto &x : f) {
                x = pick(rng);
            }
        }
        std::vector<Complex> c(static_cast<std::size_t>(dim));
        for (auto &x : c) {
            const double re = normal(rng);
            const double im = normal(rng);
            x = Complex(re, im);
        }
        s.column_map.push_back(std::move(f));
        s.coeff.push_back(std::move(c));
    }
    return s;
}

}  // namespace

IncoherentChannel sample_random_io(int dim, int n_kraus, std::uint64_t seed) {
    if (n_kraus < 1 || dim < 2) {
        throw Error(ErrorCode::InvalidArgument, "sample_random_io needs n_kraus >= 1 and dim >= 2");
    }
    std::mt19937_64 rng(seed);
    constexpr int kFreeAttempts = 64;
    for (int attempt = 0;; ++attempt) {
        IoStructure s = random_structure(dim, n_kraus, rng, attempt >= kFreeAttempts);
        if (s.enforce_completeness()) {
            return IncoherentChannel(std::move(s));
        }
    }
}

KrausChannel SioChannel::to_kraus() const {
    std::vector<ComplexMatrix> ops;
    for (const auto &term : terms_) {
        const KrausChannel joint = tensor_channels(term.factors);
        ops.insert(ops.end(), joint.kraus().begin(), joint.kraus().end());
    }
    return KrausChannel(in_dims_, out_dims_, std::move(ops));
}

SioChannel build_sio(std::vector<SioTerm> terms, const Tolerances &tol) {
    if (terms.empty() || terms.front().factors.empty()) {
        throw Error(ErrorCode::InvalidArgument, "SIO needs at least one term with at least one site");
    }
    SioChannel ch;
    for (const auto &f : terms.front().factors) {
        if (f.in_dims().size() != 1 || f.out_dims().size() != 1) {
            throw Error(ErrorCode::DimensionMismatch, "SIO factors must act on a single site");
        }
        ch.in_dims_.push_back(f.in_dims()[0]);
        ch.out_dims_.push_back(f.out_dims()[0]);
    }
    const auto n_in = static_cast<Eigen::Index>(total_dim(ch.in_dims_));
    ComplexMatrix sum = ComplexMatrix::Zero(n_in, n_in);
    for (const auto &term : terms) {
        if (term.factors.size() != ch.in_dims_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "term " + std::to_string(term.label) + " has a different site count");
        }
        ComplexMatrix local = ComplexMatrix::Ones(1, 1);
        for (std::size_t s = 0; s < term.factors.size(); ++s) {
            const auto &f = term.factors[s];
            if (f.in_dims().size() != 1 || f.in_dims()[0] != ch.in_dims_[s] || f.out_dims().size() != 1 ||
                f.out_dims()[0] != ch.out_dims_[s]) {
                throw Error(ErrorCode::DimensionMismatch,
                            "term " + std::to_string(term.label) + " site " + std::to_string(s) + " dims differ");
            }
            const auto check = is_incoherent(f);
            if (!check) {
                throw Error(ErrorCode::NotIncoherentFactor, "term " + std::to_string(term.label) + " site " +
                                                                std::to_string(s) + " Kraus " +
                                                                std::to_string(*check.kraus_index) + " column " +
                                                                std::to_string(*check.column));
            }
            local = kron(local, f.completeness());
        }
        sum += local;
    }
    const double dev = max_abs_diff(sum, ComplexMatrix::Identity(n_in, n_in));
    if (dev > std::max(tol.eq, tol.trace)) {
        throw Error(ErrorCode::NotTracePreservingSum, "completeness deviation " + std::to_string(dev));
    }
    ch.terms_ = std::move(terms);
    return ch;
}

DensityOperator apply(const SioChannel &ch, const DensityOperator &rho) {
    if (rho.dims() != ch.in_dims()) {
        throw Error(ErrorCode::DimensionMismatch, "state " + dims_str(rho.dims()) + " vs SIO " + dims_str(ch.in_dims()));
    }
    ComplexMatrix acc;
    for (const auto &term : ch.terms()) {
        ComplexMatrix x = rho.matrix();
        Dims dims = rho.dims();
        for (int s = 0; s < ch.num_sites(); ++s) {
            x = conjugate_on_site(term.factors[static_cast<std::size_t>(s)].kraus(), x, dims, s);
            dims[static_cast<std::size_t>(s)] = ch.out_dims()[static_cast<std::size_t>(s)];
        }
        if (acc.size() == 0) {
            acc = std::move(x);
        } else {
            acc += x;
        }
    }
    const double tr = acc.trace().real();
    if (std::abs(tr - 1.0) > 1e-8) {
        throw Error(ErrorCode::NotTracePreservingSum, "output trace " + std::to_string(tr));
    }
    acc = 0.5 * (acc + acc.adjoint());
    return detail::adopt(ch.out_dims(), std::move(acc));
}

namespace {

// Splits the Kraus operators of a trace-preserving IO channel into
// outcome groups (operator a goes to group a mod n_groups); empty groups are
// dropped.
std::vector<KrausChannel> split_instrument(const IncoherentChannel &io, int n_groups) {
    std::vector<std::vector<ComplexMatrix>> groups(static_cast<std::size_t>(n_groups));
    const auto &ops = io.channel().kraus();
    for (std::size_t a = 0; a < ops.size(); ++a) {
        groups[a % static_cast<std::size_t>(n_groups)].push_back(ops[a]);
    }
    std::vector<KrausChannel> out;
    for (auto &g : groups) {
        if (!g.empty()) {
            out.emplace_back(io.channel().in_dims(), io.channel().out_dims(), std::move(g), TpMode::TraceNonIncreasing);
        }
    }
    return out;
}

}  // namespace

SioChannel sample_random_sio(const Dims &site_dims, int n_branches, int n_kraus, std::uint64_t seed) {
    if (site_dims.empty() || n_branches < 1 || n_kraus < 1) {
        throw Error(ErrorCode::InvalidArgument, "sample_random_sio needs sites, branches >= 1 and n_kraus >= 1");
    }
    std::mt19937_64 rng(seed);
    std::vector<int> order(site_dims.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    // Each partial term holds the factors fixed so far; unset sites are empty.
    struct Partial {
        std::vector<std::optional<KrausChannel>> factors;
    };
    std::vector<Partial> partial{Partial{std::vector<std::optional<KrausChannel>>(site_dims.size())}};
    for (std::size_t depth = 0; depth < order.size(); ++depth) {
        const auto site = static_cast<std::size_t>(order[depth]);
        const bool last = depth + 1 == order.size();
        std::vector<Partial> next;
        for (const auto &p : partial) {
            const IncoherentChannel io = sample_random_io(site_dims[site], n_kraus, rng());
            if (last) {
                Partial q = p;
                q.factors[site] = io.channel();
                next.push_back(std::move(q));
                continue;
            }
            for (auto &branch : split_instrument(io, n_branches)) {
                Partial q = p;
                q.factors[site] = std::move(branch);
                next.push_back(std::move(q));
            }
        }
        partial = std::move(next);
    }
    std::vector<SioTerm> terms;
    for (std::size_t b = 0; b < partial.size(); ++b) {
        SioTerm t;
        t.label = static_cast<int>(b);
        for (auto &f : partial[b].factors) {
            t.factors.push_back(std::move(*f));
        }
        terms.push_back(std::move(t));
    }
    return build_sio(std::move(terms), Tolerances{1e-10, 1e-9, 1e-9, 1e-9});
}

}  // namespace qcensor

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

#include "qcensor/censorship.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qcensor/error.h"

namespace qcensor {

namespace {

KrausChannel omega_kraus(double epsilon, int dim) {
    std::vector<ComplexMatrix> ops;
    if (epsilon > 0.0) {
        ops.push_back(std::sqrt(epsilon) * ComplexMatrix::Identity(dim, dim));
    }
    const double w = std::sqrt(1.0 - epsilon);
    for (int a = 0; a < dim; ++a) {
        ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
        p(a, a) = w;
        ops.push_back(std::move(p));
    }
    return KrausChannel({dim}, {dim}, std::move(ops));
}

// U_outer U_inner as a single permutation-phase unitary.
FreeUnitary product(const FreeUnitary &outer, const FreeUnitary &inner) {
    const std::size_t n = inner.permutation.size();
    FreeUnitary out;
    out.permutation.resize(n);
    out.phases.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        const auto mid = static_cast<std::size_t>(inner.permutation[a]);
        out.permutation[a] = outer.permutation[mid];
        out.phases[a] = inner.phases[a] + outer.phases[mid];
    }
    return out;
}

}  // namespace

CensorChannel::CensorChannel(double epsilon, int base_dim, std::optional<FreeUnitary> conjugation)
    : epsilon_(epsilon),
      base_dim_(base_dim),
      conjugation_(std::move(conjugation)),
      channel_(KrausChannel::identity({2})) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw Error(ErrorCode::EpsilonOutOfRange, "epsilon = " + std::to_string(epsilon) + " not in [0, 1)");
    }
    if (base_dim < 2) {
        throw Error(ErrorCode::InvalidArgument, "base dimension " + std::to_string(base_dim) + " < 2");
    }
    channel_ = omega_kraus(epsilon, base_dim);
    if (conjugation_) {
        const KrausChannel phi = make_free_unitary(*conjugation_, base_dim);
        const KrausChannel phi_inv = make_free_unitary(conjugation_->inverse(), base_dim);
        channel_ = compose(phi_inv, compose(channel_, phi));
    }
}

CensorChannel make_omega(double epsilon, int dim) {
    return CensorChannel(epsilon, dim);
}

CensorChannel conjugate_omega(const CensorChannel &ch, const FreeUnitary &phi) {
    if (phi.permutation.size() != static_cast<std::size_t>(ch.base_dim())) {
        throw Error(ErrorCode::DimensionMismatch, "free unitary dimension " + std::to_string(phi.permutation.size()) +
                                                      " vs censor dimension " + std::to_string(ch.base_dim()));
    }
    // Phi^-1 (Psi^-1 Omega Psi) Phi = (Psi Phi)^-1 Omega (Psi Phi)
    FreeUnitary total = ch.conjugation() ? product(*ch.conjugation(), phi) : phi;
    return CensorChannel(ch.epsilon(), ch.base_dim(), std::move(total));
}

DensityOperator censor_network(const DensityOperator &rho, const CensorChannel &ch) {
    for (int s = 0; s < rho.num_sites(); ++s) {
        if (rho.dims()[static_cast<std::size_t>(s)] != ch.base_dim()) {
            throw Error(ErrorCode::DimensionMismatch, "site " + std::to_string(s) + " has dimension " +
                                                          std::to_string(rho.dims()[static_cast<std::size_t>(s)]) +
                                                          ", censor acts on " + std::to_string(ch.base_dim()));
        }
    }
    ComplexMatrix m = rho.matrix();
    for (int s = 0; s < rho.num_sites(); ++s) {
        m = conjugate_on_site(ch.channel().kraus(), m, rho.dims(), s);
    }
    m = 0.5 * (m + m.adjoint());
    return detail::adopt(rho.dims(), std::move(m));
}

DensityOperator censor_network_expansion(const DensityOperator &rho, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw Error(ErrorCode::EpsilonOutOfRange, "epsilon = " + std::to_string(epsilon));
    }
    const int n = rho.num_sites();
    ComplexMatrix acc = ComplexMatrix::Zero(rho.dim(), rho.dim());
    for (unsigned subset = 0; subset < (1u << n); ++subset) {
        int dephased = 0;
        ComplexMatrix term = rho.matrix();
        for (int s = 0; s < n; ++s) {
            if ((subset >> s) & 1u) {
                ++dephased;
                const int d = rho.dims()[static_cast<std::size_t>(s)];
                std::vector<ComplexMatrix> projectors;
                for (int a = 0; a < d; ++a) {
                    ComplexMatrix p = ComplexMatrix::Zero(d, d);
                    p(a, a) = 1.0;
                    projectors.push_back(std::move(p));
                }
                term = conjugate_on_site(projectors, term, rho.dims(), s);
            }
        }
        acc += std::pow(epsilon, n - dephased) * std::pow(1.0 - epsilon, dephased) * term;
    }
    return detail::adopt(rho.dims(), std::move(acc));
}

void RecoverySearchBudget::check() const {
    if (n_restarts < 1 || n_kraus_max < 1 || max_iterations < 1) {
        throw Error(ErrorCode::InvalidArgument, "search budget counts must be positive");
    }
}

std::string_view family_name(Family f) {
    switch (f) {
        case Family::IO: return "IO";
        case Family::SIO: return "SIO";
        case Family::LocalIO: return "local-IO";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    if (name == "IO") {
        return Family::IO;
    }
    if (name == "SIO") {
        return Family::SIO;
    }
    if (name == "local-IO") {
        return Family::LocalIO;
    }
    throw Error(ErrorCode::UnknownFamily, std::string(name));
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::SecureWitnessed: return "SecureWitnessed";
        case Verdict::BreakableWitnessed: return "BreakableWitnessed";
        case Verdict::Undecided: return "Undecided";
    }
    return "?";
}

SecurityVerdict evaluate_security(const DensityOperator &rho, const CensorChannel &ch,
                                  const RecoverySearchBudget &budget, Family family) {
    if (is_incoherent_state(rho)) {
        throw Error(ErrorCode::TargetIsFree, "security of an incoherent target is vacuous");
    }
    budget.check();
    const DensityOperator censored = censor_network(rho, ch);
    SecurityVerdict out;
    out.monotone_pre = l1_coherence(rho);
    out.monotone_post = l1_coherence(censored);
    RecoveryResult rec = recovery_search(censored, rho, family, budget);
    out.best_fidelity = rec.fidelity;
    const bool dropped = out.monotone_post < out.monotone_pre - kFreeStateTol;
    const bool recovered = rec.fidelity >= 1.0 - kRecoveryTol;
    if (dropped && recovered) {
        throw std::logic_error("recovery search contradicts the l1 monotone witness");
    }
    out.verdict = dropped ? Verdict::SecureWitnessed : recovered ? Verdict::BreakableWitnessed : Verdict::Undecided;
    out.recovery = std::move(rec);
    return out;
}

BallResult epsilon_ball_recovery(const DensityOperator &censored, const DensityOperator &target, double ball_radius,
                                 Family family, const RecoverySearchBudget &budget, BallMetric metric) {
    if (!(ball_radius >= 0.0 && ball_radius <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "ball radius " + std::to_string(ball_radius) + " not in [0, 1]");
    }
    const Objective objective = metric == BallMetric::TraceDistance ? Objective::TraceDistance : Objective::Fidelity;
    RecoveryResult rec = recovery_search(censored, target, family, budget, objective);
    const double distance = metric == BallMetric::TraceDistance ? rec.trace_distance : 1.0 - rec.fidelity;
    // A zero radius means exact recovery, judged at the recovery tolerance.
    const bool within = distance <= ball_radius + kRecoveryTol;
    return BallResult{within, std::move(rec.output), distance};
}

Instrument::Instrument(std::vector<KrausChannel> branches, const Tolerances &tol) : branches_(std::move(branches)) {
    if (branches_.empty()) {
        throw Error(ErrorCode::InstrumentNotTP, "instrument has no branches");
    }
    const auto n = static_cast<Eigen::Index>(total_dim(branches_.front().in_dims()));
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const auto &b = branches_[i];
        if (total_dim(b.in_dims()) != total_dim(branches_.front().in_dims()) ||
            total_dim(b.out_dims()) != total_dim(branches_.front().out_dims())) {
            throw Error(ErrorCode::DimensionMismatch, "branch " + std::to_string(i) + " dims differ");
        }
        if (!is_incoherent(b)) {
            throw Error(ErrorCode::NotIncoherentFactor, "branch " + std::to_string(i));
        }
        sum += b.completeness();
    }
    const double dev = max_abs_diff(sum, ComplexMatrix::Identity(n, n));
    if (dev > std::max(tol.eq, tol.trace)) {
        throw Error(ErrorCode::InstrumentNotTP, "completeness deviation " + std::to_string(dev));
    }
}

Instrument sample_random_instrument(const Dims &dims, int n_branches, int n_kraus, std::uint64_t seed) {
    if (n_branches < 1 || n_kraus < n_branches) {
        throw Error(ErrorCode::InvalidArgument, "need 1 <= n_branches <= n_kraus");
    }
    const IncoherentChannel io = sample_random_io(static_cast<int>(total_dim(dims)), n_kraus, seed);
    std::vector<std::vector<ComplexMatrix>> groups(static_cast<std::size_t>(n_branches));
    const auto &ops = io.channel().kraus();
    for (std::size_t a = 0; a < ops.size(); ++a) {
        groups[a % groups.size()].push_back(ops[a]);
    }
    std::vector<KrausChannel> branches;
    for (auto &g : groups) {
        branches.emplace_back(dims, dims, std::move(g), TpMode::TraceNonIncreasing);
    }
    return Instrument(std::move(branches), Tolerances{1e-10, 1e-9, 1e-9, 1e-9});
}

std::vector<BranchOutcome> probabilistic_recovery(const DensityOperator &censored, const DensityOperator &target,
                                                  const Instrument &inst) {
    if (censored.dim() != target.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "censored and target dimensions differ");
    }
    std::vector<BranchOutcome> out;
    for (std::size_t i = 0; i < inst.branches().size(); ++i) {
        const Operator branch = apply_branch(inst.branches()[i], censored);
        BranchOutcome r;
        r.branch = i;
        r.probability = std::max(0.0, branch.trace());
        if (r.probability > 1e-12) {
            ComplexMatrix m = branch.matrix / branch.trace();
            m = 0.5 * (m + m.adjoint());
            const DensityOperator renorm = detail::adopt(target.dims(), m);
            r.fidelity = fidelity(renorm, target);
            r.success = max_abs_diff(m, target.matrix()) <= kRecoveryTol;
        }
        out.push_back(r);
    }
    return out;
}

PsecVerdict p_sec_check(const std::vector<BranchOutcome> &results, double p_sec) {
    if (!(p_sec > 0.0 && p_sec <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "p_sec = " + std::to_string(p_sec) + " not in (0, 1]");
    }
    for (const auto &r : results) {
        if (r.success && r.probability >= p_sec) {
            return PsecVerdict::Breakable;
        }
    }
    return PsecVerdict::Secure;
}

FreeChannelOutput FreeChannelOutput::produce(const KrausChannel &free_channel, const DensityOperator &input) {
    const auto check = is_incoherent(free_channel);
    if (!check) {
        throw Error(ErrorCode::NotIncoherentFactor, "channel is not an incoherent operation");
    }
    if (free_channel.tp_mode() != TpMode::TracePreserving || !validate_kraus(free_channel).trace_preserving) {
        throw Error(ErrorCode::NotTracePreserving, "free channel must be trace preserving");
    }
    DensityOperator out = apply(free_channel, input);
    return FreeChannelOutput(input, std::move(out), free_channel);
}

std::string_view comparability_name(Comparability c) {
    return c == Comparability::StrictlyReduced ? "StrictlyReduced" : "Recoverable";
}

ComparabilityResult classify_comparability(const DensityOperator &rho, const FreeChannelOutput &post,
                                           const RecoverySearchBudget &budget) {
    if (rho.dim() != post.input().dim() || max_abs_diff(rho.matrix(), post.input().matrix()) > 1e-10) {
        throw Error(ErrorCode::PostStateNotReachable, "post state was produced from a different input");
    }
    ComparabilityResult r;
    r.monotone_input = l1_coherence(rho);
    r.monotone_output = l1_coherence(post.state());
    if (r.monotone_output < r.monotone_input - kFreeStateTol) {
        r.kind = Comparability::StrictlyReduced;
        r.monotone_witness = true;
        return r;
    }

    const DensityOperator &out = post.state();
    std::vector<KrausChannel> candidates;
    candidates.push_back(KrausChannel::identity(out.dims()));
    const KrausChannel &ch = post.channel();
    if (ch.size() == 1) {
        const ComplexMatrix &u = ch.kraus().front();
        if (u.rows() == u.cols() && max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(u.rows(), u.cols())) < 1e-10) {
            KrausChannel inv(ch.out_dims(), ch.in_dims(), {u.adjoint()});
            if (is_incoherent(inv)) {
                candidates.push_back(std::move(inv));
            }
        }
    }
    for (auto &c : candidates) {
        const DensityOperator back = apply(c, out);
        const double f = fidelity(back, rho);
        if (f >= 1.0 - kRecoveryTol) {
            r.kind = Comparability::Recoverable;
            r.recovery = std::move(c);
            r.recovery_fidelity = f;
            return r;
        }
    }
    RecoveryResult rec = recovery_search(out, rho, Family::IO, budget);
    r.recovery_fidelity = rec.fidelity;
    if (rec.fidelity >= 1.0 - kRecoveryTol) {
        r.kind = Comparability::Recoverable;
        r.recovery = std::move(rec.channel);
    } else {
        r.kind = Comparability::StrictlyReduced;
    }
    return r;
}

}  // namespace qcensor

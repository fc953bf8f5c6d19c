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

#ifndef QCENSOR_CENSORSHIP_H
#define QCENSOR_CENSORSHIP_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcensor/channel.h"
#include "qcensor/coherence.h"
#include "qcensor/state.h"

namespace qcensor {

/// Recovery counts as exact when the achieved fidelity reaches 1 - kRecoveryTol.
inline constexpr double kRecoveryTol = 1e-9;

/// The coherence-reducing channel rho -> eps rho + (1 - eps) Delta(rho) on a
/// single site, optionally conjugated by a free unitary Phi as
/// Phi^-1 o Omega o Phi.
class CensorChannel {
  public:
    /// Throws EpsilonOutOfRange unless 0 <= epsilon < 1.
    CensorChannel(double epsilon, int base_dim, std::optional<FreeUnitary> conjugation = std::nullopt);

    double epsilon() const noexcept {
        return epsilon_;
    }
    int base_dim() const noexcept {
        return base_dim_;
    }
    const std::optional<FreeUnitary> &conjugation() const noexcept {
        return conjugation_;
    }
    /// Kraus realization {sqrt(eps) I} u {sqrt(1 - eps) |a><a|}, conjugated
    /// when a free unitary is attached. The zero operator is omitted at eps = 0.
    const KrausChannel &channel() const noexcept {
        return channel_;
    }

  private:
    double epsilon_;
    int base_dim_;
    std::optional<FreeUnitary> conjugation_;
    KrausChannel channel_;
};

CensorChannel make_omega(double epsilon, int dim);

/// Phi^-1 o ch o Phi. Conjugating twice composes the free unitaries.
CensorChannel conjugate_omega(const CensorChannel &ch, const FreeUnitary &phi);

/// Applies the censor to every site of `rho`. Throws DimensionMismatch if a
/// site dimension differs from ch.base_dim().
DensityOperator censor_network(const DensityOperator &rho, const CensorChannel &ch);

/// The same output written as the 2^N-term mixture
/// sum_S eps^(N-|S|) (1-eps)^|S| (Delta on S, identity elsewhere)(rho).
DensityOperator censor_network_expansion(const DensityOperator &rho, double epsilon);

struct RecoverySearchBudget {
    int n_restarts = 20;
    int n_kraus_max = 8;
    int max_iterations = 200;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument unless every count is positive.
    void check() const;
};

/// Channel families available to the recovering receivers.
enum class Family {
    IO,       // joint incoherent operations on all user sites
    SIO,      // classically coordinated local incoherent operations
    LocalIO,  // each receiver applies its own incoherent operation
};

std::string_view family_name(Family f);
/// Throws UnknownFamily.
Family parse_family(std::string_view name);

enum class Objective { Fidelity, TraceDistance };

struct RecoveryResult {
    Family family;
    KrausChannel channel;            // global Kraus form, always incoherent
    std::optional<SioChannel> sio;   // structured form for SIO and LocalIO
    DensityOperator output;
    double fidelity = 0.0;
    double trace_distance = 1.0;
    int best_restart = 0;
};

/// Randomized restarts plus cyclic coordinate ascent over the structural
/// parameters of `family`. Column maps are drawn once per restart; the
/// coefficients are refined and projected back onto the completeness
/// constraint after every move. Restart 0 starts from the identity channel,
/// so the result is never worse than doing nothing. Deterministic in
/// budget.seed; ties go to the lower restart index.
RecoveryResult recovery_search(const DensityOperator &censored, const DensityOperator &target, Family family,
                               const RecoverySearchBudget &budget, Objective objective = Objective::Fidelity);

enum class Verdict { SecureWitnessed, BreakableWitnessed, Undecided };

std::string_view verdict_name(Verdict v);

struct SecurityVerdict {
    Verdict verdict = Verdict::Undecided;
    double monotone_pre = 0.0;
    double monotone_post = 0.0;
    /// Adversarial corroboration: best fidelity found by recovery_search.
    double best_fidelity = 0.0;
    std::optional<RecoveryResult> recovery;
};

/// Secure when the l1 witness strictly drops under censorship (no
/// incoherent operation can raise it back), breakable when the search
/// finds an exact recovery, undecided otherwise. Throws TargetIsFree for an
/// incoherent `rho`.
SecurityVerdict evaluate_security(const DensityOperator &rho, const CensorChannel &ch,
                                  const RecoverySearchBudget &budget, Family family = Family::IO);

enum class BallMetric { TraceDistance, Fidelity };

struct BallResult {
    bool within = false;
    DensityOperator closest;
    /// Trace distance, or 1 - fidelity for BallMetric::Fidelity.
    double distance = 1.0;
};

/// Relaxed recovery: succeeds when some channel of `family` brings the
/// censored state within `ball_radius` of the target. Throws InvalidArgument
/// for a radius outside [0, 1].
BallResult epsilon_ball_recovery(const DensityOperator &censored, const DensityOperator &target, double ball_radius,
                                 Family family, const RecoverySearchBudget &budget,
                                 BallMetric metric = BallMetric::TraceDistance);

/// Incoherent instrument: trace-non-increasing incoherent branches whose sum
/// is trace preserving.
class Instrument {
  public:
    /// Throws NotIncoherentFactor, DimensionMismatch or InstrumentNotTP.
    explicit Instrument(std::vector<KrausChannel> branches, const Tolerances &tol = {});

    const std::vector<KrausChannel> &branches() const noexcept {
        return branches_;
    }

  private:
    std::vector<KrausChannel> branches_;
};

/// Random incoherent instrument on `dims`: a random trace-preserving IO
/// channel with `n_kraus` operators whose operators are dealt round-robin
/// into `n_branches` outcomes.
Instrument sample_random_instrument(const Dims &dims, int n_branches, int n_kraus, std::uint64_t seed);

struct BranchOutcome {
    std::size_t branch = 0;
    double probability = 0.0;
    bool success = false;
    double fidelity = 0.0;  // of the renormalized branch output to the target
};

/// Per branch: p_a = Tr(branch(censored)) and whether the renormalized
/// output equals the target within kRecoveryTol entrywise.
std::vector<BranchOutcome> probabilistic_recovery(const DensityOperator &censored, const DensityOperator &target,
                                                  const Instrument &inst);

enum class PsecVerdict { Secure, Breakable };

/// Breakable iff some successful branch has probability >= p_sec. Throws
/// InvalidArgument unless p_sec is in (0, 1].
PsecVerdict p_sec_check(const std::vector<BranchOutcome> &results, double p_sec);

/// A state tagged as the output of a validated free channel on a given input.
class FreeChannelOutput {
  public:
    /// Throws NotIncoherentFactor or NotTracePreserving if `free_channel` is
    /// not a trace-preserving incoherent operation.
    static FreeChannelOutput produce(const KrausChannel &free_channel, const DensityOperator &input);

    const DensityOperator &state() const noexcept {
        return state_;
    }
    const DensityOperator &input() const noexcept {
        return input_;
    }
    const KrausChannel &channel() const noexcept {
        return channel_;
    }

  private:
    FreeChannelOutput(DensityOperator input, DensityOperator state, KrausChannel channel)
        : input_(std::move(input)), state_(std::move(state)), channel_(std::move(channel)) {
    }
    DensityOperator input_;
    DensityOperator state_;
    KrausChannel channel_;
};

enum class Comparability { StrictlyReduced, Recoverable };

std::string_view comparability_name(Comparability c);

struct ComparabilityResult {
    Comparability kind = Comparability::StrictlyReduced;
    double monotone_input = 0.0;
    double monotone_output = 0.0;
    /// True when StrictlyReduced rests on a strict monotone drop rather than
    /// an exhausted search.
    bool monotone_witness = false;
    std::optional<KrausChannel> recovery;
    double recovery_fidelity = 0.0;
};

/// Every free-channel output is either strictly less resourceful than its
/// input or converts back to it; no third outcome exists because the tagged
/// channel itself witnesses input -> output. Throws PostStateNotReachable
/// when `post` was produced from a different input.
ComparabilityResult classify_comparability(const DensityOperator &rho, const FreeChannelOutput &post,
                                           const RecoverySearchBudget &budget = {});

}  // namespace qcensor

#endif

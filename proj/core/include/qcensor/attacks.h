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

#ifndef QCENSOR_ATTACKS_H
#define QCENSOR_ATTACKS_H

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcensor/censorship.h"
#include "qcensor/channel.h"
#include "qcensor/scenario.h"
#include "qcensor/state.h"

namespace qcensor {

using JointOperation = std::variant<KrausChannel, SioChannel>;

/// Users on the first sites, independents on the rest; the input is always
/// the product (user state) tensor (catalyst).
class CatalyticSetup {
  public:
    /// Throws DimensionMismatch when the catalyst or the joint operation does
    /// not fit user_dims + independent_dims.
    CatalyticSetup(Dims user_dims, Dims independent_dims, DensityOperator catalyst, JointOperation joint_op);

    const Dims &user_dims() const noexcept {
        return user_dims_;
    }
    const Dims &independent_dims() const noexcept {
        return independent_dims_;
    }
    const DensityOperator &catalyst() const noexcept {
        return catalyst_;
    }
    const JointOperation &joint_op() const noexcept {
        return joint_op_;
    }
    Dims joint_dims() const;

  private:
    Dims user_dims_;
    Dims independent_dims_;
    DensityOperator catalyst_;
    JointOperation joint_op_;
};

/// Joint output Lambda(x tensor catalyst) on all sites.
DensityOperator joint_output(const CatalyticSetup &setup, const DensityOperator &x);

/// Gamma(x) = Tr_independents[Lambda(x tensor catalyst)]: the correlated
/// catalysis map on the users.
DensityOperator catalytic_transform(const CatalyticSetup &setup, const DensityOperator &x);

struct StrictCatalysisCheck {
    bool restored = false;
    double deviation = 0.0;  // max entry deviation of the independents' state from the catalyst
};

/// Optional post-check: is the catalyst handed back intact?
StrictCatalysisCheck strict_catalysis_check(const CatalyticSetup &setup, const DensityOperator &x, double tol = 1e-9);

/// Feeds every user basis state through the catalytic map. Returns the first
/// basis index whose image is not incoherent.
std::optional<std::size_t> find_resource_creation(const CatalyticSetup &setup);

enum class AttackVerdict { Broken, Held };

std::string_view attack_verdict_name(AttackVerdict v);

struct AttackReport {
    std::string strategy;
    std::optional<DensityOperator> recovered_state;
    double fidelity_to_target = 0.0;
    AttackVerdict verdict = AttackVerdict::Held;

    double monotone_target = 0.0;     // l1 of the uncensored state
    double monotone_censored = 0.0;   // l1 after censorship
    double monotone_recovered = 0.0;  // l1 of the best recovered state
    /// Held rests on a strict l1 drop that no free operation can undo.
    bool monotone_witness = false;
    /// Held rests on an exhausted search budget only.
    bool budget_exhausted = false;

    bool swap_is_incoherent = false;
    /// Set when a free user state was mapped to a coherent one.
    bool resource_created = false;
    std::vector<double> lambdas;
    std::vector<BranchOutcome> branches;
};

/// Swap attack: independents hold a copy of the target, user site i is
/// exchanged with independent site i, independents are traced out.
AttackReport swap_attack(const DensityOperator &rho, const CensorChannel &ch);

/// Plain recovery attack: recovery_search over `family` against the
/// censored target, with Held backed by the l1 witness when it applies.
AttackReport recovery_attack(const DensityOperator &rho, const CensorChannel &ch, Family family,
                             const RecoverySearchBudget &budget);

struct SioReduction {
    SioChannel reduced;          // on the user sites
    std::vector<double> lambdas; // one per term of the joint operation
};

/// Folds the catalyst into the joint SIO: lambda_b is the trace of the
/// independents' factors applied to the catalyst, and the reduced map is
/// sum_b lambda_b (user factors of term b). The first `n_user_sites` sites
/// of `joint` are the users.
SioReduction sio_catalysis_reduce(const SioChannel &joint, int n_user_sites, const DensityOperator &catalyst);

/// One SIO catalysis attempt against the censored target.
AttackReport sio_catalysis_attack(const DensityOperator &rho, const CensorChannel &ch, const SioChannel &joint,
                                  const DensityOperator &catalyst);

/// Dispatches on scenario.strategy. Strategy::None has no attack and throws
/// UnknownStrategy. Deterministic in scenario.seed.
AttackReport run_attack_scenario(const CensorshipScenario &scenario);

}  // namespace qcensor

#endif

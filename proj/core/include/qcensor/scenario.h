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

#ifndef QCENSOR_SCENARIO_H
#define QCENSOR_SCENARIO_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcensor/censorship.h"
#include "qcensor/state.h"

namespace qcensor {

enum class Strategy { None, LocalIO, JointIO, SwapCatalysis, SioCatalysis, Probabilistic, EpsilonBall };

std::string_view strategy_name(Strategy s);
/// Throws UnknownStrategy.
Strategy parse_strategy(std::string_view name);

/// Named or random state preparation. Text forms: "plus^N", "ghz", "bell",
/// "zero" (all sites in |0>), "mixed" (maximally mixed), "random(RANK, SEED)".
struct StateSpec {
    enum class Kind { Plus, Ghz, Bell, Zero, Mixed, Random, Input };
    Kind kind = Kind::Plus;
    int rank = 1;
    std::uint64_t seed = 0;

    std::string text() const;
    /// Throws ConstraintViolation(key) for malformed text. "input" is only
    /// accepted when `allow_input` is set (catalyst specs).
    static StateSpec parse(std::string_view text, std::string_view key, bool allow_input = false);

    friend bool operator==(const StateSpec &, const StateSpec &) = default;
};

/// One censorship experiment.
struct CensorshipScenario {
    int n_users = 1;
    int n_independents = 0;
    int site_dim = 2;
    double epsilon = 0.5;
    StateSpec input_spec;
    Strategy strategy = Strategy::None;
    RecoverySearchBudget budget;
    std::optional<double> p_sec;
    std::optional<double> ball_radius;
    /// Independents' catalyst; defaults to the input for swap-catalysis and
    /// to the maximally coherent state for SIO-catalysis.
    std::optional<StateSpec> catalyst;
    std::uint64_t seed = 0;

    /// Throws ConstraintViolation naming the offending key.
    void validate() const;

    Dims user_dims() const;
    Dims independent_dims() const;
    DensityOperator input_state() const;
    DensityOperator catalyst_state() const;

    friend bool operator==(const CensorshipScenario &a, const CensorshipScenario &b);
};

inline constexpr std::size_t kMaxTotalDim = 4096;

}  // namespace qcensor

#endif

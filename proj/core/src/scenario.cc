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

#include "qcensor/scenario.h"

#include <charconv>
#include <cmath>

#include "qcensor/error.h"

namespace qcensor {

namespace {

Error violation(std::string_view key, const std::string &what) {
    return Error(ErrorCode::ConstraintViolation, std::string(key) + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::None: return "none";
        case Strategy::LocalIO: return "local-IO";
        case Strategy::JointIO: return "joint-IO";
        case Strategy::SwapCatalysis: return "swap-catalysis";
        case Strategy::SioCatalysis: return "SIO-catalysis";
        case Strategy::Probabilistic: return "probabilistic";
        case Strategy::EpsilonBall: return "epsilon-ball";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    for (Strategy s : {Strategy::None, Strategy::LocalIO, Strategy::JointIO, Strategy::SwapCatalysis,
                       Strategy::SioCatalysis, Strategy::Probabilistic, Strategy::EpsilonBall}) {
        if (strategy_name(s) == name) {
            return s;
        }
    }
    throw Error(ErrorCode::UnknownStrategy, std::string(name));
}

std::string StateSpec::text() const {
    switch (kind) {
        case Kind::Plus: return "plus^N";
        case Kind::Ghz: return "ghz";
        case Kind::Bell: return "bell";
        case Kind::Zero: return "zero";
        case Kind::Mixed: return "mixed";
        case Kind::Input: return "input";
        case Kind::Random: return "random(" + std::to_string(rank) + ", " + std::to_string(seed) + ")";
    }
    return "?";
}

StateSpec StateSpec::parse(std::string_view text, std::string_view key, bool allow_input) {
    text = trim(text);
    StateSpec spec;
    if (text == "plus^N" || text == "plus") {
        spec.kind = Kind::Plus;
        return spec;
    }
    if (text == "ghz") {
        spec.kind = Kind::Ghz;
        return spec;
    }
    if (text == "bell") {
        spec.kind = Kind::Bell;
        return spec;
    }
    if (text == "zero") {
        spec.kind = Kind::Zero;
        return spec;
    }
    if (text == "mixed") {
        spec.kind = Kind::Mixed;
        return spec;
    }
    if (text == "input" && allow_input) {
        spec.kind = Kind::Input;
        return spec;
    }
    constexpr std::string_view prefix = "random(";
    if (text.substr(0, prefix.size()) == prefix && text.back() == ')') {
        std::string_view args = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        const auto comma = args.find(',');
        if (comma == std::string_view::npos) {
            throw violation(key, "random(...) needs rank and seed");
        }
        const std::string_view rank_s = trim(args.substr(0, comma));
        const std::string_view seed_s = trim(args.substr(comma + 1));
        spec.kind = Kind::Random;
        auto r1 = std::from_chars(rank_s.data(), rank_s.data() + rank_s.size(), spec.rank);
        auto r2 = std::from_chars(seed_s.data(), seed_s.data() + seed_s.size(), spec.seed);
        if (r1.ec != std::errc{} || r1.ptr != rank_s.data() + rank_s.size() || r2.ec != std::errc{} ||
            r2.ptr != seed_s.data() + seed_s.size()) {
            throw violation(key, "malformed random(rank, seed)");
        }
        if (spec.rank < 1) {
            throw violation(key, "rank must be >= 1");
        }
        return spec;
    }
    throw violation(key, "unknown state '" + std::string(text) + "'");
}

void CensorshipScenario::validate() const {
    if (n_users < 1) {
        throw violation("n_users", "must be >= 1");
    }
    if (n_independents < 0) {
        throw violation("n_independents", "must be >= 0");
    }
    if (site_dim < 2) {
        throw violation("site_dim", "must be >= 2");
    }
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw violation("epsilon", "must lie in [0, 1)");
    }
    double total = std::pow(static_cast<double>(site_dim), n_users + n_independents);
    if (total > static_cast<double>(kMaxTotalDim)) {
        throw violation("site_dim", "total dimension exceeds " + std::to_string(kMaxTotalDim));
    }
    if (budget.n_restarts < 1) {
        throw violation("n_restarts", "must be >= 1");
    }
    if (budget.n_kraus_max < 1) {
        throw violation("n_kraus_max", "must be >= 1");
    }
    if (budget.max_iterations < 1) {
        throw violation("max_iterations", "must be >= 1");
    }
    const double user_dim = std::pow(static_cast<double>(site_dim), n_users);
    if (input_spec.kind == StateSpec::Kind::Bell && (n_users != 2)) {
        throw violation("input_spec", "bell needs n_users = 2");
    }
    if (input_spec.kind == StateSpec::Kind::Random && input_spec.rank > user_dim) {
        throw violation("input_spec", "rank exceeds user dimension");
    }
    if (input_spec.kind == StateSpec::Kind::Input) {
        throw violation("input_spec", "'input' is only valid for the catalyst");
    }
    if (p_sec && !(*p_sec > 0.0 && *p_sec <= 1.0)) {
        throw violation("p_sec", "must lie in (0, 1]");
    }
    if (ball_radius && !(*ball_radius >= 0.0 && *ball_radius <= 1.0)) {
        throw violation("ball_radius", "must lie in [0, 1]");
    }
    switch (strategy) {
        case Strategy::EpsilonBall:
            if (!ball_radius) {
                throw violation("ball_radius", "required for strategy epsilon-ball");
            }
            break;
        case Strategy::Probabilistic:
            if (!p_sec) {
                throw violation("p_sec", "required for strategy probabilistic");
            }
            break;
        case Strategy::SwapCatalysis:
            if (n_independents != n_users) {
                throw violation("n_independents", "swap-catalysis pairs every user with one independent");
            }
            if (catalyst && catalyst->kind != StateSpec::Kind::Input) {
                throw violation("catalyst", "swap-catalysis uses the input state as catalyst");
            }
            break;
        case Strategy::SioCatalysis:
            if (n_independents < 1) {
                throw violation("n_independents", "SIO-catalysis needs at least one independent");
            }
            break;
        default: break;
    }
    if (catalyst && n_independents == 0) {
        throw violation("catalyst", "no independents to hold a catalyst");
    }
    if (catalyst) {
        if (catalyst->kind == StateSpec::Kind::Bell && n_independents != 2) {
            throw violation("catalyst", "bell needs n_independents = 2");
        }
        if (catalyst->kind == StateSpec::Kind::Input && n_independents != n_users) {
            throw violation("catalyst", "input catalyst needs n_independents = n_users");
        }
        if (catalyst->kind == StateSpec::Kind::Random &&
            catalyst->rank > std::pow(static_cast<double>(site_dim), n_independents)) {
            throw violation("catalyst", "rank exceeds independent dimension");
        }
    }
}

Dims CensorshipScenario::user_dims() const {
    return Dims(static_cast<std::size_t>(n_users), site_dim);
}

Dims CensorshipScenario::independent_dims() const {
    return Dims(static_cast<std::size_t>(n_independents), site_dim);
}

namespace {

DensityOperator build_state(const StateSpec &spec, const Dims &dims) {
    switch (spec.kind) {
        case StateSpec::Kind::Plus: return maximally_coherent_state(dims);
        case StateSpec::Kind::Ghz: return ghz_state(dims);
        case StateSpec::Kind::Bell: return ghz_state(dims);
        case StateSpec::Kind::Zero: return basis_state(dims, 0);
        case StateSpec::Kind::Mixed: return maximally_mixed(dims);
        case StateSpec::Kind::Random: return random_density(dims, spec.rank, spec.seed);
        case StateSpec::Kind::Input: break;
    }
    throw Error(ErrorCode::InvalidArgument, "state spec needs a source state");
}

}  // namespace

DensityOperator CensorshipScenario::input_state() const {
    return build_state(input_spec, user_dims());
}

DensityOperator CensorshipScenario::catalyst_state() const {
    if (n_independents == 0) {
        throw violation("catalyst", "no independents");
    }
    StateSpec spec;
    if (catalyst) {
        spec = *catalyst;
    } else {
        spec.kind = strategy == Strategy::SwapCatalysis ? StateSpec::Kind::Input : StateSpec::Kind::Plus;
    }
    if (spec.kind == StateSpec::Kind::Input) {
        return input_state();
    }
    return build_state(spec, independent_dims());
}

bool operator==(const CensorshipScenario &a, const CensorshipScenario &b) {
    return a.n_users == b.n_users && a.n_independents == b.n_independents && a.site_dim == b.site_dim &&
           a.epsilon == b.epsilon && a.input_spec == b.input_spec && a.strategy == b.strategy &&
           a.budget.n_restarts == b.budget.n_restarts && a.budget.n_kraus_max == b.budget.n_kraus_max &&
           a.budget.max_iterations == b.budget.max_iterations && a.budget.seed == b.budget.seed &&
           a.p_sec == b.p_sec && a.ball_radius == b.ball_radius && a.catalyst == b.catalyst && a.seed == b.seed;
}

}  // namespace qcensor

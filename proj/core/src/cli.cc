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

#include "qcensor/cli.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "qcensor/attacks.h"
#include "qcensor/coherence.h"
#include "qcensor/error.h"

namespace qcensor {

namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

Error syntax(int line, const std::string &what) {
    return Error(ErrorCode::SyntaxError, "line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw Error(ErrorCode::ConstraintViolation, std::string(key) + ": '" + std::string(value) + "' is not a number");
    }
    return out;
}

using Setter = std::function<void(CensorshipScenario &, std::string_view)>;

const std::map<std::string, Setter, std::less<>> &top_level_keys() {
    static const std::map<std::string, Setter, std::less<>> keys = {
        {"n_users", [](auto &s, auto v) { s.n_users = parse_number<int>("n_users", v); }},
        {"n_independents", [](auto &s, auto v) { s.n_independents = parse_number<int>("n_independents", v); }},
        {"site_dim", [](auto &s, auto v) { s.site_dim = parse_number<int>("site_dim", v); }},
        {"epsilon", [](auto &s, auto v) { s.epsilon = parse_number<double>("epsilon", v); }},
        {"input_spec", [](auto &s, auto v) { s.input_spec = StateSpec::parse(v, "input_spec"); }},
        {"strategy",
         [](auto &s, auto v) {
             try {
                 s.strategy = parse_strategy(v);
             } catch (const Error &) {
                 throw Error(ErrorCode::ConstraintViolation, "strategy: unknown strategy '" + std::string(v) + "'");
             }
         }},
        {"p_sec", [](auto &s, auto v) { s.p_sec = parse_number<double>("p_sec", v); }},
        {"ball_radius", [](auto &s, auto v) { s.ball_radius = parse_number<double>("ball_radius", v); }},
        {"catalyst", [](auto &s, auto v) { s.catalyst = StateSpec::parse(v, "catalyst", true); }},
        {"seed", [](auto &s, auto v) { s.seed = parse_number<std::uint64_t>("seed", v); }},
    };
    return keys;
}

const std::map<std::string, Setter, std::less<>> &budget_keys() {
    static const std::map<std::string, Setter, std::less<>> keys = {
        {"n_restarts", [](auto &s, auto v) { s.budget.n_restarts = parse_number<int>("budget.n_restarts", v); }},
        {"n_kraus_max", [](auto &s, auto v) { s.budget.n_kraus_max = parse_number<int>("budget.n_kraus_max", v); }},
        {"max_iterations",
         [](auto &s, auto v) { s.budget.max_iterations = parse_number<int>("budget.max_iterations", v); }},
    };
    return keys;
}

struct Block {
    std::vector<std::pair<int, std::string_view>> lines;
};

CensorshipScenario parse_block(const Block &block) {
    CensorshipScenario s;
    bool in_budget = false;
    std::map<std::string, int, std::less<>> seen;
    for (const auto &[line_no, line] : block.lines) {
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw syntax(line_no, "unterminated section header");
            }
            const std::string_view name = trim(line.substr(1, line.size() - 2));
            if (name != "budget") {
                throw Error(ErrorCode::UnknownKey, "line " + std::to_string(line_no) + ": section [" +
                                                       std::string(name) + "]");
            }
            if (in_budget || seen.count("[budget]")) {
                throw syntax(line_no, "duplicate [budget] section");
            }
            seen.emplace("[budget]", line_no);
            in_budget = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw syntax(line_no, "expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw syntax(line_no, "missing key");
        }
        if (value.empty()) {
            throw syntax(line_no, "missing value for '" + std::string(key) + "'");
        }
        const auto &table = in_budget ? budget_keys() : top_level_keys();
        const std::string full = in_budget ? "budget." + std::string(key) : std::string(key);
        const auto it = table.find(key);
        if (it == table.end()) {
            throw Error(ErrorCode::UnknownKey, "line " + std::to_string(line_no) + ": " + full);
        }
        if (!seen.emplace(full, line_no).second) {
            throw syntax(line_no, "duplicate key '" + full + "'");
        }
        it->second(s, value);
    }
    for (const char *required : {"n_users", "epsilon", "strategy"}) {
        if (!seen.count(required)) {
            throw Error(ErrorCode::ConstraintViolation, std::string(required) + ": missing");
        }
    }
    s.validate();
    return s;
}

std::string strip_code(const Error &e) {
    const std::string what = e.what();
    const std::string prefix = std::string(error_code_name(e.code())) + ": ";
    return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

template <typename F>
auto staged(const char *stage, F &&f) {
    try {
        return f();
    } catch (const Error &e) {
        throw Error(e.code(), std::string("stage ") + stage + ": " + strip_code(e));
    }
}

Json scenario_json(const CensorshipScenario &s) {
    Json j;
    j["n_users"] = s.n_users;
    j["n_independents"] = s.n_independents;
    j["site_dim"] = s.site_dim;
    j["epsilon"] = s.epsilon;
    j["input_spec"] = s.input_spec.text();
    j["strategy"] = std::string(strategy_name(s.strategy));
    j["budget"] = Json{{"n_restarts", s.budget.n_restarts},
                       {"n_kraus_max", s.budget.n_kraus_max},
                       {"max_iterations", s.budget.max_iterations}};
    if (s.p_sec) {
        j["p_sec"] = *s.p_sec;
    }
    if (s.ball_radius) {
        j["ball_radius"] = *s.ball_radius;
    }
    if (s.catalyst) {
        j["catalyst"] = s.catalyst->text();
    }
    j["seed"] = s.seed;
    return j;
}

CensorshipScenario scenario_from_json(const Json &j) {
    CensorshipScenario s;
    s.n_users = j.at("n_users").get<int>();
    s.n_independents = j.at("n_independents").get<int>();
    s.site_dim = j.at("site_dim").get<int>();
    s.epsilon = j.at("epsilon").get<double>();
    s.input_spec = StateSpec::parse(j.at("input_spec").get<std::string>(), "input_spec");
    s.strategy = parse_strategy(j.at("strategy").get<std::string>());
    const Json &b = j.at("budget");
    s.budget.n_restarts = b.at("n_restarts").get<int>();
    s.budget.n_kraus_max = b.at("n_kraus_max").get<int>();
    s.budget.max_iterations = b.at("max_iterations").get<int>();
    if (j.contains("p_sec")) {
        s.p_sec = j["p_sec"].get<double>();
    }
    if (j.contains("ball_radius")) {
        s.ball_radius = j["ball_radius"].get<double>();
    }
    if (j.contains("catalyst")) {
        s.catalyst = StateSpec::parse(j["catalyst"].get<std::string>(), "catalyst", true);
    }
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

}  // namespace

std::string_view version() {
    return "0.1.0";
}

std::vector<CensorshipScenario> parse_scenarios(std::string_view text) {
    std::vector<Block> blocks(1);
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line == "---") {
            blocks.emplace_back();
            continue;
        }
        blocks.back().lines.emplace_back(line_no, line);
    }
    std::vector<CensorshipScenario> out;
    for (const auto &b : blocks) {
        if (!b.lines.empty()) {
            out.push_back(parse_block(b));
        }
    }
    if (out.empty()) {
        throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": no scenario found");
    }
    return out;
}

CensorshipScenario parse_scenario(std::string_view text) {
    std::vector<CensorshipScenario> all = parse_scenarios(text);
    if (all.size() != 1) {
        throw Error(ErrorCode::SyntaxError,
                    "expected one scenario, found " + std::to_string(all.size()) + " (use batch mode)");
    }
    return std::move(all.front());
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_scenario(const CensorshipScenario &s) {
    std::ostringstream out;
    out.precision(17);
    out << "n_users = " << s.n_users << "\n";
    out << "n_independents = " << s.n_independents << "\n";
    out << "site_dim = " << s.site_dim << "\n";
    out << "epsilon = " << s.epsilon << "\n";
    out << "input_spec = " << s.input_spec.text() << "\n";
    out << "strategy = " << strategy_name(s.strategy) << "\n";
    if (s.p_sec) {
        out << "p_sec = " << *s.p_sec << "\n";
    }
    if (s.ball_radius) {
        out << "ball_radius = " << *s.ball_radius << "\n";
    }
    if (s.catalyst) {
        out << "catalyst = " << s.catalyst->text() << "\n";
    }
    out << "seed = " << s.seed << "\n";
    out << "[budget]\n";
    out << "n_restarts = " << s.budget.n_restarts << "\n";
    out << "n_kraus_max = " << s.budget.n_kraus_max << "\n";
    out << "max_iterations = " << s.budget.max_iterations << "\n";
    return out.str();
}

RunReport run(const CensorshipScenario &scenario) {
    const auto start = std::chrono::steady_clock::now();
    staged("validate", [&] {
        scenario.validate();
        return 0;
    });
    RunReport r;
    r.scenario = scenario;
    r.seed = scenario.seed;
    r.version = std::string(version());

    const DensityOperator rho = staged("input", [&] { return scenario.input_state(); });
    const DensityOperator censored =
        staged("censor", [&] { return censor_network(rho, make_omega(scenario.epsilon, scenario.site_dim)); });
    r.monotone_pre = l1_coherence(rho);
    r.monotone_post = l1_coherence(censored);

    if (scenario.strategy == Strategy::None) {
        if (is_incoherent_state(rho)) {
            r.verdict = "Free";
            r.best_fidelity = fidelity(censored, rho);
        } else {
            RecoverySearchBudget budget = scenario.budget;
            budget.seed = scenario.seed;
            const SecurityVerdict v = staged("security", [&] {
                return evaluate_security(rho, make_omega(scenario.epsilon, scenario.site_dim), budget);
            });
            r.verdict = std::string(verdict_name(v.verdict));
            r.best_fidelity = v.best_fidelity;
        }
    } else {
        const AttackReport a = staged("attack", [&] { return run_attack_scenario(scenario); });
        r.verdict = std::string(attack_verdict_name(a.verdict));
        r.best_fidelity = a.fidelity_to_target;
        if (scenario.strategy == Strategy::Probabilistic) {
            r.branches = a.branches;
        }
    }
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    r.wall_ms = std::round(elapsed.count() * 1000.0) / 1000.0;
    return r;
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json-lines") {
        return ReportFormat::JsonLines;
    }
    if (name == "human") {
        return ReportFormat::Human;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "'");
}

std::string emit_report(const RunReport &report, ReportFormat format) {
    if (format == ReportFormat::JsonLines) {
        Json j;
        j["scenario"] = scenario_json(report.scenario);
        j["seed"] = report.seed;
        j["version"] = report.version;
        j["verdict"] = report.verdict;
        j["monotone_pre"] = report.monotone_pre;
        j["monotone_post"] = report.monotone_post;
        j["best_fidelity"] = report.best_fidelity;
        if (report.branches) {
            Json branches = Json::array();
            for (const auto &b : *report.branches) {
                branches.push_back(Json{{"branch", b.branch},
                                        {"probability", b.probability},
                                        {"success", b.success},
                                        {"fidelity", b.fidelity}});
            }
            j["branches"] = std::move(branches);
        }
        j["wall_ms"] = report.wall_ms;
        return j.dump() + "\n";
    }

    const CensorshipScenario &s = report.scenario;
    std::ostringstream out;
    auto row = [&](std::string_view k, const std::string &v) {
        out << "  " << k << std::string(k.size() < 16 ? 16 - k.size() : 1, ' ') << v << "\n";
    };
    out << "scenario " << strategy_name(s.strategy) << " (" << s.n_users << " users, " << s.n_independents
        << " independents, d = " << s.site_dim << ")\n";
    row("input", s.input_spec.text());
    row("epsilon", fixed(s.epsilon, 4));
    row("seed", std::to_string(report.seed));
    row("verdict", report.verdict);
    row("l1 before", fixed(report.monotone_pre, 10));
    row("l1 after", fixed(report.monotone_post, 10));
    row("best fidelity", fixed(report.best_fidelity, 10));
    if (report.branches) {
        out << "  branch  probability   success  fidelity\n";
        for (const auto &b : *report.branches) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "  %6zu  %11.8f   %-7s  %.8f\n", b.branch, b.probability,
                          b.success ? "yes" : "no", b.fidelity);
            out << buf;
        }
    }
    row("wall ms", fixed(report.wall_ms, 3));
    row("version", report.version);
    return out.str();
}

RunReport parse_report(std::string_view line) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::SyntaxError, std::string("report: ") + e.what());
    }
    try {
        RunReport r;
        r.scenario = scenario_from_json(j.at("scenario"));
        r.seed = j.at("seed").get<std::uint64_t>();
        r.version = j.at("version").get<std::string>();
        r.verdict = j.at("verdict").get<std::string>();
        r.monotone_pre = j.at("monotone_pre").get<double>();
        r.monotone_post = j.at("monotone_post").get<double>();
        r.best_fidelity = j.at("best_fidelity").get<double>();
        if (j.contains("branches")) {
            std::vector<BranchOutcome> branches;
            for (const auto &b : j["branches"]) {
                branches.push_back(BranchOutcome{b.at("branch").get<std::size_t>(), b.at("probability").get<double>(),
                                                 b.at("success").get<bool>(), b.at("fidelity").get<double>()});
            }
            r.branches = std::move(branches);
        }
        r.wall_ms = j.at("wall_ms").get<double>();
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::SyntaxError, std::string("report: ") + e.what());
    }
}

bool same_report(const RunReport &a, const RunReport &b, bool ignore_wall_time) {
    auto same_branches = [](const auto &x, const auto &y) {
        if (x.has_value() != y.has_value()) {
            return false;
        }
        if (!x) {
            return true;
        }
        if (x->size() != y->size()) {
            return false;
        }
        for (std::size_t i = 0; i < x->size(); ++i) {
            const BranchOutcome &p = (*x)[i];
            const BranchOutcome &q = (*y)[i];
            if (p.branch != q.branch || p.probability != q.probability || p.success != q.success ||
                p.fidelity != q.fidelity) {
                return false;
            }
        }
        return true;
    };
    return a.scenario == b.scenario && a.seed == b.seed && a.version == b.version && a.verdict == b.verdict &&
           a.monotone_pre == b.monotone_pre && a.monotone_post == b.monotone_post &&
           a.best_fidelity == b.best_fidelity && same_branches(a.branches, b.branches) &&
           (ignore_wall_time || a.wall_ms == b.wall_ms);
}

}  // namespace qcensor

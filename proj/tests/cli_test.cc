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

#include <gtest/gtest.h>

#include <sstream>

#include "test_util.h"

using namespace qcensor;

namespace {

constexpr const char *kMinimal = R"(
n_users = 1
epsilon = 0.5
strategy = none
)";

std::string error_message(const std::string &text) {
    try {
        parse_scenarios(text);
    } catch (const Error &e) {
        return e.what();
    }
    return "";
}

ErrorCode error_code(const std::string &text) {
    try {
        parse_scenarios(text);
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "parsed without error:\n" << text;
    return ErrorCode::Io;
}

std::string small(const std::string &body) {
    return body + "[budget]\nn_restarts = 2\nn_kraus_max = 3\nmax_iterations = 20\n";
}

}  // namespace

TEST(ParseScenario, minimal_scenario_uses_defaults) {
    const CensorshipScenario s = parse_scenario(kMinimal);
    EXPECT_EQ(s.n_users, 1);
    EXPECT_EQ(s.n_independents, 0);
    EXPECT_EQ(s.site_dim, 2);
    EXPECT_EQ(s.epsilon, 0.5);
    EXPECT_EQ(s.strategy, Strategy::None);
    EXPECT_EQ(s.input_spec.kind, StateSpec::Kind::Plus);
    EXPECT_EQ(s.budget.n_restarts, 20);
    EXPECT_EQ(s.seed, 0u);
}

TEST(ParseScenario, full_scenario) {
    const CensorshipScenario s = parse_scenario(R"(# comment line
n_users = 2          # trailing comment
n_independents = 1
site_dim = 2
epsilon = 0.25
input_spec = random(3, 17)
strategy = SIO-catalysis
catalyst = random(2, 4)
seed = 123456789012
[budget]
n_restarts = 7
n_kraus_max = 5
max_iterations = 60
)");
    EXPECT_EQ(s.n_users, 2);
    EXPECT_EQ(s.input_spec.kind, StateSpec::Kind::Random);
    EXPECT_EQ(s.input_spec.rank, 3);
    EXPECT_EQ(s.input_spec.seed, 17u);
    ASSERT_TRUE(s.catalyst.has_value());
    EXPECT_EQ(s.catalyst->rank, 2);
    EXPECT_EQ(s.seed, 123456789012u);
    EXPECT_EQ(s.budget.n_restarts, 7);
    EXPECT_EQ(s.budget.n_kraus_max, 5);
    EXPECT_EQ(s.budget.max_iterations, 60);
    EXPECT_EQ(parse_scenario(format_scenario(s)), s);
}

TEST(ParseScenario, constraint_violations_name_the_key) {
    const std::string eps = "n_users = 1\nepsilon = 1.0\nstrategy = none\n";
    EXPECT_EQ(error_code(eps), ErrorCode::ConstraintViolation);
    EXPECT_NE(error_message(eps).find("epsilon"), std::string::npos);

    const std::string ball = "n_users = 1\nepsilon = 0.5\nstrategy = epsilon-ball\n";
    EXPECT_EQ(error_code(ball), ErrorCode::ConstraintViolation);
    EXPECT_NE(error_message(ball).find("ball_radius"), std::string::npos);

    const std::string prob = "n_users = 1\nepsilon = 0.5\nstrategy = probabilistic\n";
    EXPECT_NE(error_message(prob).find("p_sec"), std::string::npos);

    const std::string big = "n_users = 7\nn_independents = 6\nepsilon = 0.5\nstrategy = none\n";
    EXPECT_EQ(error_code(big), ErrorCode::ConstraintViolation);

    const std::string swap = "n_users = 2\nn_independents = 1\nepsilon = 0.5\nstrategy = swap-catalysis\n";
    EXPECT_NE(error_message(swap).find("n_independents"), std::string::npos);

    EXPECT_NE(error_message("n_users = 1\nepsilon = abc\nstrategy = none\n").find("epsilon"), std::string::npos);
    EXPECT_NE(error_message("n_users = 1\nepsilon = 0.5\nstrategy = teleport\n").find("strategy"),
              std::string::npos);
    EXPECT_NE(error_message("n_users = 1\nepsilon = 0.5\nstrategy = none\ninput_spec = w\n").find("input_spec"),
              std::string::npos);
    EXPECT_NE(error_message("epsilon = 0.5\nstrategy = none\n").find("n_users"), std::string::npos);
}

TEST(ParseScenario, unknown_keys_are_hard_errors) {
    EXPECT_EQ(error_code(std::string(kMinimal) + "colour = blue\n"), ErrorCode::UnknownKey);
    EXPECT_EQ(error_code(std::string(kMinimal) + "[budget]\nseed = 3\n"), ErrorCode::UnknownKey);
    EXPECT_EQ(error_code(std::string(kMinimal) + "[extras]\n"), ErrorCode::UnknownKey);
}

TEST(ParseScenario, syntax_errors_carry_the_line) {
    const std::string text = "n_users = 1\nepsilon 0.5\nstrategy = none\n";
    EXPECT_EQ(error_code(text), ErrorCode::SyntaxError);
    EXPECT_NE(error_message(text).find("line 2"), std::string::npos);
    EXPECT_EQ(error_code("n_users = 1\nn_users = 2\nepsilon = 0.5\nstrategy = none\n"), ErrorCode::SyntaxError);
    EXPECT_EQ(error_code(std::string(kMinimal) + "[budget\n"), ErrorCode::SyntaxError);
    EXPECT_EQ(error_code("n_users =\n"), ErrorCode::SyntaxError);
    EXPECT_EQ(error_code("# only a comment\n"), ErrorCode::SyntaxError);
}

TEST(ParseScenario, batch_mode) {
    const std::string text = std::string(kMinimal) + "---\n" + kMinimal + "seed = 4\n---\n" + kMinimal;
    const auto all = parse_scenarios(text);
    ASSERT_EQ(all.size(), 3u);
    EXPECT_EQ(all[1].seed, 4u);
    EXPECT_QCENSOR_ERROR(parse_scenario(text), ErrorCode::SyntaxError);
}

TEST(Run, none_strategy) {
    const RunReport free = run(parse_scenario("n_users = 2\nepsilon = 0.5\nstrategy = none\ninput_spec = zero\n"));
    EXPECT_EQ(free.verdict, "Free");
    EXPECT_EQ(free.monotone_pre, 0.0);
    EXPECT_EQ(free.monotone_post, 0.0);
    EXPECT_NEAR(free.best_fidelity, 1.0, 1e-12);

    const RunReport mixed = run(parse_scenario("n_users = 1\nepsilon = 0.5\nstrategy = none\ninput_spec = mixed\n"));
    EXPECT_EQ(mixed.verdict, "Free");

    const RunReport coherent = run(parse_scenario(small("n_users = 1\nepsilon = 0.5\nstrategy = none\n")));
    EXPECT_EQ(coherent.verdict, "SecureWitnessed");
    EXPECT_NEAR(coherent.monotone_pre, 1.0, 1e-12);
    EXPECT_NEAR(coherent.monotone_post, 0.5, 1e-12);
    EXPECT_LT(coherent.best_fidelity, 1.0 - 1e-6);
    EXPECT_FALSE(coherent.branches.has_value());
}

TEST(Run, swap_breaks_and_sio_holds) {
    const RunReport swap = run(parse_scenario(
        "n_users = 1\nn_independents = 1\nepsilon = 0.5\nstrategy = swap-catalysis\ninput_spec = plus\n"));
    EXPECT_EQ(swap.verdict, "Broken");
    EXPECT_NEAR(swap.best_fidelity, 1.0, 1e-10);

    const RunReport sio = run(parse_scenario(
        small("n_users = 2\nn_independents = 1\nepsilon = 0.5\nstrategy = SIO-catalysis\ncatalyst = plus\n")));
    EXPECT_EQ(sio.verdict, "Held");
    EXPECT_LT(sio.best_fidelity, 1.0 - 1e-9);
}

TEST(Run, probabilistic_reports_branches) {
    const RunReport r =
        run(parse_scenario(small("n_users = 1\nepsilon = 0.5\nstrategy = probabilistic\np_sec = 0.5\n")));
    ASSERT_TRUE(r.branches.has_value());
    double total = 0.0;
    for (const auto &b : *r.branches) {
        total += b.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(EmitReport, json_round_trip_and_schema) {
    const std::string text = small("n_users = 1\nepsilon = 0.5\nstrategy = probabilistic\np_sec = 0.5\nseed = 3\n");
    const RunReport r = run(parse_scenario(text));
    const std::string line = emit_report(r, ReportFormat::JsonLines);
    ASSERT_FALSE(line.empty());
    EXPECT_EQ(line.back(), '\n');
    EXPECT_EQ(line.find('\n'), line.size() - 1);
    for (const char *key : {"\"scenario\"", "\"seed\"", "\"version\"", "\"verdict\"", "\"monotone_pre\"",
                            "\"monotone_post\"", "\"best_fidelity\"", "\"branches\"", "\"wall_ms\""}) {
        EXPECT_NE(line.find(key), std::string::npos) << key;
    }
    const RunReport back = parse_report(line);
    EXPECT_TRUE(same_report(r, back, false));
    EXPECT_EQ(emit_report(back, ReportFormat::JsonLines), line);
    EXPECT_EQ(back.version, std::string(version()));
    EXPECT_QCENSOR_ERROR(parse_report("{not json"), ErrorCode::SyntaxError);
    EXPECT_QCENSOR_ERROR(parse_report("{}"), ErrorCode::SyntaxError);
}

TEST(EmitReport, batch_gives_one_line_per_scenario) {
    const std::string one = "n_users = 1\nepsilon = 0.5\nstrategy = joint-IO\n";
    const auto all =
        parse_scenarios(small(one) + "---\n" + small(one + "seed = 2\n") + "---\n" + small(one + "seed = 3\n"));
    std::string out;
    for (const auto &s : all) {
        out += emit_report(run(s), ReportFormat::JsonLines);
    }
    std::istringstream lines(out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        ++count;
        EXPECT_EQ(parse_report(line).scenario.strategy, Strategy::JointIO);
    }
    EXPECT_EQ(count, 3);
}

TEST(EmitReport, human_format_is_a_table) {
    const RunReport r = run(parse_scenario(kMinimal + std::string("[budget]\nn_restarts = 1\n")));
    const std::string text = emit_report(r, ReportFormat::Human);
    EXPECT_NE(text.find("verdict"), std::string::npos);
    EXPECT_NE(text.find("SecureWitnessed"), std::string::npos);
    EXPECT_NE(text.find("version"), std::string::npos);
    EXPECT_EQ(parse_report_format("human"), ReportFormat::Human);
    EXPECT_QCENSOR_ERROR(parse_report_format("xml"), ErrorCode::InvalidArgument);
}

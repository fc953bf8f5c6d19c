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

// Command-line front end: qcensor run | validate | version.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qcensor/cli.h"
#include "qcensor/error.h"

namespace {

std::optional<std::uint64_t> env_seed() {
    const char *raw = std::getenv("QCENSOR_SEED");
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    const std::string text(raw);
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != text.size() || text.front() == '-') {
        throw qcensor::Error(qcensor::ErrorCode::InvalidArgument, "QCENSOR_SEED='" + text + "' is not an integer");
    }
    return value;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qcensor: coherence censorship experiments"};
    app.require_subcommand(1);

    std::string run_file;
    std::optional<std::uint64_t> flag_seed;
    std::string format = "json-lines";
    bool batch = false;
    CLI::App *run_cmd = app.add_subcommand("run", "Run the scenario(s) in a file and print reports");
    run_cmd->add_option("file", run_file, "Scenario file")->required();
    run_cmd->add_option("--seed", flag_seed, "Override the scenario seed");
    run_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"json-lines", "human"}));
    run_cmd->add_flag("--batch", batch, "Allow several scenarios separated by '---'");

    std::string validate_file;
    CLI::App *validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate_cmd->add_option("file", validate_file, "Scenario file")->required();

    CLI::App *version_cmd = app.add_subcommand("version", "Print the tool version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (version_cmd->parsed()) {
            std::cout << "qcensor " << qcensor::version() << "\n";
            return 0;
        }
        if (validate_cmd->parsed()) {
            const auto scenarios = qcensor::parse_scenarios(qcensor::read_text_file(validate_file));
            std::cout << "ok: " << scenarios.size() << " scenario" << (scenarios.size() == 1 ? "" : "s") << "\n";
            return 0;
        }

        const qcensor::ReportFormat fmt = qcensor::parse_report_format(format);
        auto scenarios = qcensor::parse_scenarios(qcensor::read_text_file(run_file));
        if (!batch && scenarios.size() != 1) {
            throw qcensor::Error(qcensor::ErrorCode::SyntaxError,
                                 std::to_string(scenarios.size()) + " scenarios in file; pass --batch");
        }
        std::optional<std::uint64_t> seed = flag_seed;
        if (!seed) {
            seed = env_seed();
        }
        for (auto &s : scenarios) {
            if (seed) {
                s.seed = *seed;
            }
            std::cout << qcensor::emit_report(qcensor::run(s), fmt) << std::flush;
        }
        return 0;
    } catch (const qcensor::Error &e) {
        std::cerr << "qcensor: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "qcensor: internal error: " << e.what() << "\n";
        return 3;
    }
}

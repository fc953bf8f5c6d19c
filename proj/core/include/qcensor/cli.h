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

#ifndef QCENSOR_CLI_H
#define QCENSOR_CLI_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcensor/censorship.h"
#include "qcensor/scenario.h"

namespace qcensor {

std::string_view version();

/// Parses scenario text. Lines are `key = value`, `#` starts a comment, a
/// `[budget]` header opens the search budget section and a line holding
/// only `---` starts the next scenario. Every returned scenario has been
/// validated. Throws SyntaxError (with the line number), UnknownKey or
/// ConstraintViolation.
std::vector<CensorshipScenario> parse_scenarios(std::string_view text);

/// Like parse_scenarios but requires exactly one scenario.
CensorshipScenario parse_scenario(std::string_view text);

/// Reads a whole file; throws Io when it cannot be opened.
std::string read_text_file(const std::string &path);

/// Inverse of parse_scenario.
std::string format_scenario(const CensorshipScenario &s);

struct RunReport {
    CensorshipScenario scenario;
    std::uint64_t seed = 0;
    std::string version;
    /// "Free", a security verdict name (strategy none) or an attack verdict.
    std::string verdict;
    double monotone_pre = 0.0;
    double monotone_post = 0.0;
    double best_fidelity = 0.0;
    std::optional<std::vector<BranchOutcome>> branches;
    double wall_ms = 0.0;
};

/// Runs one scenario with its own seed. Module errors are rethrown with the
/// failing stage prefixed to the message.
RunReport run(const CensorshipScenario &scenario);

enum class ReportFormat { JsonLines, Human };

/// Throws InvalidArgument for anything but "json-lines" or "human".
ReportFormat parse_report_format(std::string_view name);

/// One line (json-lines) or a small table (human), newline-terminated.
std::string emit_report(const RunReport &report, ReportFormat format);

/// Reads one json-lines report back. Throws SyntaxError on malformed input.
RunReport parse_report(std::string_view line);

/// Field-wise equality; wall_ms is ignored when `ignore_wall_time` is set.
bool same_report(const RunReport &a, const RunReport &b, bool ignore_wall_time = true);

}  // namespace qcensor

#endif

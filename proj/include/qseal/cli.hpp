// Copyright 2026 The qseal Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qseal/harness.hpp"
#include "qseal/report.hpp"

namespace qseal {

enum class Subcommand { verify, channel, attack, sweep, scaling };

/// Bad command line; maps to exit code 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct CliInvocation {
    Subcommand subcommand = Subcommand::verify;
    ExperimentConfig config;
    ReportFormat format = ReportFormat::csv;
    std::optional<std::filesystem::path> out_path;
    Message message = 0;  // `attack` only
};

/// Parses and validates argv (without the program name). Throws UsageError
/// whose message names the offending flag.
CliInvocation parse_args(const std::vector<std::string> &args);

/// Runs a full invocation. Returns 0 on success, 2 on usage errors and 1 on
/// runtime failures; diagnostics go to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qseal

// Copyright 2026 The quotrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// The quotient, realize and verify commands. Each returns a JSON report and
// an exit status; the executable in tools/ only parses flags and does I/O.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quotrep/io.hpp"

namespace quotrep {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitBindingFailure = 1,
  kExitInputError = 2,
  kExitNonConvergence = 3,
};

struct CommandOptions {
  std::string spec_path;
  std::string out_path;                 // empty: report goes to the output stream
  std::string realization_path;         // verify only
  std::string save_realization;         // realize only
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, double>> tolerances;
  std::optional<int> levels;
  std::optional<int> probes;
};

struct CommandResult {
  int exit_code = kExitSuccess;
  Json report;
  /// Realization document, filled by realize.
  std::optional<Json> realization;
};

/// Applies --seed, --tol, --levels and --probes on top of the problem file.
ProblemSpec apply_overrides(ProblemSpec spec, const CommandOptions& options);

CommandResult cmd_quotient(const ProblemSpec& spec);
CommandResult cmd_realize(const ProblemSpec& spec);
CommandResult cmd_verify(const ProblemSpec& spec, const Json& realization);

/// Full command: reads files, runs, writes the report. Diagnostics go to err.
int run_command(const std::string& name, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

/// Serialized form of a report: two-space indentation and a trailing newline.
std::string dump_report(const Json& report);

}  // namespace quotrep

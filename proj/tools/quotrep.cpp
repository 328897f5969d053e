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


// quotrep quotient|realize|verify --spec PATH [--out PATH] ...

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quotrep/commands.hpp"

namespace {

void add_common(CLI::App* cmd, quotrep::CommandOptions& o, std::vector<std::string>& tols,
                std::uint64_t& seed, int& levels, int& probes) {
  cmd->add_option("--spec", o.spec_path, "problem file")->required();
  cmd->add_option("--out", o.out_path, "report file (default: stdout)");
  cmd->add_option("--seed", seed, "overrides the seed in the problem file");
  cmd->add_option("--tol", tols, "tolerance override NAME=VALUE (repeatable)");
  cmd->add_option("--levels", levels, "random probes at levels 1..N");
  cmd->add_option("--probes", probes, "random probe pairs per level");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concrete realizations of quotient operator spaces A/V"};
  app.require_subcommand(1);

  quotrep::CommandOptions options;
  std::vector<std::string> tols;
  std::uint64_t seed = 0;
  int levels = 0, probes = 0;

  CLI::App* quotient = app.add_subcommand("quotient", "certified quotient norms of the probes");
  CLI::App* realize = app.add_subcommand("realize", "build and check the realization");
  CLI::App* verify = app.add_subcommand("verify", "re-check a saved realization");
  for (CLI::App* cmd : {quotient, realize, verify}) add_common(cmd, options, tols, seed, levels, probes);
  realize->add_option("--save-realization", options.save_realization, "write the realization here");
  verify->add_option("--realization", options.realization_path, "saved realization")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : quotrep::kExitInputError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed")) options.seed = seed;
  if (chosen->count("--levels")) options.levels = levels;
  if (chosen->count("--probes")) options.probes = probes;
  for (const auto& t : tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --tol expects NAME=VALUE, got '" << t << "'\n";
      return quotrep::kExitInputError;
    }
    try {
      std::size_t used = 0;
      const std::string value = t.substr(eq + 1);
      const double d = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      options.tolerances.emplace_back(t.substr(0, eq), d);
    } catch (const std::exception&) {
      std::cerr << "error: --tol " << t << ": value is not a number\n";
      return quotrep::kExitInputError;
    }
  }
  return quotrep::run_command(chosen->get_name(), options, std::cout, std::cerr);
}

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

// JSON documents read and written by the command-line tool. Complex numbers
// are [re, im] pairs (a bare number is read as a real value), matrices are
// arrays of rows. See docs/FORMAT.md for the full schema.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "quotrep/algebra.hpp"
#include "quotrep/config.hpp"
#include "quotrep/realization.hpp"

namespace quotrep {

inline constexpr const char* kProblemSchema = "quotrep.problem/1";
inline constexpr const char* kReportSchema = "quotrep.report/1";
inline constexpr const char* kRealizationSchema = "quotrep.realization/1";

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input. The message names the offending location.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AutoProbes {
  int levels = 1;
  int per_level = 1;
  bool include_basis = false;
};

struct ProblemSpec {
  AlgebraShape shape;
  std::vector<AlgebraElement> basis;
  RealizationKind kind = RealizationKind::general;
  std::vector<AmplifiedElement> probes;       // explicit
  std::optional<AutoProbes> auto_probes;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;   // overrides by name
  // evaluation settings
  int held_out = 10;
  int max_level = 2;
  std::vector<AmplifiedElement> extra;        // additional held-out elements
  bool compress = false;

  Tolerances resolved_tolerances() const;
  /// Validates the kind tag against the flags that actually hold.
  Subspace subspace() const;
};

Json to_json(Complex z);
Json to_json(const ComplexMatrix& m);
Json to_json(const AlgebraElement& a);
Json to_json(const AmplifiedElement& c);

/// `where` is a JSON pointer used in error messages.
Complex complex_from_json(const Json& j, const std::string& where);
ComplexMatrix matrix_from_json(const Json& j, const std::string& where);
AlgebraElement element_from_json(const AlgebraShape& shape, const Json& j,
                                 const std::string& where);
AmplifiedElement amplified_from_json(const AlgebraShape& shape, const Json& j,
                                     const std::string& where);

Json parse_json(const std::string& text, const std::string& source);
ProblemSpec problem_from_json(const Json& j);
ProblemSpec load_problem(const std::string& path);

Json realization_to_json(const Realization& r, const std::vector<AmplifiedElement>& probes);
/// Restores the realization and the probe elements stored with it.
Realization realization_from_json(const Json& j, std::vector<AmplifiedElement>& probes,
                                  const Tolerances& tol = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace quotrep

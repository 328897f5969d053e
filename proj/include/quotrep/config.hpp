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

#include <cstdint>
#include <map>
#include <string>

namespace quotrep {

/// Numerical tolerances. Defaults are the binding acceptance values; every
/// field can be overridden by name (see set()).
struct Tolerances {
  // matrix_core
  double rank_cutoff = 1e-9;          // relative to the largest singular value
  double hermitian_check = 1e-12;     // relative to max(1, |M|_max)
  // algebra
  double membership = 1e-9;           // least-squares residual, relative
  // quotient
  double solver_gap = 1e-12;          // absolute target for the barrier method
  double certificate_norm = 1e-6;
  double annihilation = 1e-8;
  double attainment = 1e-5;
  double oracle_agreement = 1e-4;     // relative
  // gns / realization
  double reconstruction = 1e-8;
  double projection = 1e-10;
  double probe_exactness = 1e-5;
  double overshoot = 1e-8;
  double structural = 1e-10;
  double star_map = 1e-12;
  double leibniz = 1e-9;
  double choi_psd = 1e-9;

  /// Override a field by its name. Throws ContractViolation for unknown names.
  void set(const std::string& name, double value);
  double get(const std::string& name) const;
  std::map<std::string, double> as_map() const;
};

}  // namespace quotrep

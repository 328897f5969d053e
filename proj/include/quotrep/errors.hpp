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

#include <stdexcept>
#include <string>

namespace quotrep {

/// Precondition failure: wrong shape, non-Hermitian input, false subspace flag.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ShapeMismatch : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// Raised when an iterative solver stops without meeting its accuracy target.
/// Carries the best values seen so callers can report them.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_primal,
                   double best_dual, double gap)
      : std::runtime_error(what),
        best_primal_(best_primal),
        best_dual_(best_dual),
        gap_(gap) {}

  double best_primal() const noexcept { return best_primal_; }
  double best_dual() const noexcept { return best_dual_; }
  double gap() const noexcept { return gap_; }

 private:
  double best_primal_;
  double best_dual_;
  double gap_;
};

/// An intermediate result failed a binding numerical check (for example a
/// certificate that does not annihilate the subspace).
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace quotrep

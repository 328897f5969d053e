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

// Quotient norms ‖C‖_{A/V} = inf{‖C − D‖ : D ∈ M_n(V)} with a primal
// minimizer and a dual functional that certifies the value.

#include <cstdint>
#include <optional>
#include <vector>

#include "quotrep/algebra.hpp"
#include "quotrep/config.hpp"

namespace quotrep {

/// A linear functional on M_n(A), ψ(C) = Σ_i trace(T_i · C_i) where C_i is
/// the assembled block i of C.
class Functional {
 public:
  Functional() = default;
  Functional(AlgebraShape shape, int level, std::vector<ComplexMatrix> blocks);

  const AlgebraShape& shape() const { return shape_; }
  int level() const { return level_; }
  const std::vector<ComplexMatrix>& blocks() const { return blocks_; }
  const ComplexMatrix& block(std::size_t i) const { return blocks_.at(i); }

  Complex operator()(const AmplifiedElement& c) const;
  /// Dual norm of the C*-norm: Σ_i trace_norm(T_i).
  double norm() const;
  /// max |ψ(W)| over the amplified basis of V at this level.
  double annihilation_residual(const Subspace& v) const;

 private:
  AlgebraShape shape_;
  int level_ = 0;
  std::vector<ComplexMatrix> blocks_;
};

struct CertifiedNorm {
  double value = 0.0;
  /// Coefficients of D* on amplify_subspace(v, n), same ordering.
  std::vector<Complex> minimizer;
  AmplifiedElement minimizer_element;
  /// Omitted when the value is zero (C ∈ M_n(V)).
  std::optional<Functional> certificate;
  double dual_value = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

struct QuotientOptions {
  Tolerances tol;
  int max_newton_steps = 600;
  std::uint64_t seed = 0;
};

CertifiedNorm quotient_norm(const AmplifiedElement& c, const Subspace& v,
                            const QuotientOptions& options = {});

/// Builds a norm-one annihilating functional attaining the quotient norm at
/// the given primal point. Tries a convex combination of top singular pairs
/// of C − D* first and falls back to solving the dual program.
Functional dual_certificate(const AmplifiedElement& c, const Subspace& v,
                            const std::vector<Complex>& minimizer,
                            const QuotientOptions& options = {});

struct CertificateCheck {
  double value_residual = 0.0;        // |value − ‖C − D*‖| / max(1, value)
  double norm_residual = 0.0;         // |‖ψ‖ − 1|
  double annihilation = 0.0;          // max |ψ(W)| over amplified basis
  double attainment_shortfall = 0.0;  // value − Re ψ(C)
  bool passed = false;
};

CertificateCheck check_certificate(const AmplifiedElement& c, const Subspace& v,
                                   const CertifiedNorm& result,
                                   const Tolerances& tol = {});

struct OracleBudget {
  int max_evaluations = 400000;
  int restarts = 2;
  std::uint64_t seed = 0;
};

struct OracleResult {
  double value = 0.0;
  bool converged = false;
  long evaluations = 0;
};

/// Derivative-free estimate of the quotient norm by restarted CMA-ES.
/// Independent of quotient_norm.
/// Requires 2·n²·dim V ≤ 40 real parameters.
OracleResult oracle_quotient_norm(const AmplifiedElement& c, const Subspace& v,
                                  const OracleBudget& budget = {});

/// D = Σ coeffs_r · W_r over amplify_subspace(v, level).
AmplifiedElement combine_amplified(const Subspace& v, int level,
                                   const std::vector<Complex>& coeffs);

}  // namespace quotrep

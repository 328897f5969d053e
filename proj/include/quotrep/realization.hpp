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

// Direct sums of GNS data over a finite probe family, assembled into the four
// concrete realizations of A/V:
//   general     Ψ(a) = Qπ(a)P
//   star        Ψ(a) = PUπ(a)P, U a Hermitian unitary commuting with π
//   system      Ψ(a) = ½P[Z, π(a)]P with Z = [P, U]
//   subalgebra  Θ(a) = ½[iX, π(a)] with X = 2P̂ − I

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quotrep/algebra.hpp"
#include "quotrep/config.hpp"
#include "quotrep/gns.hpp"
#include "quotrep/quotient.hpp"

namespace quotrep {

enum class RealizationKind { general, star, system, subalgebra };

std::string to_string(RealizationKind kind);
RealizationKind realization_kind_from_string(const std::string& name);

struct Probe {
  AmplifiedElement element;
  std::optional<CertifiedNorm> certified;
};

struct ProbeOptions {
  int levels = 2;             // random probes at levels 1..levels
  int random_per_level = 2;   // each of Hermitian and non-Hermitian
  bool include_basis = true;
  std::uint64_t seed = 0;
};

class ProbeSet {
 public:
  ProbeSet() = default;

  /// Basis elements, seeded random Hermitian and non-Hermitian elements at
  /// levels 1..N, and their adjoints when v is star-closed.
  static ProbeSet generate(const Subspace& v, const ProbeOptions& options);

  void add(AmplifiedElement c);
  /// Appends the adjoint of every probe whose adjoint is not already present.
  void symmetrize();
  /// Runs quotient_norm on every probe that has no certificate yet.
  void certify(const Subspace& v, const QuotientOptions& options = {});

  bool certified() const;
  std::size_t size() const { return probes_.size(); }
  const std::vector<Probe>& probes() const { return probes_; }
  std::vector<Probe>& probes() { return probes_; }

 private:
  std::vector<Probe> probes_;
};

struct Realization {
  RealizationKind kind = RealizationKind::general;
  RepresentationData rep;
  ComplexMatrix p;
  ComplexMatrix q;                  // equals p except for the general kind
  std::optional<ComplexMatrix> u;   // star, system, subalgebra
  std::optional<ComplexMatrix> z;   // system
  std::optional<ComplexMatrix> x;   // subalgebra
  int functionals = 0;              // members of the direct sum

  // Derived from the fields above by refresh().
  ComplexMatrix p_range;
  ComplexMatrix q_range;
  ComplexMatrix p_hat_range;        // subalgebra

  Eigen::Index dimension() const { return rep.dimension(); }
  /// Recomputes the orthonormal range bases.
  void refresh(const Tolerances& tol = {});
};

struct RealizationOptions {
  QuotientOptions quotient;   // used to certify adjoints added by symmetrization
  /// Cut H down to the smallest π-invariant subspace carrying P, Q and U.
  bool compress = false;
};

Realization build_general(const Subspace& v, const ProbeSet& probes,
                          const RealizationOptions& options = {});
/// Symmetrizes the probes (certifying added adjoints) before assembly.
Realization build_star(const Subspace& v, ProbeSet probes,
                       const RealizationOptions& options = {});
Realization build_system(const Subspace& v, ProbeSet probes,
                         const RealizationOptions& options = {});
Realization build_subalgebra(const Subspace& b, ProbeSet probes,
                             const RealizationOptions& options = {});

/// Smallest π-invariant subspace containing the ranges of P and Q (and of
/// UP when U is present). Norms and identities are unchanged.
Realization compress_realization(const Realization& r, const Tolerances& tol = {});

/// The realized map at level 1 as a dense operator on H.
ComplexMatrix realize(const Realization& r, const AlgebraElement& a);
/// Level-n amplification on H^⊕n.
ComplexMatrix realize(const Realization& r, const AmplifiedElement& c);
/// ‖realize(r, c)‖ computed on compressed ranges.
double realized_norm(const Realization& r, const AmplifiedElement& c);
double realized_norm(const Realization& r, const AlgebraElement& a);

/// ‖Ψ_n(C)‖ for Ψ = PUπP (star underlying a subalgebra realization).
double star_map_norm(const Realization& r, const AmplifiedElement& c);
/// ‖Ψ̂_n(C)‖ for Ψ̂ = P̂Uπ P̂.
double hat_map_norm(const Realization& r, const AmplifiedElement& c);

/// L(a) = ‖Θ(a)‖. Requires a subalgebra realization.
double leibniz_seminorm(const Realization& r, const AlgebraElement& a);

struct LeibnizReport {
  int pairs = 0;
  /// max L(ac) − L(a)‖c‖ − ‖a‖L(c) over the sampled pairs.
  double max_excess = 0.0;
};

/// Seeded Gaussian pairs (a, c), half of them Hermitian.
LeibnizReport leibniz_sweep(const Realization& r, int pairs, std::uint64_t seed = 0);

/// One measured quantity against its tolerance.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool binding = true;
  bool passed = true;
};

struct CheckList {
  std::vector<Check> checks;
  void add(std::string name, double value, double tolerance, bool binding = true);
  bool passed() const;
  double worst(const std::string& name) const;
};

struct StructureOptions {
  int derivation_pairs = 200;
  int contractivity_trials = 20;
  int max_level = 3;
  std::uint64_t seed = 0;
};

/// Every identity the realization kind asserts, with measured residuals.
CheckList check_structure(const Realization& r, const Subspace& v, const ProbeSet& probes,
                          const StructureOptions& options = {}, const Tolerances& tol = {});

struct JordanReport {
  double unit_split = 0.0;        // ‖E + F − I‖
  double unitary_split = 0.0;     // ‖U − (E − F)‖
  double choi_min_positive = 0.0; // minimum Choi eigenvalue of A ↦ PEπ(A)EP
  double choi_min_negative = 0.0; // same for A ↦ PFπ(A)FP
  double reproduction = 0.0;      // max over basis of ‖PEπEP − PFπFP − Ψ‖
  bool passed = false;
};

JordanReport jordan_decomposition_check(const Realization& r, const Tolerances& tol = {});

/// Minimum Choi eigenvalue of the map on M_2(A) whose corner is −Θ. Returns
/// nullopt when the Choi matrix would exceed max_dim.
std::optional<double> cp_average_choi_min(const Realization& r, Eigen::Index max_dim = 600);

struct LevelDeviation {
  int level = 0;
  int probes = 0;
  double probe_deviation = 0.0;   // max |‖Ψ_n(C)‖ − certified| over probes
  int held_out = 0;
  double max_excess = 0.0;        // max ‖Ψ_n(C)‖ − ‖C‖_{A/V}, binding
  double max_deficit = 0.0;       // truncation slack, informational
  int span_samples = 0;
  double span_deviation = 0.0;    // combinations of probes and V, informational
};

struct SlackEntry {
  int level = 0;
  double quotient = 0.0;
  double realized = 0.0;
};

struct IsometryReport {
  std::vector<LevelDeviation> levels;
  std::vector<SlackEntry> slack;
  bool passed = false;
};

struct IsometryOptions {
  int max_level = 2;
  int trials = 10;               // held-out random elements per level
  int span_samples = 2;
  std::uint64_t seed = 0;
  std::vector<AmplifiedElement> extra;   // additional held-out elements
};

IsometryReport verify_complete_isometry(const Realization& r, const Subspace& v,
                                        const ProbeSet& probes,
                                        const IsometryOptions& options = {},
                                        const QuotientOptions& quotient = {});

}  // namespace quotrep

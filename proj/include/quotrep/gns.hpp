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

// GNS-type realization of a single annihilating functional: a representation
// π of A, vectors ξ, η in H^⊕n and projections P, Q with ψ(C) = ⟨Ψ_n(C)ξ, η⟩
// where Ψ(a) = Qπ(a)P.

#include <vector>

#include "quotrep/algebra.hpp"
#include "quotrep/config.hpp"
#include "quotrep/quotient.hpp"

namespace quotrep {

/// π(a) = ⊕_i a_i ⊗ I_{m_i} on H = ⊕_i C^{d_i} ⊗ C^{m_i}. Coordinate
/// offset(i) + r·m_i + s is basis vector e_r ⊗ f_s of summand i.
class RepresentationData {
 public:
  RepresentationData() = default;
  RepresentationData(AlgebraShape shape, std::vector<int> multiplicities);

  const AlgebraShape& shape() const { return shape_; }
  const std::vector<int>& multiplicities() const { return mult_; }
  int multiplicity(std::size_t i) const { return mult_.at(i); }
  Eigen::Index offset(std::size_t i) const { return offsets_.at(i); }
  Eigen::Index dimension() const { return offsets_.back(); }

  ComplexMatrix pi(const AlgebraElement& a) const;
  /// π_n(C), the n×n block matrix (π(C_jk)) on H^⊕n.
  ComplexMatrix pi(const AmplifiedElement& c) const;
  /// π(a)·x without forming π(a).
  ComplexMatrix act(const AlgebraElement& a, const ComplexMatrix& x) const;
  /// π_n(C)·x for x with n·dimension() rows.
  ComplexMatrix act(const AmplifiedElement& c, const ComplexMatrix& x) const;

  friend bool operator==(const RepresentationData&, const RepresentationData&) = default;

 private:
  AlgebraShape shape_;
  std::vector<int> mult_;
  std::vector<Eigen::Index> offsets_{0};
};

/// Worst residual of multiplicativity, adjoint compatibility and π(1) = I
/// over all pairs of matrix units.
double homomorphism_residual(const RepresentationData& rep);

struct GnsVectors {
  RepresentationData rep;
  std::vector<ComplexVector> xi;   // n vectors in H
  std::vector<ComplexVector> eta;
  int level() const { return static_cast<int>(xi.size()); }
};

struct GnsData {
  RepresentationData rep;
  std::vector<ComplexVector> xi;
  std::vector<ComplexVector> eta;
  ComplexMatrix p;          // projection onto span{ξ_k}
  ComplexMatrix q;          // projection onto span{η_j}
  ComplexMatrix p_range;    // orthonormal basis of range P
  ComplexMatrix q_range;
  int level() const { return static_cast<int>(xi.size()); }
};

/// Blockwise SVD of the functional's matrices. Requires ‖ψ‖ = 1 to within
/// tol.certificate_norm.
GnsVectors represent_functional(const Functional& psi, const Tolerances& tol = {});

/// Projections onto span{ξ_k} and span{η_j}. Throws NumericalFault when
/// Qπ(D)P fails to vanish on the basis of v.
GnsData build_projections(const GnsVectors& data, const Subspace& v,
                          const Tolerances& tol = {});

/// ⟨π_n(C)ξ, η⟩.
Complex reconstruct(const GnsVectors& data, const AmplifiedElement& c);

/// Ψ(a) = Qπ(a)P.
ComplexMatrix compress(const GnsData& data, const AlgebraElement& a);
/// Ψ_n(C) = (Qπ(C_jk)P).
ComplexMatrix compress(const GnsData& data, const AmplifiedElement& c);
/// ‖Ψ_n(C)‖ computed on the ranges of P and Q.
double compressed_norm(const GnsData& data, const AmplifiedElement& c);

/// max ‖Qπ(D)P‖ / max(1, ‖D‖) over the basis of v.
double annihilation_residual(const GnsData& data, const Subspace& v);

}  // namespace quotrep

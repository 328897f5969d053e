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

// Finite-dimensional C*-algebras A = M_{d_1} ⊕ … ⊕ M_{d_m}, their subspaces,
// and the matrix amplifications M_n(A).

#include <cstddef>
#include <random>
#include <vector>

#include "quotrep/matrix_core.hpp"

namespace quotrep {

class AlgebraShape {
 public:
  AlgebraShape() = default;
  explicit AlgebraShape(std::vector<int> block_dims);

  const std::vector<int>& block_dims() const { return dims_; }
  std::size_t num_blocks() const { return dims_.size(); }
  int block_dim(std::size_t i) const { return dims_.at(i); }
  /// Σ d_i², the complex dimension of A.
  int dimension() const;
  /// Σ d_i, the size of the identity representation.
  int identity_rep_dim() const;

  friend bool operator==(const AlgebraShape&, const AlgebraShape&) = default;

 private:
  std::vector<int> dims_;
};

class AlgebraElement {
 public:
  AlgebraElement() = default;
  /// Blocks must match the shape; throws ShapeMismatch otherwise.
  AlgebraElement(AlgebraShape shape, std::vector<ComplexMatrix> blocks);

  static AlgebraElement zero(const AlgebraShape& shape);
  static AlgebraElement unit(const AlgebraShape& shape);
  /// Matrix unit E_{rc} placed in block `block`.
  static AlgebraElement matrix_unit(const AlgebraShape& shape, std::size_t block,
                                    int r, int c);
  /// Gaussian random element (Hermitian if requested).
  static AlgebraElement random(const AlgebraShape& shape, std::mt19937_64& rng,
                               bool hermitian = false);
  /// Inverse of to_vector().
  static AlgebraElement from_vector(const AlgebraShape& shape,
                                    const ComplexVector& coords);

  const AlgebraShape& shape() const { return shape_; }
  const std::vector<ComplexMatrix>& blocks() const { return blocks_; }
  const ComplexMatrix& block(std::size_t i) const { return blocks_.at(i); }

  /// Concatenation of blocks, each row-major. Length Σ d_i².
  ComplexVector to_vector() const;

  AlgebraElement adjoint() const;
  double norm() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex s);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
    return a += b;
  }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
    return a -= b;
  }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }

 private:
  AlgebraShape shape_;
  std::vector<ComplexMatrix> blocks_;
};

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
inline AlgebraElement adjoint(const AlgebraElement& a) { return a.adjoint(); }
inline AlgebraElement unit(const AlgebraShape& shape) {
  return AlgebraElement::unit(shape);
}

/// Matrix-unit basis of A, block by block, row-major within each block.
std::vector<AlgebraElement> algebra_basis(const AlgebraShape& shape);

/// An element C = {C_jk} of M_n(A). Stored assembled: block i is the
/// (n·d_i)×(n·d_i) matrix whose rows/cols [j·d_i, (j+1)·d_i) × [k·d_i, …)
/// hold block i of C_jk.
class AmplifiedElement {
 public:
  AmplifiedElement() = default;
  /// `entries` is n×n in row-major order (entries[j*n + k] = C_jk).
  AmplifiedElement(int level, const std::vector<AlgebraElement>& entries);
  static AmplifiedElement from_blocks(const AlgebraShape& shape, int level,
                                      std::vector<ComplexMatrix> assembled);
  static AmplifiedElement zero(const AlgebraShape& shape, int level);
  static AmplifiedElement from_element(const AlgebraElement& a);
  /// a ⊗ E_pq at level n.
  static AmplifiedElement corner(const AlgebraElement& a, int level, int p, int q);
  static AmplifiedElement random(const AlgebraShape& shape, int level,
                                 std::mt19937_64& rng, bool hermitian = false);

  int level() const { return level_; }
  const AlgebraShape& shape() const { return shape_; }
  const std::vector<ComplexMatrix>& blocks() const { return blocks_; }
  const ComplexMatrix& block(std::size_t i) const { return blocks_.at(i); }

  AlgebraElement entry(int j, int k) const;
  std::vector<AlgebraElement> entries() const;

  /// Concatenation of assembled blocks, each row-major.
  ComplexVector to_vector() const;

  /// (C*)_jk = (C_kj)*.
  AmplifiedElement adjoint() const;

  AmplifiedElement& operator+=(const AmplifiedElement& other);
  AmplifiedElement& operator-=(const AmplifiedElement& other);
  AmplifiedElement& operator*=(Complex s);
  friend AmplifiedElement operator+(AmplifiedElement a, const AmplifiedElement& b) {
    return a += b;
  }
  friend AmplifiedElement operator-(AmplifiedElement a, const AmplifiedElement& b) {
    return a -= b;
  }
  friend AmplifiedElement operator*(Complex s, AmplifiedElement a) { return a *= s; }

 private:
  void check_compatible(const AmplifiedElement& other) const;

  int level_ = 0;
  AlgebraShape shape_;
  std::vector<ComplexMatrix> blocks_;
};

AmplifiedElement multiply(const AmplifiedElement& c, const AmplifiedElement& d);

/// The C*-norm of M_n(A): max over blocks of the assembled spectral norm.
double cstar_norm(const AmplifiedElement& c);
inline double cstar_norm(const AlgebraElement& a) { return a.norm(); }

struct SubspaceFlags {
  bool star_closed = false;
  bool contains_unit = false;
  bool is_subalgebra = false;
};

/// A linear subspace V ⊆ A given by a basis. Declared flags are checked at
/// construction; a flag that does not hold raises ContractViolation.
class Subspace {
 public:
  Subspace() = default;
  Subspace(AlgebraShape shape, std::vector<AlgebraElement> basis,
           SubspaceFlags flags = {}, double tol = 1e-9);

  static Subspace zero(const AlgebraShape& shape);
  static Subspace full(const AlgebraShape& shape);
  /// Flags that actually hold for the span of `basis`.
  static SubspaceFlags detect_flags(const AlgebraShape& shape,
                                    const std::vector<AlgebraElement>& basis,
                                    double tol = 1e-9);

  const AlgebraShape& shape() const { return shape_; }
  const std::vector<AlgebraElement>& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }
  const SubspaceFlags& flags() const { return flags_; }

  /// Least-squares residual of `a` against span(basis), relative to max(1,|a|).
  double membership_residual(const AlgebraElement& a) const;
  bool contains(const AlgebraElement& a) const;

 private:
  AlgebraShape shape_;
  std::vector<AlgebraElement> basis_;
  SubspaceFlags flags_;
  double tol_ = 1e-9;
  ComplexMatrix basis_matrix_;   // columns are basis vectors
};

/// Basis {V_r ⊗ E_pq} of M_n(V), ordered r-major, then p, then q.
std::vector<AmplifiedElement> amplify_subspace(const Subspace& v, int level);

}  // namespace quotrep

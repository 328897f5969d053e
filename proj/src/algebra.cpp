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

#include "quotrep/algebra.hpp"

#include <algorithm>
#include <string>

#include "quotrep/errors.hpp"

namespace quotrep {

AlgebraShape::AlgebraShape(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw ContractViolation("AlgebraShape: no blocks");
  for (int d : dims_) {
    if (d < 1) throw ContractViolation("AlgebraShape: block dimension must be >= 1");
  }
}

int AlgebraShape::dimension() const {
  int total = 0;
  for (int d : dims_) total += d * d;
  return total;
}

int AlgebraShape::identity_rep_dim() const {
  int total = 0;
  for (int d : dims_) total += d;
  return total;
}

// ---------------------------------------------------------------------------
// AlgebraElement

AlgebraElement::AlgebraElement(AlgebraShape shape, std::vector<ComplexMatrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (blocks_.size() != shape_.num_blocks()) {
    throw ShapeMismatch("AlgebraElement: block count does not match shape");
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const int d = shape_.block_dim(i);
    if (blocks_[i].rows() != d || blocks_[i].cols() != d) {
      throw ShapeMismatch("AlgebraElement: block " + std::to_string(i) +
                          " has wrong size");
    }
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraShape& shape) {
  std::vector<ComplexMatrix> blocks;
  for (int d : shape.block_dims()) blocks.push_back(ComplexMatrix::Zero(d, d));
  return {shape, std::move(blocks)};
}

AlgebraElement AlgebraElement::unit(const AlgebraShape& shape) {
  std::vector<ComplexMatrix> blocks;
  for (int d : shape.block_dims()) blocks.push_back(ComplexMatrix::Identity(d, d));
  return {shape, std::move(blocks)};
}

AlgebraElement AlgebraElement::matrix_unit(const AlgebraShape& shape,
                                           std::size_t block, int r, int c) {
  AlgebraElement out = zero(shape);
  out.blocks_.at(block)(r, c) = 1.0;
  return out;
}

AlgebraElement AlgebraElement::random(const AlgebraShape& shape, std::mt19937_64& rng,
                                      bool hermitian) {
  std::vector<ComplexMatrix> blocks;
  for (int d : shape.block_dims()) {
    blocks.push_back(hermitian ? random_hermitian(d, rng) : random_complex(d, d, rng));
  }
  return {shape, std::move(blocks)};
}

AlgebraElement AlgebraElement::from_vector(const AlgebraShape& shape,
                                           const ComplexVector& coords) {
  if (coords.size() != shape.dimension()) {
    throw ShapeMismatch("AlgebraElement::from_vector: wrong length");
  }
  std::vector<ComplexMatrix> blocks;
  Eigen::Index pos = 0;
  for (int d : shape.block_dims()) {
    ComplexMatrix b(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) b(r, c) = coords(pos++);
    }
    blocks.push_back(std::move(b));
  }
  return {shape, std::move(blocks)};
}

ComplexVector AlgebraElement::to_vector() const {
  ComplexVector out(shape_.dimension());
  Eigen::Index pos = 0;
  for (const auto& b : blocks_) {
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      for (Eigen::Index c = 0; c < b.cols(); ++c) out(pos++) = b(r, c);
    }
  }
  return out;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return {shape_, std::move(blocks)};
}

double AlgebraElement::norm() const {
  double out = 0.0;
  for (const auto& b : blocks_) out = std::max(out, spectral_norm(b));
  return out;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  if (shape_ != other.shape_) throw ShapeMismatch("AlgebraElement: shape mismatch");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  if (shape_ != other.shape_) throw ShapeMismatch("AlgebraElement: shape mismatch");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.shape() != b.shape()) throw ShapeMismatch("multiply: shape mismatch");
  std::vector<ComplexMatrix> blocks;
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    blocks.push_back(a.block(i) * b.block(i));
  }
  return {a.shape(), std::move(blocks)};
}

std::vector<AlgebraElement> algebra_basis(const AlgebraShape& shape) {
  std::vector<AlgebraElement> out;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const int d = shape.block_dim(i);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) out.push_back(AlgebraElement::matrix_unit(shape, i, r, c));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// AmplifiedElement

AmplifiedElement::AmplifiedElement(int level, const std::vector<AlgebraElement>& entries)
    : level_(level) {
  if (level < 1) throw ContractViolation("AmplifiedElement: level must be >= 1");
  if (entries.size() != static_cast<std::size_t>(level) * level) {
    throw ShapeMismatch("AmplifiedElement: expected n*n entries");
  }
  shape_ = entries.front().shape();
  for (const auto& e : entries) {
    if (e.shape() != shape_) throw ShapeMismatch("AmplifiedElement: mixed shapes");
  }
  for (std::size_t i = 0; i < shape_.num_blocks(); ++i) {
    const int d = shape_.block_dim(i);
    ComplexMatrix m(level * d, level * d);
    for (int j = 0; j < level; ++j) {
      for (int k = 0; k < level; ++k) {
        m.block(j * d, k * d, d, d) = entries[j * level + k].block(i);
      }
    }
    blocks_.push_back(std::move(m));
  }
}

AmplifiedElement AmplifiedElement::from_blocks(const AlgebraShape& shape, int level,
                                               std::vector<ComplexMatrix> assembled) {
  if (level < 1) throw ContractViolation("AmplifiedElement: level must be >= 1");
  if (assembled.size() != shape.num_blocks()) {
    throw ShapeMismatch("AmplifiedElement: block count does not match shape");
  }
  for (std::size_t i = 0; i < assembled.size(); ++i) {
    const int nd = level * shape.block_dim(i);
    if (assembled[i].rows() != nd || assembled[i].cols() != nd) {
      throw ShapeMismatch("AmplifiedElement: assembled block has wrong size");
    }
  }
  AmplifiedElement out;
  out.level_ = level;
  out.shape_ = shape;
  out.blocks_ = std::move(assembled);
  return out;
}

AmplifiedElement AmplifiedElement::zero(const AlgebraShape& shape, int level) {
  std::vector<ComplexMatrix> blocks;
  for (int d : shape.block_dims()) {
    blocks.push_back(ComplexMatrix::Zero(level * d, level * d));
  }
  return from_blocks(shape, level, std::move(blocks));
}

AmplifiedElement AmplifiedElement::from_element(const AlgebraElement& a) {
  return from_blocks(a.shape(), 1, a.blocks());
}

AmplifiedElement AmplifiedElement::corner(const AlgebraElement& a, int level, int p,
                                          int q) {
  AmplifiedElement out = zero(a.shape(), level);
  for (std::size_t i = 0; i < out.blocks_.size(); ++i) {
    const int d = a.shape().block_dim(i);
    out.blocks_[i].block(p * d, q * d, d, d) = a.block(i);
  }
  return out;
}

AmplifiedElement AmplifiedElement::random(const AlgebraShape& shape, int level,
                                          std::mt19937_64& rng, bool hermitian) {
  std::vector<ComplexMatrix> blocks;
  for (int d : shape.block_dims()) {
    blocks.push_back(hermitian ? random_hermitian(level * d, rng)
                               : random_complex(level * d, level * d, rng));
  }
  return from_blocks(shape, level, std::move(blocks));
}

AlgebraElement AmplifiedElement::entry(int j, int k) const {
  std::vector<ComplexMatrix> blocks;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const int d = shape_.block_dim(i);
    blocks.push_back(blocks_[i].block(j * d, k * d, d, d));
  }
  return {shape_, std::move(blocks)};
}

std::vector<AlgebraElement> AmplifiedElement::entries() const {
  std::vector<AlgebraElement> out;
  for (int j = 0; j < level_; ++j) {
    for (int k = 0; k < level_; ++k) out.push_back(entry(j, k));
  }
  return out;
}

ComplexVector AmplifiedElement::to_vector() const {
  Eigen::Index total = 0;
  for (const auto& b : blocks_) total += b.size();
  ComplexVector out(total);
  Eigen::Index pos = 0;
  for (const auto& b : blocks_) {
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      for (Eigen::Index c = 0; c < b.cols(); ++c) out(pos++) = b(r, c);
    }
  }
  return out;
}

AmplifiedElement AmplifiedElement::adjoint() const {
  AmplifiedElement out = *this;
  for (auto& b : out.blocks_) b = b.adjoint().eval();
  return out;
}

void AmplifiedElement::check_compatible(const AmplifiedElement& other) const {
  if (level_ != other.level_ || shape_ != other.shape_) {
    throw ShapeMismatch("AmplifiedElement: level or shape mismatch");
  }
}

AmplifiedElement& AmplifiedElement::operator+=(const AmplifiedElement& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

AmplifiedElement& AmplifiedElement::operator-=(const AmplifiedElement& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

AmplifiedElement& AmplifiedElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AmplifiedElement multiply(const AmplifiedElement& c, const AmplifiedElement& d) {
  if (c.level() != d.level() || c.shape() != d.shape()) {
    throw ShapeMismatch("multiply: level or shape mismatch");
  }
  std::vector<ComplexMatrix> blocks;
  for (std::size_t i = 0; i < c.blocks().size(); ++i) {
    blocks.push_back(c.block(i) * d.block(i));
  }
  return AmplifiedElement::from_blocks(c.shape(), c.level(), std::move(blocks));
}

double cstar_norm(const AmplifiedElement& c) {
  double out = 0.0;
  for (const auto& b : c.blocks()) out = std::max(out, spectral_norm(b));
  return out;
}

// ---------------------------------------------------------------------------
// Subspace

namespace {

ComplexMatrix stack_basis(const AlgebraShape& shape,
                          const std::vector<AlgebraElement>& basis) {
  ComplexMatrix m(shape.dimension(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].shape() != shape) throw ShapeMismatch("Subspace: basis shape mismatch");
    m.col(static_cast<Eigen::Index>(j)) = basis[j].to_vector();
  }
  return m;
}

double residual_against(const ComplexMatrix& basis_matrix, const ComplexVector& v) {
  const double scale = std::max(1.0, v.norm());
  if (basis_matrix.cols() == 0) return v.norm() / scale;
  const ComplexVector coeffs =
      basis_matrix.completeOrthogonalDecomposition().solve(v);
  return (basis_matrix * coeffs - v).norm() / scale;
}

}  // namespace

Subspace::Subspace(AlgebraShape shape, std::vector<AlgebraElement> basis,
                   SubspaceFlags flags, double tol)
    : shape_(std::move(shape)), basis_(std::move(basis)), flags_(flags), tol_(tol) {
  basis_matrix_ = stack_basis(shape_, basis_);
  if (!basis_.empty() && numerical_rank(basis_matrix_, tol_) != basis_.size()) {
    throw ContractViolation("Subspace: basis is linearly dependent");
  }
  const SubspaceFlags actual = detect_flags(shape_, basis_, tol_);
  if (flags_.star_closed && !actual.star_closed) {
    throw ContractViolation("Subspace: declared star_closed but adjoints leave the span");
  }
  if (flags_.contains_unit && !actual.contains_unit) {
    throw ContractViolation("Subspace: declared contains_unit but 1 is not in the span");
  }
  if (flags_.is_subalgebra && !actual.is_subalgebra) {
    throw ContractViolation(
        "Subspace: declared is_subalgebra but it is not a unital *-subalgebra");
  }
}

Subspace Subspace::zero(const AlgebraShape& shape) { return Subspace(shape, {}); }

Subspace Subspace::full(const AlgebraShape& shape) {
  return Subspace(shape, algebra_basis(shape), {true, true, true});
}

SubspaceFlags Subspace::detect_flags(const AlgebraShape& shape,
                                     const std::vector<AlgebraElement>& basis,
                                     double tol) {
  const ComplexMatrix m = stack_basis(shape, basis);
  auto inside = [&](const AlgebraElement& a) {
    return residual_against(m, a.to_vector()) <= tol;
  };
  SubspaceFlags out;
  out.star_closed = std::all_of(basis.begin(), basis.end(),
                                [&](const AlgebraElement& b) { return inside(b.adjoint()); });
  out.contains_unit = inside(AlgebraElement::unit(shape));
  bool closed = out.star_closed && out.contains_unit;
  for (std::size_t a = 0; closed && a < basis.size(); ++a) {
    for (std::size_t b = 0; closed && b < basis.size(); ++b) {
      closed = inside(multiply(basis[a], basis[b]));
    }
  }
  out.is_subalgebra = closed;
  return out;
}

double Subspace::membership_residual(const AlgebraElement& a) const {
  if (a.shape() != shape_) throw ShapeMismatch("Subspace: shape mismatch");
  return residual_against(basis_matrix_, a.to_vector());
}

bool Subspace::contains(const AlgebraElement& a) const {
  return membership_residual(a) <= tol_;
}

std::vector<AmplifiedElement> amplify_subspace(const Subspace& v, int level) {
  if (level < 1) throw ContractViolation("amplify_subspace: level must be >= 1");
  std::vector<AmplifiedElement> out;
  out.reserve(v.dim() * level * level);
  for (const auto& b : v.basis()) {
    for (int p = 0; p < level; ++p) {
      for (int q = 0; q < level; ++q) out.push_back(AmplifiedElement::corner(b, level, p, q));
    }
  }
  return out;
}

}  // namespace quotrep

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

#include "quotrep/gns.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quotrep/errors.hpp"

namespace quotrep {

RepresentationData::RepresentationData(AlgebraShape shape, std::vector<int> multiplicities)
    : shape_(std::move(shape)), mult_(std::move(multiplicities)) {
  if (mult_.size() != shape_.num_blocks()) {
    throw ShapeMismatch("RepresentationData: one multiplicity per block required");
  }
  for (std::size_t i = 0; i < mult_.size(); ++i) {
    if (mult_[i] < 0) throw ContractViolation("RepresentationData: negative multiplicity");
    offsets_.push_back(offsets_.back() +
                       static_cast<Eigen::Index>(shape_.block_dim(i)) * mult_[i]);
  }
}

ComplexMatrix RepresentationData::pi(const AlgebraElement& a) const {
  if (a.shape() != shape_) throw ShapeMismatch("pi: shape mismatch");
  const Eigen::Index n = dimension();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < mult_.size(); ++i) {
    if (mult_[i] == 0) continue;
    const Eigen::Index len = offsets_[i + 1] - offsets_[i];
    out.block(offsets_[i], offsets_[i], len, len) =
        kron(a.block(i), ComplexMatrix::Identity(mult_[i], mult_[i]));
  }
  return out;
}

ComplexMatrix RepresentationData::pi(const AmplifiedElement& c) const {
  if (c.shape() != shape_) throw ShapeMismatch("pi: shape mismatch");
  const Eigen::Index n = dimension();
  const int level = c.level();
  ComplexMatrix out(level * n, level * n);
  for (int j = 0; j < level; ++j) {
    for (int k = 0; k < level; ++k) out.block(j * n, k * n, n, n) = pi(c.entry(j, k));
  }
  return out;
}

ComplexMatrix RepresentationData::act(const AlgebraElement& a, const ComplexMatrix& x) const {
  if (a.shape() != shape_) throw ShapeMismatch("act: shape mismatch");
  if (x.rows() != dimension()) throw ShapeMismatch("act: vector length mismatch");
  ComplexMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < mult_.size(); ++i) {
    const int m = mult_[i];
    if (m == 0) continue;
    const int d = shape_.block_dim(i);
    const ComplexMatrix at = a.block(i).transpose();
    for (Eigen::Index col = 0; col < x.cols(); ++col) {
      // the slice of summand i, read as an m × d column-major matrix, is Yᵀ
      Eigen::Map<const ComplexMatrix> y(x.col(col).data() + offsets_[i], m, d);
      Eigen::Map<ComplexMatrix> z(out.col(col).data() + offsets_[i], m, d);
      z.noalias() = y * at;
    }
  }
  return out;
}

ComplexMatrix RepresentationData::act(const AmplifiedElement& c, const ComplexMatrix& x) const {
  const Eigen::Index n = dimension();
  const int level = c.level();
  if (x.rows() != level * n) throw ShapeMismatch("act: vector length mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (int j = 0; j < level; ++j) {
    for (int k = 0; k < level; ++k) {
      out.middleRows(j * n, n) += act(c.entry(j, k), x.middleRows(k * n, n));
    }
  }
  return out;
}

double homomorphism_residual(const RepresentationData& rep) {
  const auto basis = algebra_basis(rep.shape());
  const Eigen::Index n = rep.dimension();
  double worst = max_abs(rep.pi(unit(rep.shape())) - ComplexMatrix::Identity(n, n));
  for (const auto& b : basis) {
    const ComplexMatrix pb = rep.pi(b);
    worst = std::max(worst, max_abs(rep.pi(b.adjoint()) - pb.adjoint()));
    for (const auto& a : basis) {
      worst = std::max(worst, max_abs(rep.pi(multiply(a, b)) - rep.act(a, pb)));
    }
  }
  return worst;
}

GnsVectors represent_functional(const Functional& psi, const Tolerances& tol) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tol.certificate_norm) {
    throw ContractViolation("represent_functional: functional norm " + std::to_string(norm) +
                            " is not 1");
  }
  const AlgebraShape& shape = psi.shape();
  const int level = psi.level();
  std::vector<SingularDecomposition> parts;
  double top = 0.0;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    parts.push_back(svd(psi.block(i)));
    if (parts.back().values.size() > 0) top = std::max(top, parts.back().values(0));
  }
  const double cut = tol.rank_cutoff * top;
  std::vector<int> mult;
  for (const auto& d : parts) {
    int k = 0;
    while (k < d.values.size() && d.values(k) > cut) ++k;
    mult.push_back(k);
  }

  GnsVectors out;
  out.rep = RepresentationData(shape, mult);
  const Eigen::Index dim = out.rep.dimension();
  out.xi.assign(static_cast<std::size_t>(level), ComplexVector::Zero(dim));
  out.eta.assign(static_cast<std::size_t>(level), ComplexVector::Zero(dim));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const int d = shape.block_dim(i);
    const int m = mult[i];
    const Eigen::Index base = out.rep.offset(i);
    for (int s = 0; s < m; ++s) {
      const double w = std::sqrt(parts[i].values(s));
      for (int k = 0; k < level; ++k) {
        for (int r = 0; r < d; ++r) {
          out.xi[k](base + r * m + s) = w * parts[i].left(k * d + r, s);
          out.eta[k](base + r * m + s) = w * parts[i].right(k * d + r, s);
        }
      }
    }
  }
  return out;
}

Complex reconstruct(const GnsVectors& data, const AmplifiedElement& c) {
  if (c.level() != data.level()) throw ShapeMismatch("reconstruct: level mismatch");
  Complex out = 0.0;
  for (int j = 0; j < c.level(); ++j) {
    for (int k = 0; k < c.level(); ++k) {
      out += data.eta[j].dot(data.rep.act(c.entry(j, k), data.xi[k]).col(0));
    }
  }
  return out;
}

GnsData build_projections(const GnsVectors& data, const Subspace& v, const Tolerances& tol) {
  if (v.shape() != data.rep.shape()) throw ShapeMismatch("build_projections: shape mismatch");
  GnsData out;
  out.rep = data.rep;
  out.xi = data.xi;
  out.eta = data.eta;
  const Eigen::Index dim = data.rep.dimension();
  // zero components carry no direction; the relative cut discards them
  out.p_range = orthonormalize(data.xi, dim, tol.rank_cutoff);
  out.q_range = orthonormalize(data.eta, dim, tol.rank_cutoff);
  out.p = projector(out.p_range);
  out.q = projector(out.q_range);
  const double residual = annihilation_residual(out, v);
  if (residual > tol.annihilation) {
    throw NumericalFault("build_projections: Q pi(D) P = " + std::to_string(residual) +
                         " on the subspace");
  }
  return out;
}

ComplexMatrix compress(const GnsData& data, const AlgebraElement& a) {
  return data.q * data.rep.act(a, data.p);
}

ComplexMatrix compress(const GnsData& data, const AmplifiedElement& c) {
  const Eigen::Index n = data.rep.dimension();
  const int level = c.level();
  ComplexMatrix out(level * n, level * n);
  for (int j = 0; j < level; ++j) {
    for (int k = 0; k < level; ++k) out.block(j * n, k * n, n, n) = compress(data, c.entry(j, k));
  }
  return out;
}

double compressed_norm(const GnsData& data, const AmplifiedElement& c) {
  const Eigen::Index rp = data.p_range.cols();
  const Eigen::Index rq = data.q_range.cols();
  const int level = c.level();
  ComplexMatrix m(level * rq, level * rp);
  for (int j = 0; j < level; ++j) {
    for (int k = 0; k < level; ++k) {
      m.block(j * rq, k * rp, rq, rp) =
          data.q_range.adjoint() * data.rep.act(c.entry(j, k), data.p_range);
    }
  }
  return m.size() == 0 ? 0.0 : spectral_norm(m);
}

double annihilation_residual(const GnsData& data, const Subspace& v) {
  double worst = 0.0;
  for (const auto& d : v.basis()) {
    const ComplexMatrix m = data.q_range.adjoint() * data.rep.act(d, data.p_range);
    if (m.size() == 0) continue;
    worst = std::max(worst, spectral_norm(m) / std::max(1.0, d.norm()));
  }
  return worst;
}

}  // namespace quotrep

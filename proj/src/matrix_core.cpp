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

#include "quotrep/matrix_core.hpp"

#include <algorithm>
#include <cmath>

#include "quotrep/errors.hpp"

namespace quotrep {

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol * std::max(1.0, max_abs(m));
}

HermitianEigen hermitian_eig(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw ContractViolation("hermitian_eig: matrix is not square");
  }
  if (!is_hermitian(m, tol)) {
    throw ContractViolation("hermitian_eig: matrix is not Hermitian");
  }
  const Eigen::Index n = m.rows();
  HermitianEigen out;
  if (n == 0) {
    out.values = RealVector(0);
    out.vectors = ComplexMatrix(0, 0);
    return out;
  }
  // Symmetrize so rounding-level asymmetry does not leak into the solver.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian_eig: eigensolver failed", 0, 0, 0);
  }
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

namespace {

// Frobenius norm of the residual bounds its operator norm.
double reconstruction_residual(const ComplexMatrix& m, const SingularDecomposition& d) {
  return (m - d.left * d.values.asDiagonal() * d.right.adjoint()).norm();
}

template <typename Solver>
SingularDecomposition decompose(const ComplexMatrix& m) {
  Solver solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

}  // namespace

SingularDecomposition svd(const ComplexMatrix& m) {
  const Eigen::Index k = std::min(m.rows(), m.cols());
  if (k == 0) {
    return {ComplexMatrix(m.rows(), 0), RealVector(0), ComplexMatrix(m.cols(), 0)};
  }
  const bool small = m.rows() <= 16 && m.cols() <= 16;
  SingularDecomposition out = small ? decompose<Eigen::JacobiSVD<ComplexMatrix>>(m)
                                    : decompose<Eigen::BDCSVD<ComplexMatrix>>(m);
  double residual = reconstruction_residual(m, out);
  const double scale = std::max(1.0, out.values(0));
  if (!(residual <= 1e-10 * scale) && !small) {
    // divide-and-conquer occasionally mis-deflates (or returns NaN on) structured input
    out = decompose<Eigen::JacobiSVD<ComplexMatrix>>(m);
    residual = reconstruction_residual(m, out);
  }
  if (!(residual <= 1e-10 * std::max(1.0, out.values(0)))) {
    throw ConvergenceError("svd: reconstruction residual too large", residual, 0,
                           residual);
  }
  return out;
}

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector(0);
  if (m.rows() <= 16 && m.cols() <= 16) {
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  }
  return svd(m).values;
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() <= 16 && m.cols() <= 16) return singular_values(m)(0);
  // top eigenvalue of the smaller Gram matrix is relatively accurate
  const ComplexMatrix gram =
      m.rows() >= m.cols() ? ComplexMatrix(m.adjoint() * m) : ComplexMatrix(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues()(gram.rows() - 1)));
}

double trace_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m).sum();
}

std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol) {
  const RealVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel_tol * s(0);
  return static_cast<std::size_t>((s.array() > cut).count());
}

ComplexMatrix orthonormalize(const ComplexMatrix& vectors, double tol) {
  const Eigen::Index dim = vectors.rows();
  if (vectors.cols() == 0 || dim == 0) return ComplexMatrix(dim, 0);
  const SingularDecomposition d = svd(vectors);
  if (d.values(0) == 0.0) return ComplexMatrix(dim, 0);
  const double cut = tol * d.values(0);
  Eigen::Index keep = 0;
  while (keep < d.values.size() && d.values(keep) > cut) ++keep;
  return d.left.leftCols(keep);
}

ComplexMatrix orthonormalize(std::span<const ComplexVector> vectors,
                             Eigen::Index dim, double tol) {
  ComplexMatrix stacked(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != dim) {
      throw ContractViolation("orthonormalize: vectors differ in dimension");
    }
    stacked.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return orthonormalize(stacked, tol);
}

ComplexMatrix projector(const ComplexMatrix& orthonormal_basis) {
  return orthonormal_basis * orthonormal_basis.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols,
                             std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix out(rows, cols);
  // column-major fill order is fixed so seeded output is reproducible
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

}  // namespace quotrep

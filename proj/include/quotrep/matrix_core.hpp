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

// Dense complex linear algebra used by every other module. Eigen supplies
// the storage and the factorization kernels; this header pins the contracts
// (ordering, orthonormality, rank cutoff) the rest of the library relies on.

#include <complex>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace quotrep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

struct SingularDecomposition {
  ComplexMatrix left;       // rows x k, orthonormal columns
  RealVector values;        // k = min(rows, cols), nonincreasing, >= 0
  ComplexMatrix right;      // cols x k, orthonormal columns
};

struct HermitianEigen {
  RealVector values;        // nonincreasing
  ComplexMatrix vectors;    // unitary, column j pairs with values(j)
};

/// Largest |entry|; 0 for an empty matrix.
double max_abs(const ComplexMatrix& m);

/// ‖M − M*‖_max ≤ tol · max(1, ‖M‖_max).
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);

/// Throws ContractViolation for non-square or non-Hermitian input.
HermitianEigen hermitian_eig(const ComplexMatrix& m, double tol = 1e-12);

/// Thin SVD. Throws ConvergenceError if the reconstruction residual is off.
SingularDecomposition svd(const ComplexMatrix& m);

RealVector singular_values(const ComplexMatrix& m);

double spectral_norm(const ComplexMatrix& m);
double trace_norm(const ComplexMatrix& m);

/// Count of singular values above rel_tol · σ₁.
std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol = 1e-9);

/// Orthonormal basis (as columns) for the span of the columns of `vectors`.
/// Singular values at or below tol · σ₁ are discarded. Zero input gives an
/// empty (dim x 0) basis.
ComplexMatrix orthonormalize(const ComplexMatrix& vectors, double tol = 1e-9);
ComplexMatrix orthonormalize(std::span<const ComplexVector> vectors,
                             Eigen::Index dim, double tol = 1e-9);

/// Orthogonal projection B·B* onto the column span of an orthonormal B.
ComplexMatrix projector(const ComplexMatrix& orthonormal_basis);

/// Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Gaussian complex matrix with iid N(0,1/2) real and imaginary parts.
ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols,
                             std::mt19937_64& rng);
ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng);
/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng);

}  // namespace quotrep

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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "quotrep/errors.hpp"
#include "quotrep/matrix_core.hpp"

using namespace quotrep;

TEST_CASE("hermitian_eig: diagonal input") {
  ComplexMatrix m(2, 2);
  m << 3, 0, 0, 1;
  const HermitianEigen e = hermitian_eig(m);
  CHECK(e.values(0) == doctest::Approx(3.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig: swap matrix") {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  const HermitianEigen e = hermitian_eig(m);
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(-1.0));
}

TEST_CASE("hermitian_eig: random residuals") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix m = random_hermitian(5, rng);
    const HermitianEigen e = hermitian_eig(m);
    const double scale = std::max(1.0, e.values.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < 5; ++j) {
      CHECK((m * e.vectors.col(j) - e.values(j) * e.vectors.col(j)).norm() <= 1e-10 * scale);
      if (j > 0) CHECK(e.values(j - 1) >= e.values(j));
    }
    CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(5, 5)).norm() <= 1e-10);
    // spectral norm of a Hermitian matrix is the largest |eigenvalue|
    CHECK(std::abs(spectral_norm(m) - scale) <= 1e-10 * scale);
  }
}

TEST_CASE("hermitian_eig: rejects bad input") {
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix::Ones(2, 3)), ContractViolation);
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(hermitian_eig(m), ContractViolation);
}

TEST_CASE("svd: small cases") {
  ComplexMatrix m(2, 2);
  m << 0.5, 0, 0, -0.5;
  const SingularDecomposition d = svd(m);
  CHECK(d.values(0) == doctest::Approx(0.5));
  CHECK(d.values(1) == doctest::Approx(0.5));
  const SingularDecomposition z = svd(ComplexMatrix::Zero(3, 2));
  CHECK(z.values.size() == 2);
  CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("svd: reconstruction and orthonormality") {
  std::mt19937_64 rng(3);
  for (auto [r, c] : {std::pair{3, 4}, {4, 3}, {20, 30}, {60, 60}}) {
    const ComplexMatrix m = random_complex(r, c, rng);
    const SingularDecomposition d = svd(m);
    const Eigen::Index k = std::min(r, c);
    CHECK(d.values.size() == k);
    CHECK((m - d.left * d.values.asDiagonal() * d.right.adjoint()).norm() <= 1e-10 * d.values(0));
    CHECK((d.left.adjoint() * d.left - ComplexMatrix::Identity(k, k)).norm() <= 1e-10);
    CHECK((d.right.adjoint() * d.right - ComplexMatrix::Identity(k, k)).norm() <= 1e-10);
    for (Eigen::Index j = 1; j < k; ++j) CHECK(d.values(j - 1) >= d.values(j));
    CHECK(std::abs(spectral_norm(m) - oracle::operator_norm(m)) <= 1e-10 * d.values(0));
  }
}

TEST_CASE("svd: structured projection") {
  // block-diagonal projection with repeated unit singular values
  std::mt19937_64 rng(8);
  ComplexMatrix p = ComplexMatrix::Zero(72, 72);
  for (int b = 0; b < 6; ++b) {
    const ComplexMatrix u = random_unitary(12, rng);
    p.block(12 * b, 12 * b, 12, 12) = u.leftCols(b + 1) * u.leftCols(b + 1).adjoint();
  }
  const SingularDecomposition d = svd(p);
  CHECK((p - d.left * d.values.asDiagonal() * d.right.adjoint()).norm() <= 1e-10);
  CHECK(orthonormalize(p, 0.5).cols() == 21);
}

TEST_CASE("spectral and trace norms") {
  ComplexMatrix n(2, 2);
  n << 0, 1, 0, 0;
  CHECK(spectral_norm(n) == doctest::Approx(1.0));
  CHECK(trace_norm(n) == doctest::Approx(1.0));
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  CHECK(spectral_norm(id) == doctest::Approx(1.0));
  CHECK(trace_norm(id) == doctest::Approx(3.0));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix m = random_complex(1 + t % 5, 1 + (t * 7) % 6, rng);
    CHECK(trace_norm(m) >= spectral_norm(m));
    CHECK(spectral_norm(m) >= 0.0);
  }
}

TEST_CASE("orthonormalize") {
  const Eigen::Index dim = 3;
  ComplexVector e1 = ComplexVector::Zero(dim), e2 = ComplexVector::Zero(dim);
  e1(0) = 1.0;
  e2(1) = 1.0;
  std::vector<ComplexVector> vs{e1, 2.0 * e1, e2};
  const ComplexMatrix b = orthonormalize(vs, dim);
  CHECK(b.cols() == 2);
  CHECK((b.adjoint() * b - ComplexMatrix::Identity(2, 2)).norm() <= 1e-12);
  for (const auto& v : vs) CHECK((v - b * (b.adjoint() * v)).norm() <= 1e-9);

  std::vector<ComplexVector> zero{ComplexVector::Zero(dim)};
  CHECK(orthonormalize(zero, dim).cols() == 0);
  CHECK(orthonormalize(std::vector<ComplexVector>{}, dim).cols() == 0);

  std::mt19937_64 rng(21);
  for (int t = 0; t < 10; ++t) {
    const int rank = 1 + t % 4;
    const ComplexMatrix m = random_complex(6, rank, rng) * random_complex(rank, 8, rng);
    const ComplexMatrix q = orthonormalize(m, 1e-9);
    // rank is fixed by the factorization
    const int r = rank;
    const double top = oracle::operator_norm(m);
    CHECK(q.cols() == r);
    CHECK(numerical_rank(m) == static_cast<std::size_t>(r));
    CHECK((m - q * (q.adjoint() * m)).norm() <= 1e-9 * top);
  }
}

TEST_CASE("kron and random_unitary") {
  ComplexMatrix a(2, 2), b = ComplexMatrix::Identity(2, 2);
  a << 1, 2, 3, 4;
  const ComplexMatrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 2) == Complex(2.0));
  CHECK(k(3, 1) == Complex(3.0));
  std::mt19937_64 rng(1);
  const ComplexMatrix u = random_unitary(6, rng);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(6, 6)).norm() <= 1e-12);
}

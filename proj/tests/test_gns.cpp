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
#include "quotrep/gns.hpp"

using namespace quotrep;

namespace {

const AlgebraShape kM2({2});

AlgebraElement m2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return AlgebraElement(kM2, {m});
}

Functional worked_functional() {
  ComplexMatrix t(2, 2);
  t << 0.5, 0, 0, -0.5;
  return Functional(kM2, 1, {t});
}

Complex stacked_inner(const GnsVectors& g, const ComplexMatrix& pin) {
  const Eigen::Index h = g.rep.dimension();
  const int n = g.level();
  ComplexVector x(n * h), y(n * h);
  for (int k = 0; k < n; ++k) {
    x.segment(k * h, h) = g.xi[k];
    y.segment(k * h, h) = g.eta[k];
  }
  return y.dot(pin * x);
}

// Random functional on M_n(A) with trace norm one.
Functional random_functional(const AlgebraShape& s, int n, std::mt19937_64& rng) {
  std::vector<ComplexMatrix> blocks;
  double total = 0.0;
  for (int d : s.block_dims()) {
    blocks.push_back(random_complex(n * d, n * d, rng));
    total += trace_norm(blocks.back());
  }
  for (auto& b : blocks) b /= total;
  return Functional(s, n, blocks);
}

}  // namespace

TEST_CASE("representation is a unital *-homomorphism") {
  const RepresentationData rep(AlgebraShape({2, 3, 1}), {2, 0, 3});
  CHECK(rep.dimension() == 7);
  CHECK(rep.offset(2) == 4);
  CHECK(homomorphism_residual(rep) <= 1e-12);
  std::mt19937_64 rng(2);
  const AlgebraElement a = AlgebraElement::random(rep.shape(), rng);
  const ComplexMatrix x = random_complex(7, 3, rng);
  CHECK((rep.act(a, x) - rep.pi(a) * x).norm() <= 1e-12 * x.norm() * (1 + a.norm()));
  const AmplifiedElement c = AmplifiedElement::random(rep.shape(), 2, rng);
  const ComplexMatrix y = random_complex(14, 2, rng);
  CHECK((rep.act(c, y) - rep.pi(c) * y).norm() <= 1e-12 * y.norm() * (1 + cstar_norm(c)));
  CHECK_THROWS_AS(RepresentationData(AlgebraShape({2}), {1, 1}), ShapeMismatch);
}

TEST_CASE("worked functional (X11 - X22)/2") {
  const GnsVectors g = represent_functional(worked_functional());
  CHECK(g.rep.multiplicities() == std::vector<int>{2});
  REQUIRE(g.level() == 1);
  CHECK(std::abs(g.xi[0].norm() - 1.0) <= 1e-12);
  CHECK(std::abs(g.eta[0].norm() - 1.0) <= 1e-12);
  // ξ = (e1⊗f1 + e2⊗f2)/√2, η = (e1⊗f1 − e2⊗f2)/√2 up to a unitary on the
  // multiplicity space, so compare invariants: ⟨ξ,η⟩ = 0 and π(diag(1,−1))ξ = η
  CHECK(std::abs(g.eta[0].dot(g.xi[0])) <= 1e-12);
  CHECK((g.rep.pi(m2(1, 0, 0, -1)) * g.xi[0] - g.eta[0]).norm() <= 1e-12);
  // reduced density of ξ on C^2 is I/2
  Eigen::Map<const ComplexMatrix> xi_mat(g.xi[0].data(), 2, 2);
  CHECK((xi_mat.adjoint() * xi_mat - 0.5 * ComplexMatrix::Identity(2, 2)).norm() <= 1e-12);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    const AlgebraElement c = AlgebraElement::random(kM2, rng);
    const Complex expected = 0.5 * (c.block(0)(0, 0) - c.block(0)(1, 1));
    CHECK(std::abs(reconstruct(g, AmplifiedElement::from_element(c)) - expected) <= 1e-12);
    CHECK(std::abs(stacked_inner(g, g.rep.pi(c)) - expected) <= 1e-12);
  }

  const Subspace v(kM2, {unit(kM2)});
  const GnsData d = build_projections(g, v);
  CHECK(d.p_range.cols() == 1);
  CHECK(d.q_range.cols() == 1);
  CHECK((d.q * d.p).norm() <= 1e-12);
  CHECK(compress(d, unit(kM2)).norm() <= 1e-12);
  CHECK(std::abs(spectral_norm(compress(d, m2(1, 0, 0, -1))) - 1.0) <= 1e-12);
  CHECK(std::abs(compressed_norm(d, AmplifiedElement::from_element(m2(1, 0, 0, -1))) - 1.0) <=
        1e-12);
  CHECK(annihilation_residual(d, v) <= 1e-12);
}

TEST_CASE("pure state") {
  std::mt19937_64 rng(3);
  ComplexVector v = random_complex(3, 1, rng).col(0);
  v.normalize();
  const AlgebraShape s({3});
  const Functional psi(s, 1, {v * v.adjoint()});
  const GnsVectors g = represent_functional(psi);
  CHECK(g.rep.multiplicities() == std::vector<int>{1});
  CHECK((g.xi[0] - g.eta[0]).norm() <= 1e-12);
  CHECK(std::abs(std::abs(v.dot(g.xi[0])) - 1.0) <= 1e-12);
}

TEST_CASE("norm precondition") {
  ComplexMatrix t(2, 2);
  t << 1, 0, 0, -1;
  CHECK_THROWS_AS(represent_functional(Functional(kM2, 1, {t})), ContractViolation);
}

TEST_CASE("random functionals reconstruct on a full basis") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 10; ++t) {
    const AlgebraShape s = t % 2 ? AlgebraShape({2, 1}) : AlgebraShape({3, 2});
    const int n = 1 + t % 3;
    const Functional psi = random_functional(s, n, rng);
    const GnsVectors g = represent_functional(psi);
    double norm2 = 0.0;
    for (const auto& x : g.xi) norm2 += x.squaredNorm();
    CHECK(std::abs(norm2 - 1.0) <= 1e-10);
    double worst = 0.0;
    for (const auto& e : algebra_basis(s)) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const AmplifiedElement c = AmplifiedElement::corner(e, n, j, k);
          worst = std::max(worst, std::abs(reconstruct(g, c) - psi(c)));
        }
      }
    }
    CHECK(worst <= 1e-8);
    const GnsData d = build_projections(g, Subspace::zero(s));
    CHECK(d.p_range.cols() <= n);
    CHECK(d.q_range.cols() <= n);
    for (int level = 1; level <= 3; ++level) {
      const AmplifiedElement c = AmplifiedElement::random(s, level, rng);
      CHECK(compressed_norm(d, c) <= cstar_norm(c) + 1e-10);
    }
  }
}

TEST_CASE("projections: parallel components collapse") {
  const RepresentationData rep(kM2, {1});
  std::mt19937_64 rng(4);
  ComplexVector x = random_complex(2, 1, rng).col(0);
  ComplexVector y = random_complex(2, 1, rng).col(0);
  x /= std::sqrt(5.0) * x.norm();
  y /= std::sqrt(2.0) * y.norm();
  const GnsVectors g{rep, {x, 2.0 * x}, {y, -y}};
  const GnsData d = build_projections(g, Subspace::zero(kM2));
  CHECK(d.p_range.cols() == 1);
  CHECK(d.q_range.cols() == 1);
  CHECK((d.p * d.p - d.p).norm() <= 1e-10);
  CHECK((d.p * x - x).norm() <= 1e-10);
  const GnsVectors single{rep, {x / x.norm()}, {y / y.norm()}};
  CHECK(build_projections(single, Subspace::zero(kM2)).p_range.cols() == 1);
  // a zero component contributes nothing
  const GnsVectors with_zero{rep, {x, ComplexVector::Zero(2)}, {y, y}};
  CHECK(build_projections(with_zero, Subspace::zero(kM2)).p_range.cols() == 1);
}

TEST_CASE("certified functionals annihilate and are weakly dual") {
  std::mt19937_64 rng(29);
  const AlgebraShape s({2, 2});
  for (int t = 0; t < 6; ++t) {
    const Subspace v(s, {unit(s), AlgebraElement::random(s, rng)});
    const AmplifiedElement c = AmplifiedElement::random(s, 1 + t % 2, rng);
    const CertifiedNorm cert = quotient_norm(c, v);
    REQUIRE(cert.certificate);
    const GnsData d = build_projections(represent_functional(*cert.certificate), v);
    CHECK(annihilation_residual(d, v) <= 1e-8);
    CHECK(std::abs(compressed_norm(d, c) - cert.value) <= 1e-5);
    for (int k = 0; k < 5; ++k) {
      const AlgebraElement a = AlgebraElement::random(s, rng);
      const double q = quotient_norm(AmplifiedElement::from_element(a), v).value;
      CHECK(spectral_norm(compress(d, a)) <= q + 1e-8);
    }
  }
}

TEST_CASE("annihilation failure is reported") {
  const GnsVectors g = represent_functional(worked_functional());
  const Subspace diag(kM2, {AlgebraElement::matrix_unit(kM2, 0, 0, 0),
                           AlgebraElement::matrix_unit(kM2, 0, 1, 1)});
  CHECK_THROWS_AS(build_projections(g, diag), NumericalFault);
}

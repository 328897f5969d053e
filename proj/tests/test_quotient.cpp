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
#include "quotrep/quotient.hpp"

using namespace quotrep;

namespace {

const AlgebraShape kM2({2});

AmplifiedElement m2_element(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return AmplifiedElement::from_element(AlgebraElement(kM2, {m}));
}

Subspace unit_line() { return Subspace(kM2, {unit(kM2)}); }

Subspace diagonals() {
  return Subspace(kM2, {AlgebraElement::matrix_unit(kM2, 0, 0, 0),
                        AlgebraElement::matrix_unit(kM2, 0, 1, 1)});
}

Subspace random_subspace(const AlgebraShape& shape, int dim, std::mt19937_64& rng) {
  std::vector<AlgebraElement> basis;
  for (int k = 0; k < dim; ++k) basis.push_back(AlgebraElement::random(shape, rng));
  return Subspace(shape, basis);
}

}  // namespace

TEST_CASE("worked example: diag(1,-1) modulo the unit") {
  // reference: scan of ‖C − λI‖ over λ ∈ [−2, 2]
  ComplexMatrix c(2, 2);
  c << 1, 0, 0, -1;
  double argmin = 0.0;
  const double scanned = oracle::scan_minimum(
      [&](double l) { return oracle::operator_norm(c - l * ComplexMatrix::Identity(2, 2)); }, -2.0,
      2.0, &argmin);
  CHECK(std::abs(scanned - 1.0) <= 1e-9);
  CHECK(std::abs(argmin) <= 1e-6);

  const auto cc = m2_element(1, 0, 0, -1);
  const CertifiedNorm r = quotient_norm(cc, unit_line());
  CHECK(std::abs(r.value - 1.0) <= 1e-6);
  REQUIRE(r.minimizer.size() == 1);
  CHECK(std::abs(r.minimizer[0]) <= 1e-6);
  REQUIRE(r.certificate);
  const Functional& psi = *r.certificate;
  ComplexMatrix t(2, 2);
  t << 0.5, 0, 0, -0.5;
  CHECK((psi.block(0) - t).norm() <= 1e-6);
  CHECK(std::abs(psi.norm() - 1.0) <= 1e-6);
  CHECK(std::abs(psi(AmplifiedElement::from_element(unit(kM2)))) <= 1e-6);
  CHECK(std::abs(psi(cc) - 1.0) <= 1e-6);
  ComplexMatrix x(2, 2);
  x << Complex(0.3, 1), 2, -1, Complex(0.7, -0.2);
  CHECK(std::abs(psi(AmplifiedElement::from_element(AlgebraElement(kM2, {x}))) -
                 0.5 * (x(0, 0) - x(1, 1))) <= 1e-6);
  CHECK(check_certificate(cc, unit_line(), r).passed);
}

TEST_CASE("degenerate subspaces") {
  std::mt19937_64 rng(1);
  const AlgebraShape s({2, 1});
  for (int t = 0; t < 5; ++t) {
    const AmplifiedElement c = AmplifiedElement::random(s, 1 + t % 2, rng);
    const CertifiedNorm all = quotient_norm(c, Subspace::full(s));
    CHECK(all.value <= 1e-9);
    CHECK_FALSE(all.certificate.has_value());
    const CertifiedNorm none = quotient_norm(c, Subspace::zero(s));
    CHECK(std::abs(none.value - cstar_norm(c)) <= 1e-10 * cstar_norm(c));
    REQUIRE(none.certificate);
    CHECK(check_certificate(c, Subspace::zero(s), none).passed);
  }
}

TEST_CASE("diagonal subalgebra: distance is the largest off-diagonal entry") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  const Subspace v = diagonals();
  for (int t = 0; t < 8; ++t) {
    const Complex a(n(rng), n(rng)), b(n(rng), n(rng)), c(n(rng), n(rng)), d(n(rng), n(rng));
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    const double brute = oracle::diagonal_distance(m);
    const double formula = std::max(std::abs(b), std::abs(c));
    CHECK(std::abs(brute - formula) <= 1e-8 * formula);
    const CertifiedNorm r = quotient_norm(m2_element(a, b, c, d), v);
    CHECK(std::abs(r.value - formula) <= 1e-7 * formula);
    CHECK(check_certificate(m2_element(a, b, c, d), v, r).passed);
  }
}

TEST_CASE("rank-one element with nothing to quotient by") {
  std::mt19937_64 rng(5);
  ComplexVector u = random_complex(2, 1, rng).col(0), w = random_complex(2, 1, rng).col(0);
  u.normalize();
  w.normalize();
  const ComplexMatrix m = u * w.adjoint();
  const AmplifiedElement c = AmplifiedElement::from_element(AlgebraElement(kM2, {m}));
  const Functional psi = dual_certificate(c, Subspace::zero(kM2), {});
  CHECK(std::abs(psi(c) - 1.0) <= 1e-9);
  CHECK(std::abs(psi.norm() - 1.0) <= 1e-9);
  CHECK((psi.block(0) - w * u.adjoint()).norm() <= 1e-9);
}

TEST_CASE("random instances certify") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 12; ++t) {
    const AlgebraShape s = t % 2 ? AlgebraShape({2, 1}) : AlgebraShape({3});
    const Subspace v = random_subspace(s, 1 + t % 3, rng);
    const AmplifiedElement c = AmplifiedElement::random(s, 1 + t % 2, rng);
    const CertifiedNorm r = quotient_norm(c, v);
    const CertificateCheck cc = check_certificate(c, v, r);
    CHECK(cc.passed);
    CHECK(r.duality_gap <= 1e-5);
    CHECK(r.value <= cstar_norm(c) + 1e-10);
    // the minimizer attains the value
    const double attained = cstar_norm(c - combine_amplified(v, c.level(), r.minimizer));
    CHECK(std::abs(attained - r.value) <= 1e-8 * std::max(1.0, r.value));
    // the dual route on its own also certifies
    const Functional psi = dual_certificate(c, v, r.minimizer);
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-6);
    CHECK(psi.annihilation_residual(v) <= 1e-8);
    CHECK(r.value - psi(c).real() <= 1e-5);
  }
}

TEST_CASE("oracle") {
  const CertifiedNorm exact = quotient_norm(m2_element(1, 0, 0, -1), unit_line());
  const OracleResult o = oracle_quotient_norm(m2_element(1, 0, 0, -1), unit_line());
  CHECK(o.converged);
  CHECK(std::abs(o.value - 1.0) <= 1e-4);
  CHECK(std::abs(o.value - exact.value) <= 1e-4);

  std::mt19937_64 rng(31);
  const AlgebraShape s({2, 1});
  const AmplifiedElement c = AmplifiedElement::random(s, 2, rng);
  const OracleResult z = oracle_quotient_norm(c, Subspace::zero(s));
  CHECK(z.value == cstar_norm(c));

  for (int t = 0; t < 3; ++t) {
    const Subspace v = random_subspace(s, 2, rng);
    const AmplifiedElement e = AmplifiedElement::random(s, 1 + t % 2, rng);
    const double q = quotient_norm(e, v).value;
    OracleBudget budget;
    budget.seed = static_cast<std::uint64_t>(t);
    CHECK(std::abs(oracle_quotient_norm(e, v, budget).value - q) <= 1e-4 * std::max(1.0, q));
  }
  CHECK_THROWS_AS(oracle_quotient_norm(AmplifiedElement::random(AlgebraShape({3}), 2, rng),
                                       Subspace::full(AlgebraShape({3}))),
                  ContractViolation);
}

TEST_CASE("functionals") {
  ComplexMatrix t(2, 2);
  t << 0.5, 0, 0, -0.5;
  const Functional psi(kM2, 1, {t});
  CHECK(psi.norm() == doctest::Approx(1.0));
  CHECK(psi.annihilation_residual(unit_line()) <= 1e-15);
  CHECK(psi.annihilation_residual(diagonals()) == doctest::Approx(0.5));
  CHECK_THROWS_AS(Functional(kM2, 2, {t}), ShapeMismatch);
  CHECK_THROWS_AS(quotient_norm(m2_element(1, 0, 0, 1), Subspace::zero(AlgebraShape({3}))),
                  ShapeMismatch);
}

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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "quotrep/commands.hpp"
#include "quotrep/errors.hpp"
#include "quotrep/gns.hpp"
#include "quotrep/realization.hpp"

using namespace quotrep;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
  void require(bool ok) { passed = passed && ok; }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// ---------------------------------------------------------------------------
// instance generators

Subspace random_general(const AlgebraShape& shape, int dim, std::mt19937_64& rng) {
  std::vector<AlgebraElement> basis;
  for (int k = 0; k < dim; ++k) basis.push_back(AlgebraElement::random(shape, rng));
  return Subspace(shape, basis);
}

AlgebraShape random_shape(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> blocks(1, 2), dim(1, 3);
  std::vector<int> d;
  const int b = blocks(rng);
  for (int i = 0; i < b; ++i) d.push_back(dim(rng));
  if (AlgebraShape(d).dimension() < 2) d.push_back(2);
  return AlgebraShape(d);
}

// span{1, h_1, ..., h_k} with Hermitian h_j
Subspace random_system(const AlgebraShape& shape, int extra, std::mt19937_64& rng) {
  std::vector<AlgebraElement> basis{unit(shape)};
  for (int k = 0; k < extra; ++k) basis.push_back(AlgebraElement::random(shape, rng, true));
  return Subspace(shape, basis, {true, true, false});
}

// span of Hermitian elements, star-closed but without the unit
Subspace random_star(const AlgebraShape& shape, int dim, std::mt19937_64& rng) {
  std::vector<AlgebraElement> basis;
  for (int k = 0; k < dim; ++k) basis.push_back(AlgebraElement::random(shape, rng, true));
  return Subspace(shape, basis, {true, false, false});
}

AlgebraElement conjugated(const AlgebraShape& s, std::size_t block, const ComplexMatrix& u,
                          int r, int c) {
  AlgebraElement e = AlgebraElement::matrix_unit(s, block, r, c);
  std::vector<ComplexMatrix> b = e.blocks();
  b[block] = u * b[block] * u.adjoint();
  return AlgebraElement(s, b);
}

Subspace m2_diagonals() {
  const AlgebraShape m2({2});
  return Subspace(m2,
                  {AlgebraElement::matrix_unit(m2, 0, 0, 0),
                   AlgebraElement::matrix_unit(m2, 0, 1, 1)},
                  {true, true, true});
}

// Unital *-subalgebras in rotated position.
Subspace random_subalgebra(int variant, std::mt19937_64& rng) {
  switch (variant % 4) {
    case 0: {  // U(M2 ⊕ M1)U* in M3
      const AlgebraShape s({3});
      const ComplexMatrix u = random_unitary(3, rng);
      std::vector<AlgebraElement> b;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) b.push_back(conjugated(s, 0, u, r, c));
      }
      b.push_back(conjugated(s, 0, u, 2, 2));
      return Subspace(s, b, {true, true, true});
    }
    case 1: {  // maximal abelian in M3
      const AlgebraShape s({3});
      const ComplexMatrix u = random_unitary(3, rng);
      return Subspace(s, {conjugated(s, 0, u, 0, 0), conjugated(s, 0, u, 1, 1),
                          conjugated(s, 0, u, 2, 2)},
                      {true, true, true});
    }
    case 2: {  // {(x, W x W*)} in M2 ⊕ M2
      const AlgebraShape s({2, 2});
      const ComplexMatrix w = random_unitary(2, rng);
      std::vector<AlgebraElement> b;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          ComplexMatrix e = ComplexMatrix::Zero(2, 2);
          e(r, c) = 1.0;
          b.emplace_back(s, std::vector<ComplexMatrix>{e, w * e * w.adjoint()});
        }
      }
      return Subspace(s, b, {true, true, true});
    }
    default: {  // {(U diag(a, b) U*, a)} in M2 ⊕ M1
      const AlgebraShape s({2, 1});
      const ComplexMatrix u = random_unitary(2, rng);
      ComplexMatrix e0 = ComplexMatrix::Zero(2, 2), e1 = e0;
      e0(0, 0) = 1.0;
      e1(1, 1) = 1.0;
      const ComplexMatrix one = ComplexMatrix::Ones(1, 1), zero = ComplexMatrix::Zero(1, 1);
      return Subspace(s,
                      {AlgebraElement(s, {u * e0 * u.adjoint(), one}),
                       AlgebraElement(s, {u * e1 * u.adjoint(), zero})},
                      {true, true, true});
    }
  }
}

ProbeSet certified_probes(const Subspace& v, int levels, std::uint64_t seed) {
  ProbeSet p = ProbeSet::generate(v, {levels, 1, true, seed});
  p.certify(v);
  return p;
}

// ---------------------------------------------------------------------------
// criteria

void quotient_vs_oracle(Outcome& out) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> level(1, 2), dim(1, 4);
  double worst_rel = 0.0, worst_gap = 0.0;
  int unconverged = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const AlgebraShape s = random_shape(rng);
    const int dv = std::min(dim(rng), s.dimension() - 1);
    const Subspace v = random_general(s, dv, rng);
    const AmplifiedElement c = AmplifiedElement::random(s, level(rng), rng);
    const CertifiedNorm q = quotient_norm(c, v);
    OracleBudget budget;
    budget.seed = static_cast<std::uint64_t>(inst);
    const OracleResult o = oracle_quotient_norm(c, v, budget);
    const double rel = std::abs(o.value - q.value) / std::max(q.value, 1e-12);
    worst_rel = std::max(worst_rel, rel);
    worst_gap = std::max(worst_gap, q.duality_gap);
    unconverged += !o.converged;
    out.require(rel <= 1e-4 && q.duality_gap <= 1e-5 && check_certificate(c, v, q).passed);
  }
  out.detail << "50 instances, max relative difference " << fmt(worst_rel) << ", max gap "
             << fmt(worst_gap) << ", oracle runs without convergence " << unconverged;
}

void worked_example(Outcome& out) {
  const AlgebraShape m2({2});
  ComplexMatrix d(2, 2);
  d << 1, 0, 0, -1;
  const double scanned = oracle::scan_minimum(
      [&](double l) { return oracle::operator_norm(d - l * ComplexMatrix::Identity(2, 2)); },
      -2.0, 2.0);
  const Subspace v(m2, {unit(m2)});
  const AmplifiedElement c = AmplifiedElement::from_element(AlgebraElement(m2, {d}));
  const CertifiedNorm q = quotient_norm(c, v);
  ComplexMatrix t(2, 2);
  t << 0.5, 0, 0, -0.5;
  const double value_err = std::abs(q.value - 1.0);
  out.require(std::abs(scanned - 1.0) <= 1e-6 && value_err <= 1e-6 && q.certificate.has_value());
  if (!q.certificate) return;
  const Functional& psi = *q.certificate;
  const double t_err = (psi.block(0) - t).norm();
  const double norm_err = std::abs(psi.norm() - 1.0);
  const double ann = psi.annihilation_residual(v);
  const double att = std::abs(psi(c) - 1.0);
  out.require(t_err <= 1e-6 && norm_err <= 1e-6 && ann <= 1e-6 && att <= 1e-6);
  out.detail << "value " << q.value << " (scan " << scanned << "), |T - diag(1/2,-1/2)| "
             << fmt(t_err) << ", norm " << fmt(norm_err) << ", annihilation " << fmt(ann)
             << ", attainment " << fmt(att);
}

void reconstruction(Outcome& out) {
  std::mt19937_64 rng(13);
  double worst_rec = 0.0, worst_ann = 0.0;
  bool ranks_ok = true;
  for (int inst = 0; inst < 30; ++inst) {
    const AlgebraShape s = random_shape(rng);
    const int n = 1 + inst % 3;
    const Subspace v = random_general(s, std::min(1 + inst % 3, s.dimension() - 1), rng);
    const AmplifiedElement c = AmplifiedElement::random(s, n, rng);
    const CertifiedNorm q = quotient_norm(c, v);
    if (!q.certificate) {
      out.require(false);
      continue;
    }
    const GnsVectors g = represent_functional(*q.certificate);
    const GnsData d = build_projections(g, v);
    const Eigen::Index h = d.rep.dimension();
    ComplexVector xi(n * h), eta(n * h);
    for (int k = 0; k < n; ++k) {
      xi.segment(k * h, h) = d.xi[k];
      eta.segment(k * h, h) = d.eta[k];
    }
    for (const auto& e : algebra_basis(s)) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const AmplifiedElement x = AmplifiedElement::corner(e, n, j, k);
          const Complex lhs = (*q.certificate)(x);
          const Complex rhs = eta.dot(compress(d, x) * xi);
          worst_rec = std::max(worst_rec, std::abs(lhs - rhs));
        }
      }
    }
    ranks_ok = ranks_ok && d.p_range.cols() <= n && d.q_range.cols() <= n;
    worst_ann = std::max(worst_ann, annihilation_residual(d, v));
  }
  out.require(worst_rec <= 1e-8 && ranks_ok && worst_ann <= 1e-8);
  out.detail << "30 functionals, reconstruction " << fmt(worst_rec) << ", ranks bounded "
             << (ranks_ok ? "yes" : "no") << ", Q pi(D) P " << fmt(worst_ann);
}

void truncated_isometry(Outcome& out) {
  std::mt19937_64 rng(17);
  double dev = 0.0, excess = -1.0, deficit = 0.0, span = 0.0;
  int held = 0;
  for (int inst = 0; inst < 5; ++inst) {
    const AlgebraShape s = inst % 2 ? AlgebraShape({2, 1}) : AlgebraShape({2});
    const Subspace v = random_general(s, 1 + inst % 2, rng);
    const ProbeSet probes = certified_probes(v, 2, static_cast<std::uint64_t>(inst));
    const Realization r = build_general(v, probes);
    IsometryOptions opts;
    opts.max_level = 2;
    opts.trials = 50;
    opts.seed = static_cast<std::uint64_t>(100 + inst);
    const IsometryReport rep = verify_complete_isometry(r, v, probes, opts);
    out.require(rep.passed);
    for (const auto& l : rep.levels) {
      dev = std::max(dev, l.probe_deviation);
      excess = std::max(excess, l.max_excess);
      deficit = std::max(deficit, l.max_deficit);
      span = std::max(span, l.span_deviation);
      held += l.held_out;
    }
  }
  out.require(dev <= 1e-5 && excess <= 1e-8);
  out.detail << "5 instances, probe deviation " << fmt(dev) << ", " << held
             << " held-out elements, max excess " << fmt(excess) << " (largest slack "
             << fmt(deficit) << ", span deviation " << fmt(span) << ")";
}

void star_maps(Outcome& out) {
  std::mt19937_64 rng(19);
  double u_worst = 0.0, star_worst = 0.0;
  for (int inst = 0; inst < 5; ++inst) {
    const AlgebraShape s = inst % 2 ? AlgebraShape({2, 1}) : AlgebraShape({3});
    const Subspace v = inst == 0 ? Subspace(AlgebraShape({2}), {unit(AlgebraShape({2}))},
                                            {true, true, false})
                                 : random_star(s, 1 + inst % 2, rng);
    const ProbeSet probes = certified_probes(v, 2, static_cast<std::uint64_t>(inst));
    const Realization r = build_star(v, probes);
    const CheckList checks = check_structure(r, v, probes);
    for (const char* name : {"U_hermitian", "U_unitary", "U_commutes_pi"}) {
      u_worst = std::max(u_worst, checks.worst(name));
    }
    star_worst = std::max(star_worst, checks.worst("star_map"));
    out.require(checks.passed());
  }
  out.require(u_worst <= 1e-10 && star_worst <= 1e-12);
  out.detail << "5 instances, U residuals " << fmt(u_worst) << ", *-map residual "
             << fmt(star_worst);
}

void operator_systems(Outcome& out) {
  std::mt19937_64 rng(23);
  double skew = 0.0, norm = 0.0, inter = 0.0, form = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const AlgebraShape s = inst % 3 == 0 ? AlgebraShape({2}) : AlgebraShape({2, 1});
    const Subspace v = random_system(s, inst % 2, rng);
    const ProbeSet probes = certified_probes(v, 1 + inst % 2, static_cast<std::uint64_t>(inst));
    const Realization r = build_system(v, probes);
    const CheckList checks = check_structure(r, v, probes);
    skew = std::max(skew, checks.worst("Z_skew"));
    norm = std::max(norm, checks.worst("Z_norm_excess"));
    inter = std::max(inter, checks.worst("PZ_intertwines"));
    form = std::max(form, checks.worst("commutator_form"));
    out.require(checks.passed());
  }
  out.require(skew <= 1e-10 && norm <= 1e-10 && inter <= 1e-10 && form <= 1e-10);
  out.detail << "20 instances, Z skew " << fmt(skew) << ", |Z| - 1 " << fmt(norm)
             << ", PZ - Z(I-P) " << fmt(inter) << ", commutator form " << fmt(form);
}

void subalgebras(Outcome& out) {
  std::mt19937_64 rng(29);
  double kill = 0.0, deriv = 0.0, contr = 0.0, dev = 0.0, sandwich = 0.0;
  int instances = 0;
  for (int inst = 0; inst < 4; ++inst) {
    const Subspace b = inst == 0 ? m2_diagonals() : random_subalgebra(inst - 1, rng);
    const ProbeSet probes = certified_probes(b, 2, static_cast<std::uint64_t>(inst));
    const Realization r = build_subalgebra(b, probes);
    StructureOptions so;
    so.derivation_pairs = 200;
    so.max_level = 3;
    so.seed = static_cast<std::uint64_t>(inst);
    const CheckList checks = check_structure(r, b, probes, so);
    kill = std::max(kill, checks.worst("theta_kills_B"));
    deriv = std::max(deriv, checks.worst("derivation_identity"));
    contr = std::max(contr, checks.worst("complete_contraction"));
    sandwich = std::max({sandwich, checks.worst("sandwich_theta_hat"),
                         checks.worst("sandwich_hat_psi")});
    IsometryOptions io;
    io.trials = 5;
    const IsometryReport rep = verify_complete_isometry(r, b, probes, io);
    for (const auto& l : rep.levels) dev = std::max(dev, l.probe_deviation);
    out.require(checks.passed() && rep.passed);
    ++instances;
  }
  out.require(kill <= 1e-10 && deriv <= 1e-10 && contr <= 1e-10 && dev <= 1e-5 &&
              sandwich <= 1e-8);
  out.detail << instances << " instances, Theta(b) " << fmt(kill) << ", derivation "
             << fmt(deriv) << ", contraction excess " << fmt(contr) << ", probe deviation "
             << fmt(dev) << ", sandwich " << fmt(sandwich);
}

void leibniz(Outcome& out) {
  std::mt19937_64 rng(31);
  double worst = -1e300;
  int pairs = 0;
  for (int inst = 0; inst < 6; ++inst) {
    const Subspace b = inst == 0 ? m2_diagonals() : random_subalgebra(inst - 1, rng);
    const ProbeSet probes = certified_probes(b, 1, static_cast<std::uint64_t>(inst));
    const Realization r = build_subalgebra(b, probes);
    const LeibnizReport l = leibniz_sweep(r, 1000, static_cast<std::uint64_t>(inst));
    worst = std::max(worst, l.max_excess);
    pairs += l.pairs;
  }
  out.require(worst <= 1e-9);
  out.detail << "6 instances, " << pairs << " pairs, max L(ac) - L(a)|c| - |a|L(c) = "
             << fmt(worst);
}

void jordan(Outcome& out) {
  std::mt19937_64 rng(37);
  double pos = 0.0, neg = 0.0, repro = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const AlgebraShape s = inst % 2 ? AlgebraShape({2, 1}) : AlgebraShape({2});
    const Subspace v = inst % 4 == 0 ? random_system(s, 1, rng) : random_star(s, 1, rng);
    const ProbeSet probes = certified_probes(v, 1, static_cast<std::uint64_t>(inst));
    const Realization r = build_star(v, probes);
    const JordanReport j = jordan_decomposition_check(r);
    pos = std::min(pos, j.choi_min_positive);
    neg = std::min(neg, j.choi_min_negative);
    repro = std::max(repro, j.reproduction);
    out.require(j.passed);
  }
  out.require(pos >= -1e-9 && neg >= -1e-9 && repro <= 1e-10);
  out.detail << "20 instances, Choi minima " << fmt(pos) << " / " << fmt(neg)
             << ", reproduction " << fmt(repro);
}

void cli_determinism(Outcome& out) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "quotrep_acceptance";
  fs::create_directories(dir);
  int compared = 0;
  for (const auto& [command, spec] : {std::pair{"quotient", "m2_zero.json"},
                                      std::pair{"realize", "m2_diagonal.json"},
                                      std::pair{"realize", "system_sum.json"}}) {
    std::string texts[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path report = dir / (std::string(command) + "_" + spec + std::to_string(k));
      const std::string cmd = std::string(QUOTREP_CLI) + " " + command + " --spec " +
                              QUOTREP_SPECS_DIR + "/" + spec + " --seed 5 --out " +
                              report.string();
      const int rc = std::system(cmd.c_str());
      out.require(rc == 0);
      texts[k] = read_file(report.string());
    }
    out.require(!texts[0].empty() && texts[0] == texts[1]);
    ++compared;
  }
  out.detail << compared << " spec/command pairs, reports byte-identical across two runs";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"quotient norm agrees with the derivative-free oracle", quotient_vs_oracle},
      {"worked example diag(1,-1) modulo span{I}", worked_example},
      {"functional reconstruction through Q pi P", reconstruction},
      {"truncated complete isometry", truncated_isometry},
      {"star realizations", star_maps},
      {"operator systems", operator_systems},
      {"unital subalgebras", subalgebras},
      {"Leibniz inequality", leibniz},
      {"Jordan decomposition into CP maps", jordan},
      {"command-line determinism", cli_determinism},
  };
  bool all = true;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(out);
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && out.passed;
    std::printf("%-4s criterion %2d  %s: %s [%.1fs]\n", out.passed ? "PASS" : "FAIL", index++,
                name, out.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}

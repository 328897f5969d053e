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

#include "quotrep/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "nnls.hpp"
#include "quotrep/errors.hpp"

namespace quotrep {

// ---------------------------------------------------------------------------
// Functional

Functional::Functional(AlgebraShape shape, int level, std::vector<ComplexMatrix> blocks)
    : shape_(std::move(shape)), level_(level), blocks_(std::move(blocks)) {
  if (level_ < 1) throw ContractViolation("Functional: level must be >= 1");
  if (blocks_.size() != shape_.num_blocks()) {
    throw ShapeMismatch("Functional: block count does not match shape");
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const int nd = level_ * shape_.block_dim(i);
    if (blocks_[i].rows() != nd || blocks_[i].cols() != nd) {
      throw ShapeMismatch("Functional: block has wrong size");
    }
  }
}

Complex Functional::operator()(const AmplifiedElement& c) const {
  if (c.shape() != shape_ || c.level() != level_) {
    throw ShapeMismatch("Functional: argument has wrong shape or level");
  }
  Complex out = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    // trace(T C) = Σ_ab T_ab C_ba
    out += blocks_[i].cwiseProduct(c.block(i).transpose()).sum();
  }
  return out;
}

double Functional::norm() const {
  double out = 0.0;
  for (const auto& t : blocks_) out += trace_norm(t);
  return out;
}

double Functional::annihilation_residual(const Subspace& v) const {
  double out = 0.0;
  for (const auto& w : amplify_subspace(v, level_)) out = std::max(out, std::abs((*this)(w)));
  return out;
}

namespace {

AmplifiedElement combine(const std::vector<AmplifiedElement>& basis,
                         const AlgebraShape& shape, int level,
                         const std::vector<Complex>& coeffs) {
  if (coeffs.size() != basis.size()) {
    throw ShapeMismatch("combine_amplified: coefficient count mismatch");
  }
  AmplifiedElement out = AmplifiedElement::zero(shape, level);
  for (std::size_t r = 0; r < basis.size(); ++r) out += coeffs[r] * basis[r];
  return out;
}

// Least-squares coefficients of c on the amplified basis (Frobenius metric).
std::vector<Complex> frobenius_projection(const AmplifiedElement& c,
                                          const std::vector<AmplifiedElement>& basis,
                                          double* relative_residual) {
  const ComplexVector target = c.to_vector();
  ComplexMatrix m(target.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t r = 0; r < basis.size(); ++r) {
    m.col(static_cast<Eigen::Index>(r)) = basis[r].to_vector();
  }
  ComplexVector coeffs = ComplexVector::Zero(m.cols());
  if (m.cols() > 0) coeffs = m.completeOrthogonalDecomposition().solve(target);
  if (relative_residual) {
    *relative_residual = (m * coeffs - target).norm() / std::max(1.0, target.norm());
  }
  return {coeffs.data(), coeffs.data() + coeffs.size()};
}

// Makes ψ vanish exactly on the amplified basis by subtracting the
// Frobenius-orthogonal component, then rescales to norm one and rotates the
// phase so that ψ(c) is real and nonnegative. Singular values below
// rank_cutoff (relative to the largest over all blocks) are removed by
// alternating truncation and projection, so a later rank cut in the GNS
// step does not spoil annihilation.
std::vector<ComplexMatrix> polish_certificate(std::vector<ComplexMatrix> t,
                                              const AmplifiedElement& c,
                                              const std::vector<AmplifiedElement>& basis,
                                              double rank_cutoff) {
  const AlgebraShape& shape = c.shape();
  const int level = c.level();
  const auto k = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix gram(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index s = 0; s < k; ++s) {
      // <W_s, W_r>_F = trace(W_s* W_r)
      Complex acc = 0.0;
      for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
        acc += basis[s].block(i).cwiseProduct(basis[r].block(i).conjugate()).sum();
      }
      gram(r, s) = std::conj(acc);
    }
  }
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> solver;
  if (k > 0) solver.compute(gram);
  auto project = [&] {
    if (k == 0) return;
    ComplexVector rhs(k);
    const Functional psi(shape, level, t);
    for (Eigen::Index r = 0; r < k; ++r) rhs(r) = psi(basis[r]);
    const ComplexVector coeffs = solver.solve(rhs);
    for (Eigen::Index s = 0; s < k; ++s) {
      for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
        t[i] -= coeffs(s) * basis[s].block(i).adjoint();
      }
    }
  };
  project();
  for (int it = 0; it < 50 && k > 0; ++it) {
    std::vector<SingularDecomposition> parts;
    double top = 0.0, total = 0.0;
    for (const auto& b : t) {
      parts.push_back(svd(b));
      if (parts.back().values.size() > 0) top = std::max(top, parts.back().values(0));
      total += parts.back().values.sum();
    }
    double tail = 0.0;
    for (const auto& d : parts) {
      for (Eigen::Index j = 0; j < d.values.size(); ++j) {
        if (d.values(j) <= rank_cutoff * top) tail += d.values(j);
      }
    }
    if (tail <= 1e-15 * total) break;
    for (std::size_t i = 0; i < t.size(); ++i) {
      RealVector kept = parts[i].values;
      for (Eigen::Index j = 0; j < kept.size(); ++j) {
        if (kept(j) <= rank_cutoff * top) kept(j) = 0.0;
      }
      t[i] = parts[i].left * kept.asDiagonal() * parts[i].right.adjoint();
    }
    project();
  }
  double norm = 0.0;
  for (const auto& b : t) norm += trace_norm(b);
  if (norm == 0.0) throw NumericalFault("certificate vanished after projection");
  for (auto& b : t) b /= norm;
  const Complex at_c = Functional(shape, level, t)(c);
  if (std::abs(at_c) > 0.0) {
    const Complex phase = std::conj(at_c) / std::abs(at_c);
    for (auto& b : t) b *= phase;
  }
  return t;
}


// ---------------------------------------------------------------------------
// Certificates on the active face of the spectral norm at X = C − D*:
// ψ = Σ_i tr(R_i M_i L_i* ·) with (L_i, R_i) the top singular vectors of
// block i, M_i ⪰ 0 and Σ tr M_i = 1. Such ψ has norm one and attains ‖X‖ up
// to the spread of the active singular values.

// Real coordinates of a Hermitian k×k matrix in which the Euclidean norm is
// the Frobenius norm: diagonal entries, then √2·Re and √2·Im of the strict
// upper triangle.
Eigen::VectorXd hermitian_coords(const ComplexMatrix& m) {
  const Eigen::Index k = m.rows();
  Eigen::VectorXd out(k * k);
  Eigen::Index pos = 0;
  for (Eigen::Index a = 0; a < k; ++a) out(pos++) = m(a, a).real();
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a + 1; b < k; ++b) {
      out(pos++) = std::sqrt(2.0) * m(a, b).real();
      out(pos++) = std::sqrt(2.0) * m(a, b).imag();
    }
  }
  return out;
}

ComplexMatrix hermitian_from_coords(const Eigen::VectorXd& v, Eigen::Index k) {
  ComplexMatrix m(k, k);
  Eigen::Index pos = 0;
  for (Eigen::Index a = 0; a < k; ++a) m(a, a) = v(pos++);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a + 1; b < k; ++b) {
      const double re = v(pos++) / std::sqrt(2.0);
      const double im = v(pos++) / std::sqrt(2.0);
      m(a, b) = Complex(re, im);
      m(b, a) = Complex(re, -im);
    }
  }
  return m;
}

std::optional<std::vector<ComplexMatrix>> certificate_on_face(
    const AmplifiedElement& x_elem, const std::vector<AmplifiedElement>& basis,
    const std::optional<std::vector<ComplexMatrix>>& guess, double face_width) {
  const AlgebraShape& shape = x_elem.shape();
  const std::size_t blocks = shape.num_blocks();
  const double value = cstar_norm(x_elem);
  if (value == 0.0) return std::nullopt;
  const double cut = value - face_width * std::max(1.0, value);

  std::vector<ComplexMatrix> left(blocks), right(blocks);
  std::vector<Eigen::Index> offset(blocks + 1, 0);
  Eigen::Index total_active = 0;
  for (std::size_t i = 0; i < blocks; ++i) {
    const SingularDecomposition d = svd(x_elem.block(i));
    Eigen::Index k = 0;
    while (k < d.values.size() && d.values(k) >= cut) ++k;
    left[i] = d.left.leftCols(k);
    right[i] = d.right.leftCols(k);
    offset[i + 1] = offset[i] + k * k;
    total_active += k;
  }
  const Eigen::Index params = offset[blocks];
  if (params == 0) return std::nullopt;

  // Rows: Re and Im of ψ(W_r), then Σ tr M_i.
  const auto nb = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * nb + 1, params);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * nb + 1);
  rhs(2 * nb) = 1.0;
  for (std::size_t i = 0; i < blocks; ++i) {
    const Eigen::Index k = left[i].cols();
    for (Eigen::Index e = 0; e < k * k; ++e) {
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(k * k);
      unit(e) = 1.0;
      const ComplexMatrix h = hermitian_from_coords(unit, k);
      for (Eigen::Index r = 0; r < nb; ++r) {
        // tr(R H L* W) = tr(H · L* W R)
        const ComplexMatrix g =
            left[i].adjoint() * basis[static_cast<std::size_t>(r)].block(i) * right[i];
        const Complex val = h.cwiseProduct(g.transpose()).sum();
        a(2 * r, offset[i] + e) = val.real();
        a(2 * r + 1, offset[i] + e) = val.imag();
      }
      a(2 * nb, offset[i] + e) = h.trace().real();
    }
  }

  Eigen::VectorXd m(params);
  for (std::size_t i = 0; i < blocks; ++i) {
    const Eigen::Index k = left[i].cols();
    if (k == 0) continue;
    ComplexMatrix m0;
    if (guess) {
      m0 = right[i].adjoint() * (*guess)[i] * left[i];
      m0 = 0.5 * (m0 + m0.adjoint()).eval();
    } else {
      m0 = ComplexMatrix::Identity(k, k) / static_cast<double>(total_active);
    }
    m.segment(offset[i], k * k) = hermitian_coords(m0);
  }

  // Alternating projections between the affine constraints and the PSD cone.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> affine;
  affine.setThreshold(1e-10);
  affine.compute(a);
  double affine_residual = 0.0;
  double min_eig = 0.0;
  for (int it = 0; it < 400; ++it) {
    m += affine.solve(rhs - a * m);
    affine_residual = (a * m - rhs).lpNorm<Eigen::Infinity>();
    min_eig = 0.0;
    for (std::size_t i = 0; i < blocks; ++i) {
      const Eigen::Index k = left[i].cols();
      if (k == 0) continue;
      const HermitianEigen eig =
          hermitian_eig(hermitian_from_coords(m.segment(offset[i], k * k), k), 1e-6);
      min_eig = std::min(min_eig, eig.values(k - 1));
      const RealVector clipped = eig.values.cwiseMax(0.0);
      m.segment(offset[i], k * k) = hermitian_coords(
          eig.vectors * clipped.cast<Complex>().asDiagonal() * eig.vectors.adjoint());
    }
    if (min_eig >= -1e-15 && affine_residual <= 1e-14) break;
  }
  affine_residual = (a * m - rhs).lpNorm<Eigen::Infinity>();
  // polishing removes what is left
  if (affine_residual > 1e-6) return std::nullopt;

  std::vector<ComplexMatrix> t;
  for (std::size_t i = 0; i < blocks; ++i) {
    const Eigen::Index k = left[i].cols();
    const int nd = x_elem.level() * shape.block_dim(i);
    if (k == 0) {
      t.push_back(ComplexMatrix::Zero(nd, nd));
      continue;
    }
    const ComplexMatrix mi = hermitian_from_coords(m.segment(offset[i], k * k), k);
    t.push_back(right[i] * mi * left[i].adjoint());
  }
  return t;
}

// Picks, among the barrier dual and its active-face refinements, the
// polished certificate with the largest value at c.
std::vector<ComplexMatrix> best_certificate(const AmplifiedElement& c,
                                            const AmplifiedElement& residual,
                                            const std::vector<AmplifiedElement>& basis,
                                            std::vector<ComplexMatrix> barrier_dual,
                                            double rank_cutoff) {
  std::vector<ComplexMatrix> best = polish_certificate(barrier_dual, c, basis, rank_cutoff);
  double best_value = Functional(c.shape(), c.level(), best)(c).real();
  for (double width : {1e-7, 1e-9, 1e-5}) {
    const auto face = certificate_on_face(residual, basis, barrier_dual, width);
    if (!face) continue;
    auto polished = polish_certificate(*face, c, basis, rank_cutoff);
    const double val = Functional(c.shape(), c.level(), polished)(c).real();
    if (val > best_value) {
      best_value = val;
      best = std::move(polished);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Barrier method for   minimize t  s.t.  [[tI, X_i],[X_i*, tI]] ⪰ 0  ∀ i,
// X = C − Σ_k x_k G_k, over real (t, x). G_{2r} = W_r and G_{2r+1} = i·W_r.

struct BarrierOutcome {
  std::vector<double> x;
  double t = 0.0;
  double mu = 0.0;
  std::vector<ComplexMatrix> dual_lower;   // μ·S_i lower-left N×N block
  int steps = 0;
  bool converged = false;
};

class SpectralBarrier {
 public:
  SpectralBarrier(std::vector<ComplexMatrix> c, std::vector<std::vector<ComplexMatrix>> g)
      : c_(std::move(c)), g_(std::move(g)) {
    for (const auto& b : c_) nu_ += 2.0 * static_cast<double>(b.rows());
  }

  std::size_t num_params() const { return g_.size(); }
  double nu() const { return nu_; }

  std::vector<ComplexMatrix> x_blocks(const std::vector<double>& x) const {
    std::vector<ComplexMatrix> out = c_;
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (x[k] == 0.0) continue;
      for (std::size_t i = 0; i < out.size(); ++i) out[i] -= x[k] * g_[k][i];
    }
    return out;
  }

  double spectral_value(const std::vector<double>& x) const {
    double out = 0.0;
    for (const auto& b : x_blocks(x)) out = std::max(out, spectral_norm(b));
    return out;
  }

  static ComplexMatrix lmi_block(const ComplexMatrix& x, double t) {
    const Eigen::Index n = x.rows();
    ComplexMatrix f(2 * n, 2 * n);
    f.topLeftCorner(n, n) = t * ComplexMatrix::Identity(n, n);
    f.bottomRightCorner(n, n) = t * ComplexMatrix::Identity(n, n);
    f.topRightCorner(n, n) = x;
    f.bottomLeftCorner(n, n) = x.adjoint();
    return f;
  }

  // Cholesky factors of every block, or nullopt if some block is not PD.
  std::optional<std::vector<Eigen::LLT<ComplexMatrix>>> factor(
      const std::vector<double>& x, double t) const {
    std::vector<Eigen::LLT<ComplexMatrix>> out;
    for (const auto& b : x_blocks(x)) {
      Eigen::LLT<ComplexMatrix> llt(lmi_block(b, t));
      if (llt.info() != Eigen::Success) return std::nullopt;
      const auto diag = llt.matrixLLT().diagonal().real();
      if ((diag.array() <= 0.0).any()) return std::nullopt;
      out.push_back(std::move(llt));
    }
    return out;
  }

  BarrierOutcome solve(std::vector<double> x, double t, double mu0, double gap_target,
                       int max_steps) const {
    const std::size_t m = g_.size();
    const Eigen::Index p = static_cast<Eigen::Index>(m) + 1;
    BarrierOutcome out;
    double mu = mu0;
    int steps = 0;
    bool stalled = false;
    while (steps < max_steps && !stalled) {
      // centering by damped Newton
      for (int inner = 0; inner < 40; ++inner) {
        if (steps >= max_steps) break;
        auto factors = factor(x, t);
        if (!factors) throw NumericalFault("barrier iterate left the feasible region");
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
        Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(p, p);
        grad(0) = 1.0 / mu;
        for (std::size_t i = 0; i < c_.size(); ++i) {
          const Eigen::Index n = c_[i].rows();
          const ComplexMatrix s =
              (*factors)[i].solve(ComplexMatrix::Identity(2 * n, 2 * n));
          std::vector<ComplexMatrix> sa(p);
          sa[0] = s;
          for (std::size_t k = 0; k < m; ++k) {
            // S·(−B_k) with B_k = [[0, G],[G*, 0]]
            const ComplexMatrix& gk = g_[k][i];
            ComplexMatrix prod(2 * n, 2 * n);
            prod.leftCols(n) = -s.rightCols(n) * gk.adjoint();
            prod.rightCols(n) = -s.leftCols(n) * gk;
            sa[k + 1] = std::move(prod);
          }
          for (Eigen::Index a = 0; a < p; ++a) {
            grad(a) -= sa[a].trace().real();
            for (Eigen::Index b = a; b < p; ++b) {
              const double h = sa[a].cwiseProduct(sa[b].transpose()).sum().real();
              hess(a, b) += h;
              if (b != a) hess(b, a) += h;
            }
          }
        }
        // Jacobi-scaled Newton system
        Eigen::VectorXd scale = hess.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd hs = scale.asDiagonal() * hess * scale.asDiagonal();
        const Eigen::VectorXd gs = scale.cwiseProduct(grad);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hs);
        Eigen::VectorXd step = -scale.cwiseProduct(ldlt.solve(gs));
        if (!step.allFinite()) {
          step = -scale.cwiseProduct(hs.completeOrthogonalDecomposition().solve(gs));
        }
        const double decrement2 = std::max(0.0, -grad.dot(step));
        ++steps;
        if (decrement2 < 1e-14) break;
        const double decrement = std::sqrt(decrement2);
        double alpha = decrement > 0.25 ? 1.0 / (1.0 + decrement) : 1.0;
        bool moved = false;
        for (int tries = 0; tries < 60; ++tries) {
          std::vector<double> trial = x;
          for (std::size_t k = 0; k < m; ++k) trial[k] += alpha * step(k + 1);
          const double t_trial = t + alpha * step(0);
          if (factor(trial, t_trial)) {
            x = std::move(trial);
            t = t_trial;
            moved = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!moved) {
          stalled = true;
          break;
        }
        // below this the decrement is round-off
        if (decrement2 < 1e-8 && alpha == 1.0) break;
      }
      if (mu * nu_ <= gap_target) {
        out.converged = true;
        break;
      }
      mu *= 0.2;
    }
    // dual point from the last iterate
    auto factors = factor(x, t);
    if (!factors) throw NumericalFault("barrier iterate left the feasible region");
    for (std::size_t i = 0; i < c_.size(); ++i) {
      const Eigen::Index n = c_[i].rows();
      const ComplexMatrix s = (*factors)[i].solve(ComplexMatrix::Identity(2 * n, 2 * n));
      out.dual_lower.push_back(mu * s.bottomLeftCorner(n, n));
    }
    out.x = std::move(x);
    out.t = t;
    out.mu = mu;
    out.steps = steps;
    return out;
  }

 private:
  std::vector<ComplexMatrix> c_;
  std::vector<std::vector<ComplexMatrix>> g_;
  double nu_ = 0.0;
};

struct SolvedProgram {
  std::vector<Complex> coeffs;
  std::vector<ComplexMatrix> certificate;   // polished, norm one
  double primal = 0.0;
  double dual = 0.0;
  int steps = 0;
  bool converged = false;
};

SolvedProgram solve_program(const AmplifiedElement& c,
                            const std::vector<AmplifiedElement>& basis,
                            const QuotientOptions& options) {
  const double scale = cstar_norm(c);
  std::vector<ComplexMatrix> c_blocks;
  for (const auto& b : c.blocks()) c_blocks.push_back(b / scale);
  std::vector<std::vector<ComplexMatrix>> gens;
  for (const auto& w : basis) {
    gens.push_back(w.blocks());
    std::vector<ComplexMatrix> iw;
    for (const auto& b : w.blocks()) iw.push_back(kI * b);
    gens.push_back(std::move(iw));
  }
  SpectralBarrier barrier(std::move(c_blocks), std::move(gens));

  const AmplifiedElement scaled = (1.0 / scale) * c;
  const auto start = frobenius_projection(scaled, basis, nullptr);
  std::vector<double> x(2 * basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    x[2 * r] = start[r].real();
    x[2 * r + 1] = start[r].imag();
  }
  const double t0 = 1.25 * barrier.spectral_value(x) + 0.25;
  const BarrierOutcome run =
      barrier.solve(std::move(x), t0, 0.05, options.tol.solver_gap, options.max_newton_steps);

  SolvedProgram out;
  out.steps = run.steps;
  out.converged = run.converged;
  out.coeffs.resize(basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    out.coeffs[r] = scale * Complex(run.x[2 * r], run.x[2 * r + 1]);
  }
  out.primal = cstar_norm(c - combine(basis, c.shape(), c.level(), out.coeffs));
  std::vector<ComplexMatrix> t;
  for (const auto& z : run.dual_lower) t.push_back(-2.0 * z);
  const AmplifiedElement residual = c - combine(basis, c.shape(), c.level(), out.coeffs);
  out.certificate = best_certificate(c, residual, basis, std::move(t), options.tol.rank_cutoff);
  out.dual = Functional(c.shape(), c.level(), out.certificate)(c).real();
  return out;
}

}  // namespace

AmplifiedElement combine_amplified(const Subspace& v, int level,
                                   const std::vector<Complex>& coeffs) {
  return combine(amplify_subspace(v, level), v.shape(), level, coeffs);
}

CertifiedNorm quotient_norm(const AmplifiedElement& c, const Subspace& v,
                            const QuotientOptions& options) {
  if (c.shape() != v.shape()) throw ShapeMismatch("quotient_norm: shape mismatch");
  const auto basis = amplify_subspace(v, c.level());
  CertifiedNorm out;
  double residual = 0.0;
  const auto projection = frobenius_projection(c, basis, &residual);
  if (residual <= options.tol.membership || cstar_norm(c) == 0.0) {
    // C ∈ M_n(V): no norm-one functional is needed
    out.minimizer = projection;
    out.minimizer_element = combine(basis, c.shape(), c.level(), out.minimizer);
    out.value = cstar_norm(c - out.minimizer_element);
    out.duality_gap = out.value;
    return out;
  }
  const SolvedProgram sol = solve_program(c, basis, options);
  out.minimizer = sol.coeffs;
  out.minimizer_element = combine(basis, c.shape(), c.level(), out.minimizer);
  out.value = sol.primal;
  out.dual_value = sol.dual;
  out.duality_gap = sol.primal - sol.dual;
  out.iterations = sol.steps;
  out.certificate = Functional(c.shape(), c.level(), sol.certificate);
  if (out.duality_gap > options.tol.attainment * std::max(1.0, out.value) ||
      out.duality_gap < -options.tol.attainment) {
    throw ConvergenceError("quotient_norm: duality gap " + std::to_string(out.duality_gap) +
                               " above tolerance after " + std::to_string(sol.steps) +
                               " Newton steps",
                           sol.primal, sol.dual, out.duality_gap);
  }
  return out;
}

Functional dual_certificate(const AmplifiedElement& c, const Subspace& v,
                            const std::vector<Complex>& minimizer,
                            const QuotientOptions& options) {
  if (c.shape() != v.shape()) throw ShapeMismatch("dual_certificate: shape mismatch");
  const auto basis = amplify_subspace(v, c.level());
  const AmplifiedElement residual_elem =
      c - combine(basis, c.shape(), c.level(), minimizer);
  const double value = cstar_norm(residual_elem);
  if (value == 0.0) {
    throw ContractViolation("dual_certificate: C lies in M_n(V), no certificate exists");
  }
  const AlgebraShape& shape = c.shape();
  const int level = c.level();

  // Norming functionals of the top singular pairs: ψ_j(Y) = l_j* Y r_j.
  std::vector<std::vector<ComplexMatrix>> candidates;
  const double cut = value - 1e-6 * std::max(1.0, value);
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const SingularDecomposition d = svd(residual_elem.block(i));
    for (Eigen::Index j = 0; j < d.values.size(); ++j) {
      if (d.values(j) < cut) break;
      std::vector<ComplexMatrix> t;
      for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
        const int nd = level * shape.block_dim(b);
        t.push_back(ComplexMatrix::Zero(nd, nd));
      }
      t[i] = d.right.col(j) * d.left.col(j).adjoint();
      candidates.push_back(std::move(t));
    }
  }

  const auto k = static_cast<Eigen::Index>(basis.size());
  const auto count = static_cast<Eigen::Index>(candidates.size());
  Eigen::MatrixXd system(1 + 2 * k, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Functional psi(shape, level, candidates[static_cast<std::size_t>(j)]);
    system(0, j) = 1.0;
    for (Eigen::Index r = 0; r < k; ++r) {
      const Complex val = psi(basis[static_cast<std::size_t>(r)]);
      system(1 + 2 * r, j) = val.real();
      system(2 + 2 * r, j) = val.imag();
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(1 + 2 * k);
  rhs(0) = 1.0;
  const Eigen::VectorXd lambda = detail::nnls(system, rhs);
  const double total = lambda.sum();
  if (total > 0.0) {
    std::vector<ComplexMatrix> t;
    for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
      const int nd = level * shape.block_dim(b);
      t.push_back(ComplexMatrix::Zero(nd, nd));
    }
    for (Eigen::Index j = 0; j < count; ++j) {
      for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
        t[b] += (lambda(j) / total) * candidates[static_cast<std::size_t>(j)][b];
      }
    }
    const Functional combo(shape, level, t);
    double annihilation = 0.0;
    for (const auto& w : basis) annihilation = std::max(annihilation, std::abs(combo(w)));
    if (annihilation <= options.tol.annihilation) {
      Functional polished(shape, level, polish_certificate(std::move(t), c, basis, options.tol.rank_cutoff));
      if (value - polished(c).real() <= options.tol.attainment) return polished;
    }
  }

  // Degenerate top singular subspace: solve the dual program directly.
  const SolvedProgram sol = solve_program(c, basis, options);
  Functional fallback(shape, level, sol.certificate);
  const double shortfall = value - fallback(c).real();
  if (shortfall > options.tol.attainment) {
    throw NumericalFault("dual_certificate: no attaining functional found (shortfall " +
                         std::to_string(shortfall) + ")");
  }
  return fallback;
}

CertificateCheck check_certificate(const AmplifiedElement& c, const Subspace& v,
                                   const CertifiedNorm& result, const Tolerances& tol) {
  CertificateCheck out;
  const double direct = cstar_norm(c - result.minimizer_element);
  out.value_residual = std::abs(result.value - direct) / std::max(1.0, result.value);
  if (!result.certificate) {
    out.passed = out.value_residual <= 1e-6 && result.value <= tol.membership * std::max(1.0, cstar_norm(c));
    return out;
  }
  const Functional& psi = *result.certificate;
  out.norm_residual = std::abs(psi.norm() - 1.0);
  out.annihilation = psi.annihilation_residual(v);
  out.attainment_shortfall = result.value - psi(c).real();
  out.passed = out.value_residual <= 1e-6 && out.norm_residual <= tol.certificate_norm &&
               out.annihilation <= tol.annihilation &&
               out.attainment_shortfall <= tol.attainment;
  return out;
}

// ---------------------------------------------------------------------------
// Derivative-free oracle

namespace {

class OracleObjective {
 public:
  OracleObjective(const AmplifiedElement& c, const std::vector<AmplifiedElement>& basis)
      : c_(c.blocks()) {
    for (const auto& w : basis) {
      gens_.push_back(w.blocks());
      std::vector<ComplexMatrix> iw;
      for (const auto& b : w.blocks()) iw.push_back(kI * b);
      gens_.push_back(std::move(iw));
    }
  }

  std::size_t dim() const { return gens_.size(); }
  long evaluations() const { return evaluations_; }

  double operator()(const Eigen::VectorXd& x) {
    ++evaluations_;
    double out = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      ComplexMatrix m = c_[i];
      for (std::size_t k = 0; k < gens_.size(); ++k) {
        m -= x(static_cast<Eigen::Index>(k)) * gens_[k][i];
      }
      const ComplexMatrix gram = m.adjoint() * m;
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
      out = std::max(out, std::sqrt(std::max(0.0, eig.eigenvalues()(gram.rows() - 1))));
    }
    return out;
  }

 private:
  std::vector<ComplexMatrix> c_;
  std::vector<std::vector<ComplexMatrix>> gens_;
  long evaluations_ = 0;
};

struct SearchResult {
  double value;
  bool converged;
};

// (μ/μ_w, λ)-CMA-ES with rank-one and rank-μ covariance updates.
SearchResult cma_search(OracleObjective& f, Eigen::VectorXd mean, double sigma,
                        double abs_tol, long max_evaluations, int lambda,
                        std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(f.dim());
  const double dn = static_cast<double>(n);
  const int mu = lambda / 2;
  Eigen::VectorXd w(mu);
  for (int k = 0; k < mu; ++k) w(k) = std::log(mu + 0.5) - std::log(k + 1.0);
  w /= w.sum();
  const double mueff = 1.0 / w.squaredNorm();
  const double cc = (4.0 + mueff / dn) / (dn + 4.0 + 2.0 * mueff / dn);
  const double cs = (mueff + 2.0) / (dn + mueff + 5.0);
  const double c1 = 2.0 / ((dn + 1.3) * (dn + 1.3) + mueff);
  const double cmu =
      std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((dn + 2.0) * (dn + 2.0) + mueff));
  const double damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (dn + 1.0)) - 1.0) + cs;
  const double chi_n = std::sqrt(dn) * (1.0 - 1.0 / (4.0 * dn) + 1.0 / (21.0 * dn * dn));

  Eigen::VectorXd pc = Eigen::VectorXd::Zero(n), ps = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd axes = Eigen::VectorXd::Ones(n);
  std::normal_distribution<double> normal(0.0, 1.0);

  double best = f(mean);
  long generation = 0;
  std::vector<Eigen::VectorXd> z(static_cast<std::size_t>(lambda)), y(z.size());
  std::vector<double> fit(z.size());
  std::vector<int> order(z.size());
  std::vector<double> history;
  while (f.evaluations() < max_evaluations) {
    ++generation;
    for (int k = 0; k < lambda; ++k) {
      Eigen::VectorXd zk(n);
      for (Eigen::Index j = 0; j < n; ++j) zk(j) = normal(rng);
      y[k] = basis * axes.cwiseProduct(zk);
      z[k] = std::move(zk);
      fit[k] = f(mean + sigma * y[k]);
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fit[a] < fit[b]; });
    best = std::min(best, fit[order[0]]);

    Eigen::VectorXd yw = Eigen::VectorXd::Zero(n), zw = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < mu; ++k) {
      yw += w(k) * y[order[k]];
      zw += w(k) * z[order[k]];
    }
    mean += sigma * yw;
    ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * (basis * zw);
    const double ps_norm = ps.norm();
    const bool hsig = ps_norm / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * generation)) / chi_n <
                      1.4 + 2.0 / (dn + 1.0);
    pc = (1.0 - cc) * pc + (hsig ? std::sqrt(cc * (2.0 - cc) * mueff) : 0.0) * yw;
    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < mu; ++k) rank_mu += w(k) * y[order[k]] * y[order[k]].transpose();
    cov = (1.0 - c1 - cmu) * cov + c1 * (pc * pc.transpose() + (hsig ? 0.0 : cc * (2.0 - cc)) * cov) +
          cmu * rank_mu;
    sigma *= std::exp((cs / damps) * (ps_norm / chi_n - 1.0));

    cov = 0.5 * (cov + cov.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    basis = eig.eigenvectors();
    axes = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt();

    history.push_back(fit[order[0]]);
    const double spread = fit[order[lambda - 1]] - fit[order[0]];
    if (sigma * axes.maxCoeff() <= abs_tol && spread <= abs_tol) return {best, true};
    if (history.size() > 40) {
      const double old = history[history.size() - 41];
      if (std::abs(old - history.back()) <= 1e-15 * std::max(1.0, best) && spread <= abs_tol) {
        return {best, true};
      }
    }
  }
  return {best, false};
}

}  // namespace

OracleResult oracle_quotient_norm(const AmplifiedElement& c, const Subspace& v,
                                  const OracleBudget& budget) {
  if (c.shape() != v.shape()) throw ShapeMismatch("oracle_quotient_norm: shape mismatch");
  const auto basis = amplify_subspace(v, c.level());
  if (2 * basis.size() > 40) {
    throw ContractViolation("oracle_quotient_norm: more than 40 real parameters");
  }
  OracleResult out;
  if (basis.empty()) {
    out.value = cstar_norm(c);
    out.converged = true;
    out.evaluations = 1;
    return out;
  }
  OracleObjective f(c, basis);
  std::mt19937_64 rng(budget.seed);
  const double scale = cstar_norm(c);
  const auto start = frobenius_projection(c, basis, nullptr);
  Eigen::VectorXd x0(static_cast<Eigen::Index>(2 * basis.size()));
  for (std::size_t r = 0; r < basis.size(); ++r) {
    x0(static_cast<Eigen::Index>(2 * r)) = start[r].real();
    x0(static_cast<Eigen::Index>(2 * r + 1)) = start[r].imag();
  }
  // IPOP restarts: each run doubles the population.
  const double abs_tol = 1e-8 * std::max(scale, 1e-6);
  const int base_lambda = 4 + static_cast<int>(3.0 * std::log(static_cast<double>(x0.size())));
  const long per_run = budget.max_evaluations / (budget.restarts + 1);
  out.value = std::numeric_limits<double>::infinity();
  out.converged = false;
  std::normal_distribution<double> normal(0.0, 0.3 * std::max(scale, 1e-6));
  double previous = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= budget.restarts; ++s) {
    if (f.evaluations() >= budget.max_evaluations) break;
    Eigen::VectorXd x = x0;
    if (s > 0) {
      for (Eigen::Index k = 0; k < x.size(); ++k) x(k) += normal(rng);
    }
    const SearchResult r =
        cma_search(f, x, 0.3 * std::max(scale, 1e-6), abs_tol,
                   std::min<long>(budget.max_evaluations, f.evaluations() + per_run),
                   base_lambda << std::min(s, 3), rng);
    out.value = std::min(out.value, r.value);
    if (!r.converged) continue;
    // agreement between independent runs counts as convergence
    if (std::abs(r.value - previous) <= 1e-7 * std::max(1.0, scale)) out.converged = true;
    previous = std::min(previous, r.value);
  }
  out.evaluations = f.evaluations();
  return out;
}

}  // namespace quotrep

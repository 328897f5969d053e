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

#include "quotrep/realization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "quotrep/errors.hpp"

namespace quotrep {

std::string to_string(RealizationKind kind) {
  switch (kind) {
    case RealizationKind::general: return "general";
    case RealizationKind::star: return "star";
    case RealizationKind::system: return "system";
    case RealizationKind::subalgebra: return "subalgebra";
  }
  return "general";
}

RealizationKind realization_kind_from_string(const std::string& name) {
  if (name == "general") return RealizationKind::general;
  if (name == "star") return RealizationKind::star;
  if (name == "system") return RealizationKind::system;
  if (name == "subalgebra") return RealizationKind::subalgebra;
  throw ContractViolation("unknown realization kind '" + name + "'");
}

// ---------------------------------------------------------------------------
// Probes

namespace {

bool same_element(const AmplifiedElement& a, const AmplifiedElement& b) {
  if (a.level() != b.level() || a.shape() != b.shape()) return false;
  const double tol = 1e-12 * std::max(1.0, cstar_norm(a));
  for (std::size_t i = 0; i < a.shape().num_blocks(); ++i) {
    if (max_abs(a.block(i) - b.block(i)) > tol) return false;
  }
  return true;
}

}  // namespace

ProbeSet ProbeSet::generate(const Subspace& v, const ProbeOptions& options) {
  if (options.levels < 1) throw ContractViolation("ProbeSet::generate: levels must be >= 1");
  ProbeSet out;
  const AlgebraShape& shape = v.shape();
  if (options.include_basis) {
    for (const auto& e : algebra_basis(shape)) out.add(AmplifiedElement::from_element(e));
  }
  std::mt19937_64 rng(options.seed);
  for (int n = 1; n <= options.levels; ++n) {
    for (int k = 0; k < options.random_per_level; ++k) {
      out.add(AmplifiedElement::random(shape, n, rng, true));
      out.add(AmplifiedElement::random(shape, n, rng, false));
    }
  }
  if (v.flags().star_closed) out.symmetrize();
  return out;
}

void ProbeSet::add(AmplifiedElement c) { probes_.push_back({std::move(c), std::nullopt}); }

void ProbeSet::symmetrize() {
  const std::size_t count = probes_.size();
  for (std::size_t k = 0; k < count; ++k) {
    AmplifiedElement adj = probes_[k].element.adjoint();
    const bool present = std::any_of(probes_.begin(), probes_.end(), [&](const Probe& p) {
      return same_element(p.element, adj);
    });
    if (!present) add(std::move(adj));
  }
}

void ProbeSet::certify(const Subspace& v, const QuotientOptions& options) {
  for (auto& p : probes_) {
    if (!p.certified) p.certified = quotient_norm(p.element, v, options);
  }
}

bool ProbeSet::certified() const {
  return std::all_of(probes_.begin(), probes_.end(),
                     [](const Probe& p) { return p.certified.has_value(); });
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

// Isometry from `part` into `whole` placing the multiplicity slots of block i
// at slot[i], slot[i]+1, ... of the larger multiplicity space.
ComplexMatrix embedding(const RepresentationData& whole, const RepresentationData& part,
                        const std::vector<int>& slot) {
  ComplexMatrix j = ComplexMatrix::Zero(whole.dimension(), part.dimension());
  const AlgebraShape& shape = whole.shape();
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const int d = shape.block_dim(i);
    const int big = whole.multiplicity(i);
    const int small = part.multiplicity(i);
    for (int r = 0; r < d; ++r) {
      for (int s = 0; s < small; ++s) {
        j(whole.offset(i) + r * big + slot[i] + s, part.offset(i) + r * small + s) = 1.0;
      }
    }
  }
  return j;
}

ComplexMatrix block_diagonal(const ComplexMatrix& b, int copies) {
  ComplexMatrix out = ComplexMatrix::Zero(copies * b.rows(), copies * b.cols());
  for (int k = 0; k < copies; ++k) out.block(k * b.rows(), k * b.cols(), b.rows(), b.cols()) = b;
  return out;
}

struct Family {
  RepresentationData rep;
  ComplexMatrix p;
  ComplexMatrix q;
  int members = 0;
};

Family assemble(const Subspace& v, const ProbeSet& probes, const Tolerances& tol) {
  const AlgebraShape& shape = v.shape();
  std::vector<GnsData> parts;
  for (const auto& probe : probes.probes()) {
    if (probe.element.shape() != shape) throw ShapeMismatch("probe shape differs from subspace");
    if (!probe.certified) throw ContractViolation("probe without a certified quotient norm");
    // no norm-one annihilating functional exists for value-zero probes
    if (!probe.certified->certificate) continue;
    parts.push_back(build_projections(represent_functional(*probe.certified->certificate, tol),
                                      v, tol));
  }
  std::vector<int> mult(shape.num_blocks(), 0);
  for (const auto& g : parts) {
    for (std::size_t i = 0; i < mult.size(); ++i) mult[i] += g.rep.multiplicity(i);
  }
  Family out;
  out.rep = RepresentationData(shape, mult);
  out.members = static_cast<int>(parts.size());
  const Eigen::Index n = out.rep.dimension();
  out.p = ComplexMatrix::Zero(n, n);
  out.q = ComplexMatrix::Zero(n, n);
  std::vector<int> slot(shape.num_blocks(), 0);
  for (const auto& g : parts) {
    const ComplexMatrix j = embedding(out.rep, g.rep, slot);
    out.p += j * g.p * j.adjoint();
    out.q += j * g.q * j.adjoint();
    for (std::size_t i = 0; i < slot.size(); ++i) slot[i] += g.rep.multiplicity(i);
  }
  return out;
}

ComplexMatrix range_basis(const ComplexMatrix& projection) {
  if (projection.size() == 0) return ComplexMatrix(projection.rows(), 0);
  // singular values of a projection are 0 or 1
  return orthonormalize(projection, 0.5);
}

}  // namespace

void Realization::refresh(const Tolerances&) {
  p_range = range_basis(p);
  q_range = range_basis(q);
  if (x) {
    const Eigen::Index n = x->rows();
    p_hat_range = range_basis(0.5 * (*x + ComplexMatrix::Identity(n, n)));
  } else {
    p_hat_range = ComplexMatrix(p.rows(), 0);
  }
}

Realization build_general(const Subspace& v, const ProbeSet& probes,
                          const RealizationOptions& options) {
  const Tolerances& tol = options.quotient.tol;
  Family f = assemble(v, probes, tol);
  Realization r;
  r.kind = RealizationKind::general;
  r.rep = std::move(f.rep);
  r.p = std::move(f.p);
  r.q = std::move(f.q);
  r.functionals = f.members;
  r.refresh(tol);
  if (options.compress) r = compress_realization(r, tol);
  return r;
}

Realization build_star(const Subspace& v, ProbeSet probes, const RealizationOptions& options) {
  if (!v.flags().star_closed) throw ContractViolation("build_star: subspace is not star-closed");
  const Tolerances& tol = options.quotient.tol;
  probes.symmetrize();
  probes.certify(v, options.quotient);
  Family f = assemble(v, probes, tol);

  // H ⊕ H is again in canonical form with doubled multiplicities
  std::vector<int> doubled;
  std::vector<int> first(f.rep.multiplicities().size(), 0);
  for (int m : f.rep.multiplicities()) doubled.push_back(2 * m);
  RepresentationData rep(v.shape(), doubled);
  const ComplexMatrix j1 = embedding(rep, f.rep, first);
  const ComplexMatrix j2 = embedding(rep, f.rep, f.rep.multiplicities());

  Realization r;
  r.kind = RealizationKind::star;
  r.rep = std::move(rep);
  r.p = j1 * f.p * j1.adjoint() + j2 * f.q * j2.adjoint();
  r.q = r.p;
  r.u = j1 * j2.adjoint() + j2 * j1.adjoint();
  r.functionals = f.members;
  r.refresh(tol);
  if (options.compress) r = compress_realization(r, tol);
  return r;
}

Realization build_system(const Subspace& v, ProbeSet probes, const RealizationOptions& options) {
  if (!v.flags().contains_unit) throw ContractViolation("build_system: unit is not in the subspace");
  if (!v.flags().star_closed) throw ContractViolation("build_system: subspace is not star-closed");
  Realization r = build_star(v, std::move(probes), options);
  r.kind = RealizationKind::system;
  r.z = r.p * (*r.u) - (*r.u) * r.p;
  return r;
}

Realization build_subalgebra(const Subspace& b, ProbeSet probes,
                             const RealizationOptions& options) {
  if (!b.flags().is_subalgebra) {
    throw ContractViolation("build_subalgebra: subspace is not a unital *-subalgebra");
  }
  const Tolerances& tol = options.quotient.tol;
  Realization r = build_star(b, std::move(probes), options);
  r.kind = RealizationKind::subalgebra;
  // range of P̂ is span π(B)PH; 1 ∈ B so PH is included
  const Eigen::Index k = r.p_range.cols();
  ComplexMatrix gens(r.dimension(), static_cast<Eigen::Index>(b.dim() + 1) * k);
  gens.leftCols(k) = r.p_range;
  for (std::size_t j = 0; j < b.dim(); ++j) {
    gens.middleCols(static_cast<Eigen::Index>(j + 1) * k, k) = r.rep.act(b.basis()[j], r.p_range);
  }
  const ComplexMatrix hat = orthonormalize(gens, tol.rank_cutoff);
  const Eigen::Index n = r.dimension();
  r.x = 2.0 * projector(hat) - ComplexMatrix::Identity(n, n);
  r.refresh(tol);
  return r;
}

Realization compress_realization(const Realization& r, const Tolerances& tol) {
  const Eigen::Index n = r.dimension();
  ComplexMatrix gens(n, 0);
  auto append = [&](const ComplexMatrix& m) {
    ComplexMatrix next(n, gens.cols() + m.cols());
    next << gens, m;
    gens = std::move(next);
  };
  append(r.p_range);
  append(r.q_range);
  if (r.u) append(*r.u * r.p_range);

  const AlgebraShape& shape = r.rep.shape();
  std::vector<ComplexMatrix> keep;
  std::vector<int> mult;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const int d = shape.block_dim(i);
    const int m = r.rep.multiplicity(i);
    // π(A)x has slice a·Yᵀ, so the invariant subspace is C^d ⊗ span(columns of Y)
    ComplexMatrix cols(m, gens.cols() * d);
    for (Eigen::Index c = 0; c < gens.cols(); ++c) {
      Eigen::Map<const ComplexMatrix> y(gens.col(c).data() + r.rep.offset(i), m, d);
      cols.middleCols(c * d, d) = y;
    }
    keep.push_back(m == 0 ? ComplexMatrix(0, 0) : orthonormalize(cols, tol.rank_cutoff));
    mult.push_back(static_cast<int>(keep.back().cols()));
  }
  RepresentationData rep(shape, mult);
  ComplexMatrix j = ComplexMatrix::Zero(n, rep.dimension());
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const int d = shape.block_dim(i);
    const int m = r.rep.multiplicity(i);
    const int w = mult[i];
    for (int row = 0; row < d; ++row) {
      j.block(r.rep.offset(i) + row * m, rep.offset(i) + row * w, m, w) = keep[i];
    }
  }
  Realization out;
  out.kind = r.kind;
  out.rep = std::move(rep);
  out.functionals = r.functionals;
  out.p = j.adjoint() * r.p * j;
  out.q = j.adjoint() * r.q * j;
  if (r.u) out.u = j.adjoint() * *r.u * j;
  if (r.z) out.z = j.adjoint() * *r.z * j;
  if (r.x) out.x = j.adjoint() * *r.x * j;
  out.refresh(tol);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

ComplexMatrix realize(const Realization& r, const AlgebraElement& a) {
  const ComplexMatrix pa = r.rep.pi(a);
  switch (r.kind) {
    case RealizationKind::general:
      return r.q * pa * r.p;
    case RealizationKind::star:
      return r.p * (*r.u) * pa * r.p;
    case RealizationKind::system:
      return 0.5 * r.p * ((*r.z) * pa - pa * (*r.z)) * r.p;
    case RealizationKind::subalgebra: {
      const ComplexMatrix ix = kI * (*r.x);
      return 0.5 * (ix * pa - pa * ix);
    }
  }
  return {};
}

ComplexMatrix realize(const Realization& r, const AmplifiedElement& c) {
  const Eigen::Index n = r.dimension();
  const int level = c.level();
  ComplexMatrix out(level * n, level * n);
  for (int j = 0; j < level; ++j) {
    for (int k = 0; k < level; ++k) out.block(j * n, k * n, n, n) = realize(r, c.entry(j, k));
  }
  return out;
}

namespace {

// Norm of the level-n matrix with blocks left* π(C_jk) right.
double sandwich_norm(const RepresentationData& rep, const AmplifiedElement& c,
                     const ComplexMatrix& left, const ComplexMatrix& right) {
  const int level = c.level();
  const Eigen::Index rl = left.cols(), rr = right.cols();
  if (rl == 0 || rr == 0) return 0.0;
  ComplexMatrix m(level * rl, level * rr);
  for (int j = 0; j < level; ++j) {
    for (int k = 0; k < level; ++k) {
      m.block(j * rl, k * rr, rl, rr) = left.adjoint() * rep.act(c.entry(j, k), right);
    }
  }
  return spectral_norm(m);
}

// ‖(I − B̂B̂*) π_n(C) B̂‖ with B̂ repeated on each copy of H.
double leak_norm(const RepresentationData& rep, const AmplifiedElement& c,
                 const ComplexMatrix& basis) {
  if (basis.cols() == 0) return 0.0;
  const ComplexMatrix b = block_diagonal(basis, c.level());
  ComplexMatrix y = rep.act(c, b);
  y -= b * (b.adjoint() * y);
  return spectral_norm(y);
}

void require_u(const Realization& r, const char* what) {
  if (!r.u) throw ContractViolation(std::string(what) + ": realization has no U");
}

}  // namespace

double realized_norm(const Realization& r, const AmplifiedElement& c) {
  if (c.shape() != r.rep.shape()) throw ShapeMismatch("realized_norm: shape mismatch");
  switch (r.kind) {
    case RealizationKind::general:
      return sandwich_norm(r.rep, c, r.q_range, r.p_range);
    case RealizationKind::star:
      return sandwich_norm(r.rep, c, (*r.u) * r.p_range, r.p_range);
    case RealizationKind::system: {
      const int level = c.level();
      const ComplexMatrix& bp = r.p_range;
      const Eigen::Index k = bp.cols();
      if (k == 0) return 0.0;
      const ComplexMatrix zb = (*r.z) * bp;
      ComplexMatrix m(level * k, level * k);
      for (int j = 0; j < level; ++j) {
        for (int l = 0; l < level; ++l) {
          const AlgebraElement a = c.entry(j, l);
          // P Z π P − P π Z P with Z* = −Z
          m.block(j * k, l * k, k, k) =
              -0.5 * (zb.adjoint() * r.rep.act(a, bp) + bp.adjoint() * r.rep.act(a, zb));
        }
      }
      return spectral_norm(m);
    }
    case RealizationKind::subalgebra:
      // Θ = i[P̂, π] is off-diagonal with respect to P̂
      return std::max(leak_norm(r.rep, c, r.p_hat_range),
                      leak_norm(r.rep, c.adjoint(), r.p_hat_range));
  }
  return 0.0;
}

double realized_norm(const Realization& r, const AlgebraElement& a) {
  return realized_norm(r, AmplifiedElement::from_element(a));
}

double star_map_norm(const Realization& r, const AmplifiedElement& c) {
  require_u(r, "star_map_norm");
  return sandwich_norm(r.rep, c, (*r.u) * r.p_range, r.p_range);
}

double hat_map_norm(const Realization& r, const AmplifiedElement& c) {
  require_u(r, "hat_map_norm");
  if (!r.x) throw ContractViolation("hat_map_norm: realization has no X");
  return sandwich_norm(r.rep, c, (*r.u) * r.p_hat_range, r.p_hat_range);
}

double leibniz_seminorm(const Realization& r, const AlgebraElement& a) {
  if (r.kind != RealizationKind::subalgebra) {
    throw ContractViolation("leibniz_seminorm: needs a subalgebra realization");
  }
  return realized_norm(r, a);
}

LeibnizReport leibniz_sweep(const Realization& r, int pairs, std::uint64_t seed) {
  LeibnizReport out;
  const AlgebraShape& shape = r.rep.shape();
  std::mt19937_64 rng(seed);
  out.max_excess = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < pairs; ++k) {
    const bool herm = k % 2 == 1;
    const AlgebraElement a = AlgebraElement::random(shape, rng, herm);
    const AlgebraElement c = AlgebraElement::random(shape, rng, herm);
    const double lhs = leibniz_seminorm(r, multiply(a, c));
    const double rhs = leibniz_seminorm(r, a) * c.norm() + a.norm() * leibniz_seminorm(r, c);
    out.max_excess = std::max(out.max_excess, lhs - rhs);
    ++out.pairs;
  }
  if (pairs == 0) out.max_excess = 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Checks

void CheckList::add(std::string name, double value, double tolerance, bool binding) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.tolerance = tolerance;
  c.binding = binding;
  c.passed = !binding || value <= tolerance;
  checks.push_back(std::move(c));
}

bool CheckList::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

double CheckList::worst(const std::string& name) const {
  double out = -std::numeric_limits<double>::infinity();
  for (const auto& c : checks) {
    if (c.name == name) out = std::max(out, c.value);
  }
  return out;
}

namespace {

// Residuals use the Frobenius norm, an upper bound for the operator norm.
double fro(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

double projection_residual(const ComplexMatrix& p) {
  return std::max(fro(p * p - p), fro(p - p.adjoint()));
}

double commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return fro(a * b - b * a); }

}  // namespace

CheckList check_structure(const Realization& r, const Subspace& v, const ProbeSet& probes,
                          const StructureOptions& options, const Tolerances& tol) {
  if (v.shape() != r.rep.shape()) throw ShapeMismatch("check_structure: shape mismatch");
  CheckList out;
  const AlgebraShape& shape = v.shape();
  const auto basis = algebra_basis(shape);
  const Eigen::Index n = r.dimension();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);

  out.add("pi_homomorphism", homomorphism_residual(r.rep), 1e-12);
  out.add("P_projection", projection_residual(r.p), tol.structural);
  if (r.kind == RealizationKind::general) out.add("Q_projection", projection_residual(r.q), tol.structural);

  double killed = 0.0;
  for (const auto& d : v.basis()) {
    killed = std::max(killed, realized_norm(r, d) / std::max(1.0, d.norm()));
  }
  const double kill_tol =
      r.kind == RealizationKind::subalgebra ? tol.structural : tol.annihilation;
  out.add(r.kind == RealizationKind::subalgebra ? "theta_kills_B" : "kills_V", killed, kill_tol);

  std::mt19937_64 rng(options.seed);
  double excess = 0.0;
  for (int level = 1; level <= options.max_level; ++level) {
    for (int t = 0; t < options.contractivity_trials; ++t) {
      const AmplifiedElement c = AmplifiedElement::random(shape, level, rng);
      excess = std::max(excess, realized_norm(r, c) - cstar_norm(c));
    }
  }
  out.add("complete_contraction", excess, tol.structural);

  if (!r.u) return out;
  const ComplexMatrix& u = *r.u;
  out.add("U_hermitian", fro(u - u.adjoint()), tol.structural);
  out.add("U_unitary", fro(u * u - id), tol.structural);
  double comm = 0.0, star = 0.0;
  for (const auto& a : basis) {
    comm = std::max(comm, commutator(u, r.rep.pi(a)));
    const ComplexMatrix psi = r.p * u * r.rep.act(a, r.p);
    const ComplexMatrix psi_adj = r.p * u * r.rep.act(a.adjoint(), r.p);
    star = std::max(star, fro(psi_adj - psi.adjoint()));
  }
  out.add("U_commutes_pi", comm, tol.structural);
  out.add("star_map", star, tol.star_map);

  if (r.z) {
    const ComplexMatrix& z = *r.z;
    out.add("Z_skew", fro(z + z.adjoint()), tol.structural);
    out.add("Z_norm_excess", std::max(0.0, spectral_norm(z) - 1.0), tol.structural);
    out.add("PZ_intertwines", fro(r.p * z - z * (id - r.p)), tol.structural);
    out.add("PUP_vanishes", fro(r.p * u * r.p), tol.structural);
    double form = 0.0;
    for (const auto& a : basis) {
      const ComplexMatrix pa = r.rep.pi(a);
      const ComplexMatrix lhs = 0.5 * r.p * (z * pa - pa * z) * r.p;
      form = std::max(form, fro(lhs - r.p * u * pa * r.p));
    }
    out.add("commutator_form", form, tol.structural);
  }

  if (r.x) {
    const ComplexMatrix& x = *r.x;
    const ComplexMatrix p_hat = 0.5 * (x + id);
    out.add("X_hermitian", fro(x - x.adjoint()), tol.structural);
    out.add("X_unitary", fro(x * x - id), tol.structural);
    out.add("P_hat_dominates_P", fro(p_hat * r.p - r.p), tol.structural);
    double xb = 0.0;
    for (const auto& b : v.basis()) xb = std::max(xb, commutator(x, r.rep.pi(b)));
    out.add("X_commutes_B", xb, tol.structural);

    double theta_star = 0.0;
    for (const auto& a : basis) {
      theta_star = std::max(theta_star, fro(realize(r, a.adjoint()) - realize(r, a).adjoint()));
    }
    out.add("theta_star_map", theta_star, tol.star_map);

    double derivation = 0.0;
    for (int t = 0; t < options.derivation_pairs; ++t) {
      const AlgebraElement a = AlgebraElement::random(shape, rng);
      const AlgebraElement c = AlgebraElement::random(shape, rng);
      const ComplexMatrix lhs = realize(r, multiply(a, c));
      const ComplexMatrix rhs =
          realize(r, a) * r.rep.pi(c) + r.rep.pi(a) * realize(r, c);
      derivation = std::max(derivation, fro(lhs - rhs) / std::max(1.0, a.norm() * c.norm()));
    }
    out.add("derivation_identity", derivation, tol.structural);

    double hat_over_theta = 0.0, psi_over_hat = 0.0;
    for (const auto& probe : probes.probes()) {
      const double theta = realized_norm(r, probe.element);
      const double hat = hat_map_norm(r, probe.element);
      const double psi = star_map_norm(r, probe.element);
      hat_over_theta = std::max(hat_over_theta, hat - theta);
      psi_over_hat = std::max(psi_over_hat, psi - hat);
    }
    out.add("sandwich_theta_hat", hat_over_theta, tol.overshoot);
    out.add("sandwich_hat_psi", psi_over_hat, tol.overshoot);
    if (auto choi = cp_average_choi_min(r)) out.add("cp_average_choi", -*choi, tol.choi_psd);
  }
  return out;
}

namespace {

// Choi matrix on summand i of φ(a) = left* π(a) right, transported by the
// callback; entries (r·k + α, s·k + β) = φ(E_rs)(α, β).
template <typename Map>
ComplexMatrix choi_block(const AlgebraShape& shape, std::size_t i, Eigen::Index k, Map&& phi) {
  const int d = shape.block_dim(i);
  ComplexMatrix out(d * k, d * k);
  for (int r = 0; r < d; ++r) {
    for (int s = 0; s < d; ++s) {
      out.block(r * k, s * k, k, k) = phi(AlgebraElement::matrix_unit(shape, i, r, s));
    }
  }
  return out;
}

double min_eigenvalue(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  const HermitianEigen e = hermitian_eig(h, std::numeric_limits<double>::infinity());
  return e.values(e.values.size() - 1);
}

}  // namespace

JordanReport jordan_decomposition_check(const Realization& r, const Tolerances& tol) {
  require_u(r, "jordan_decomposition_check");
  const Eigen::Index n = r.dimension();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix& u = *r.u;
  const ComplexMatrix e = 0.5 * (id + u);
  const ComplexMatrix f = 0.5 * (id - u);
  JordanReport out;
  out.unit_split = fro(e + f - id);
  out.unitary_split = fro(u - (e - f));

  // both terms live on range P, so the Choi matrices are compressed there
  const ComplexMatrix& bp = r.p_range;
  const ComplexMatrix eb = e * bp;
  const ComplexMatrix fb = f * bp;
  const AlgebraShape& shape = r.rep.shape();
  out.choi_min_positive = 0.0;
  out.choi_min_negative = 0.0;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const auto pos = [&](const AlgebraElement& a) -> ComplexMatrix {
      return eb.adjoint() * r.rep.act(a, eb);
    };
    const auto neg = [&](const AlgebraElement& a) -> ComplexMatrix {
      return fb.adjoint() * r.rep.act(a, fb);
    };
    out.choi_min_positive =
        std::min(out.choi_min_positive, min_eigenvalue(choi_block(shape, i, bp.cols(), pos)));
    out.choi_min_negative =
        std::min(out.choi_min_negative, min_eigenvalue(choi_block(shape, i, bp.cols(), neg)));
  }

  out.reproduction = 0.0;
  for (const auto& a : algebra_basis(shape)) {
    const ComplexMatrix pa = r.rep.pi(a);
    const ComplexMatrix terms = r.p * e * pa * e * r.p - r.p * f * pa * f * r.p;
    out.reproduction = std::max(out.reproduction, fro(terms - r.p * u * pa * r.p));
  }
  out.passed = out.unit_split <= 1e-12 && out.unitary_split <= 1e-12 &&
               out.choi_min_positive >= -tol.choi_psd &&
               out.choi_min_negative >= -tol.choi_psd && out.reproduction <= tol.structural;
  return out;
}

std::optional<double> cp_average_choi_min(const Realization& r, Eigen::Index max_dim) {
  if (!r.x) throw ContractViolation("cp_average_choi_min: realization has no X");
  const Eigen::Index n = r.dimension();
  const AlgebraShape& shape = r.rep.shape();
  int widest = 0;
  for (int d : shape.block_dims()) widest = std::max(widest, d);
  if (4 * widest * n > max_dim) return std::nullopt;

  const ComplexMatrix& x = *r.x;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix v1 = ComplexMatrix::Zero(2 * n, 2 * n), v2 = v1;
  v1.topLeftCorner(n, n) = id;
  v1.bottomRightCorner(n, n) = x;
  v2.topLeftCorner(n, n) = -x;
  v2.bottomRightCorner(n, n) = id;

  double worst = 0.0;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const int d2 = 2 * shape.block_dim(i);
    ComplexMatrix choi(d2 * 2 * n, d2 * 2 * n);
    for (int a = 0; a < d2; ++a) {
      for (int b = 0; b < d2; ++b) {
        std::vector<ComplexMatrix> blocks;
        for (std::size_t l = 0; l < shape.num_blocks(); ++l) {
          const int dl = 2 * shape.block_dim(l);
          blocks.push_back(ComplexMatrix::Zero(dl, dl));
        }
        blocks[i](a, b) = 1.0;
        const ComplexMatrix pe = r.rep.pi(AmplifiedElement::from_blocks(shape, 2, blocks));
        choi.block(a * 2 * n, b * 2 * n, 2 * n, 2 * n) =
            0.5 * (v1 * pe * v1.adjoint() + v2 * pe * v2.adjoint());
      }
    }
    worst = std::min(worst, min_eigenvalue(choi));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Complete isometry

IsometryReport verify_complete_isometry(const Realization& r, const Subspace& v,
                                        const ProbeSet& probes, const IsometryOptions& options,
                                        const QuotientOptions& quotient) {
  if (v.shape() != r.rep.shape()) throw ShapeMismatch("verify_complete_isometry: shape mismatch");
  const Tolerances& tol = quotient.tol;
  const AlgebraShape& shape = v.shape();
  IsometryReport out;
  std::mt19937_64 rng(options.seed);
  int top = options.max_level;
  for (const auto& p : probes.probes()) top = std::max(top, p.element.level());
  for (const auto& e : options.extra) top = std::max(top, e.level());

  out.passed = true;
  for (int level = 1; level <= top; ++level) {
    LevelDeviation dev;
    dev.level = level;
    std::vector<const Probe*> here;
    for (const auto& p : probes.probes()) {
      if (p.element.level() != level) continue;
      if (!p.certified) throw ContractViolation("verify_complete_isometry: uncertified probe");
      here.push_back(&p);
      dev.probe_deviation = std::max(
          dev.probe_deviation, std::abs(realized_norm(r, p.element) - p.certified->value));
    }
    dev.probes = static_cast<int>(here.size());

    auto held_out = [&](const AmplifiedElement& c) {
      const double q = quotient_norm(c, v, quotient).value;
      const double real = realized_norm(r, c);
      dev.max_excess = std::max(dev.max_excess, real - q);
      dev.max_deficit = std::max(dev.max_deficit, q - real);
      out.slack.push_back({level, q, real});
      ++dev.held_out;
    };
    if (level <= options.max_level) {
      for (int t = 0; t < options.trials; ++t) held_out(AmplifiedElement::random(shape, level, rng));
    }
    for (const auto& e : options.extra) {
      if (e.level() == level) held_out(e);
    }

    if (!here.empty() && v.dim() > 0) {
      std::normal_distribution<double> normal(0.0, 1.0);
      const auto amplified = amplify_subspace(v, level);
      for (int s = 0; s < options.span_samples; ++s) {
        AmplifiedElement c = AmplifiedElement::zero(shape, level);
        for (const Probe* p : here) c += Complex(normal(rng), normal(rng)) * p->element;
        std::vector<Complex> coeffs;
        for (std::size_t k = 0; k < amplified.size(); ++k) coeffs.emplace_back(normal(rng), normal(rng));
        c += combine_amplified(v, level, coeffs);
        const double q = quotient_norm(c, v, quotient).value;
        dev.span_deviation = std::max(dev.span_deviation, std::abs(realized_norm(r, c) - q));
        ++dev.span_samples;
      }
    }
    if (dev.probe_deviation > tol.probe_exactness || dev.max_excess > tol.overshoot) {
      out.passed = false;
    }
    out.levels.push_back(dev);
  }
  return out;
}

}  // namespace quotrep

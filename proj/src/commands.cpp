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


#include "quotrep/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "quotrep/errors.hpp"

namespace quotrep {

namespace {

constexpr int kLeibnizPairs = 200;
constexpr int kSpanSamples = 2;

Json check_json(const Check& c) {
  return Json{{"name", c.name},
              {"value", c.value},
              {"tolerance", c.tolerance},
              {"binding", c.binding},
              {"passed", c.passed}};
}

Json checks_json(const CheckList& list) {
  Json out = Json::array();
  for (const auto& c : list.checks) out.push_back(check_json(c));
  return out;
}

Json config_json(const ProblemSpec& spec, const Subspace& v, const Tolerances& tol,
                 const ProbeOptions* probes) {
  Json cfg;
  cfg["seed"] = spec.seed;
  cfg["kind"] = to_string(spec.kind);
  cfg["algebra"] = Json{{"blocks", spec.shape.block_dims()}};
  cfg["subspace"] = Json{{"dim", v.dim()},
                         {"star_closed", v.flags().star_closed},
                         {"contains_unit", v.flags().contains_unit},
                         {"is_subalgebra", v.flags().is_subalgebra}};
  cfg["explicit_probes"] = spec.probes.size();
  if (probes) {
    cfg["auto_probes"] = Json{{"levels", probes->levels},
                              {"per_level", probes->random_per_level},
                              {"include_basis", probes->include_basis}};
  } else {
    cfg["auto_probes"] = nullptr;
  }
  cfg["evaluation"] = Json{{"held_out", spec.held_out},
                           {"max_level", spec.max_level},
                           {"extra", spec.extra.size()},
                           {"compress", spec.compress}};
  Json t;
  for (const auto& [name, value] : tol.as_map()) t[name] = value;
  cfg["tolerances"] = t;
  return cfg;
}

std::optional<ProbeOptions> auto_options(const ProblemSpec& spec) {
  std::optional<AutoProbes> ap = spec.auto_probes;
  // nothing requested at all: basis elements plus one random pair at level 1
  if (!ap && spec.probes.empty()) ap = AutoProbes{1, 1, true};
  if (!ap) return std::nullopt;
  ProbeOptions o;
  o.levels = ap->levels;
  o.random_per_level = ap->per_level;
  o.include_basis = ap->include_basis;
  o.seed = spec.seed;
  return o;
}

ProbeSet probe_set(const ProblemSpec& spec, const Subspace& v,
                   const std::optional<ProbeOptions>& options) {
  ProbeSet out;
  for (const auto& c : spec.probes) out.add(c);
  if (options) {
    const ProbeSet generated = ProbeSet::generate(v, *options);
    for (const auto& p : generated.probes()) out.add(p.element);
  }
  if (out.size() == 0) throw InputError("/probes: no probes to evaluate");
  return out;
}

QuotientOptions quotient_options(const ProblemSpec& spec) {
  QuotientOptions q;
  q.tol = spec.resolved_tolerances();
  q.seed = spec.seed;
  return q;
}

Json base_report(const char* command) {
  Json r;
  r["schema"] = kReportSchema;
  r["command"] = command;
  return r;
}

void finish(CommandResult& result, const CheckList& checks) {
  result.report["checks"] = checks_json(checks);
  const bool ok = checks.passed();
  result.report["status"] = ok ? "pass" : "fail";
  result.exit_code = ok ? kExitSuccess : kExitBindingFailure;
}

Json realization_summary(const Realization& r) {
  Json s;
  s["kind"] = to_string(r.kind);
  s["dimension"] = r.dimension();
  s["functionals"] = r.functionals;
  s["multiplicities"] = r.rep.multiplicities();
  s["rank_p"] = r.p_range.cols();
  s["rank_q"] = r.q_range.cols();
  if (r.x) s["rank_p_hat"] = r.p_hat_range.cols();
  return s;
}

// Everything verify reruns; realize reports the same sections.
void evaluate(const Realization& r, const Subspace& v, const ProbeSet& probes,
              const ProblemSpec& spec, const QuotientOptions& qopts, Json& report,
              CheckList& checks) {
  const Tolerances& tol = qopts.tol;
  Json probe_rows = Json::array();
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const Probe& p = probes.probes()[k];
    probe_rows.push_back(Json{{"index", k},
                              {"level", p.element.level()},
                              {"quotient", p.certified->value},
                              {"realized", realized_norm(r, p.element)}});
  }
  report["probes"] = probe_rows;

  StructureOptions so;
  so.seed = spec.seed;
  const CheckList structure = check_structure(r, v, probes, so, tol);
  checks.checks.insert(checks.checks.end(), structure.checks.begin(), structure.checks.end());

  IsometryOptions io;
  io.max_level = spec.max_level;
  io.trials = spec.held_out;
  io.span_samples = kSpanSamples;
  io.seed = spec.seed;
  io.extra = spec.extra;
  const IsometryReport iso = verify_complete_isometry(r, v, probes, io, qopts);
  Json levels = Json::array();
  for (const auto& l : iso.levels) {
    const std::string tag = "level" + std::to_string(l.level) + ".";
    if (l.probes > 0) checks.add(tag + "probe_exactness", l.probe_deviation, tol.probe_exactness);
    if (l.held_out > 0) checks.add(tag + "overshoot", l.max_excess, tol.overshoot);
    if (l.span_samples > 0) {
      checks.add(tag + "span_deviation", l.span_deviation, tol.probe_exactness, false);
    }
    levels.push_back(Json{{"level", l.level},
                          {"probes", l.probes},
                          {"probe_deviation", l.probe_deviation},
                          {"held_out", l.held_out},
                          {"max_excess", l.max_excess},
                          {"max_deficit", l.max_deficit},
                          {"span_samples", l.span_samples},
                          {"span_deviation", l.span_deviation}});
  }
  report["isometry"] = levels;
  Json slack = Json::array();
  for (const auto& s : iso.slack) {
    slack.push_back(Json{{"level", s.level},
                         {"quotient", s.quotient},
                         {"realized", s.realized},
                         {"slack", s.quotient - s.realized}});
  }
  report["slack"] = slack;

  if (r.u) {
    const JordanReport j = jordan_decomposition_check(r, tol);
    checks.add("jordan.unit_split", j.unit_split, tol.star_map);
    checks.add("jordan.unitary_split", j.unitary_split, tol.star_map);
    checks.add("jordan.choi_positive", std::max(0.0, -j.choi_min_positive), tol.choi_psd);
    checks.add("jordan.choi_negative", std::max(0.0, -j.choi_min_negative), tol.choi_psd);
    checks.add("jordan.reproduction", j.reproduction, tol.structural);
    report["jordan"] = Json{{"choi_min_positive", j.choi_min_positive},
                            {"choi_min_negative", j.choi_min_negative}};
  }
  if (r.kind == RealizationKind::subalgebra) {
    const LeibnizReport l = leibniz_sweep(r, kLeibnizPairs, spec.seed);
    checks.add("leibniz", std::max(0.0, l.max_excess), tol.leibniz);
    report["leibniz"] = Json{{"pairs", l.pairs}, {"max_excess", l.max_excess}};
  }
}

Realization build(const Subspace& v, const ProbeSet& probes, const ProblemSpec& spec,
                  const QuotientOptions& qopts) {
  RealizationOptions ro;
  ro.quotient = qopts;
  ro.compress = spec.compress;
  switch (spec.kind) {
    case RealizationKind::general: return build_general(v, probes, ro);
    case RealizationKind::star: return build_star(v, probes, ro);
    case RealizationKind::system: return build_system(v, probes, ro);
    case RealizationKind::subalgebra: return build_subalgebra(v, probes, ro);
  }
  throw ContractViolation("unknown realization kind");
}

}  // namespace

ProblemSpec apply_overrides(ProblemSpec spec, const CommandOptions& options) {
  if (options.seed) spec.seed = *options.seed;
  for (const auto& [name, value] : options.tolerances) spec.tolerances[name] = value;
  spec.resolved_tolerances();
  if (options.levels || options.probes) {
    AutoProbes ap = spec.auto_probes.value_or(AutoProbes{});
    if (options.levels) {
      if (*options.levels < 1) throw InputError("--levels: must be at least 1");
      ap.levels = *options.levels;
    }
    if (options.probes) {
      if (*options.probes < 0) throw InputError("--probes: must be non-negative");
      ap.per_level = *options.probes;
    }
    spec.auto_probes = ap;
  }
  return spec;
}

CommandResult cmd_quotient(const ProblemSpec& spec) {
  const Subspace v = spec.subspace();
  const QuotientOptions qopts = quotient_options(spec);
  const Tolerances& tol = qopts.tol;
  const auto popts = auto_options(spec);
  const ProbeSet probes = probe_set(spec, v, popts);

  CommandResult result;
  result.report = base_report("quotient");
  result.report["config"] = config_json(spec, v, tol, popts ? &*popts : nullptr);
  CheckList checks;
  Json rows = Json::array();
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const AmplifiedElement& c = probes.probes()[k].element;
    const CertifiedNorm cert = quotient_norm(c, v, qopts);
    const CertificateCheck cc = check_certificate(c, v, cert, tol);
    const std::string tag = "probe" + std::to_string(k) + ".";
    checks.add(tag + "duality_gap", cert.duality_gap, tol.attainment);
    checks.add(tag + "value_residual", cc.value_residual, tol.attainment);
    if (cert.certificate) {
      checks.add(tag + "certificate_norm", cc.norm_residual, tol.certificate_norm);
      checks.add(tag + "annihilation", cc.annihilation, tol.annihilation);
      checks.add(tag + "attainment", cc.attainment_shortfall, tol.attainment);
    }
    Json row{{"index", k},
             {"level", c.level()},
             {"value", cert.value},
             {"dual_value", cert.dual_value},
             {"duality_gap", cert.duality_gap},
             {"iterations", cert.iterations}};
    if (cert.certificate) {
      Json blocks = Json::array();
      for (const auto& t : cert.certificate->blocks()) blocks.push_back(to_json(t));
      row["certificate"] = blocks;
    } else {
      row["certificate"] = nullptr;
    }

    const std::size_t params = 2 * static_cast<std::size_t>(c.level() * c.level()) * v.dim();
    if (params <= 40) {
      OracleBudget budget;
      budget.seed = spec.seed + k;
      const OracleResult o = oracle_quotient_norm(c, v, budget);
      const double rel = std::abs(o.value - cert.value) / std::max(1.0, cert.value);
      checks.add(tag + "oracle_agreement", rel, tol.oracle_agreement, o.converged);
      row["oracle"] = Json{{"value", o.value},
                           {"converged", o.converged},
                           {"relative_difference", rel}};
    } else {
      row["oracle"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  result.report["probes"] = rows;
  finish(result, checks);
  return result;
}

CommandResult cmd_realize(const ProblemSpec& spec) {
  const Subspace v = spec.subspace();
  const QuotientOptions qopts = quotient_options(spec);
  const auto popts = auto_options(spec);
  ProbeSet probes = probe_set(spec, v, popts);
  probes.certify(v, qopts);
  const Realization r = build(v, probes, spec, qopts);

  CommandResult result;
  result.report = base_report("realize");
  result.report["config"] = config_json(spec, v, qopts.tol, popts ? &*popts : nullptr);
  result.report["realization"] = realization_summary(r);
  CheckList checks;
  evaluate(r, v, probes, spec, qopts, result.report, checks);
  finish(result, checks);

  std::vector<AmplifiedElement> elements;
  for (const auto& p : probes.probes()) elements.push_back(p.element);
  result.realization = realization_to_json(r, elements);
  return result;
}

CommandResult cmd_verify(const ProblemSpec& spec, const Json& realization) {
  const Subspace v = spec.subspace();
  const QuotientOptions qopts = quotient_options(spec);
  std::vector<AmplifiedElement> elements;
  const Realization r = realization_from_json(realization, elements, qopts.tol);
  if (r.rep.shape() != spec.shape) {
    throw ShapeMismatch("realization algebra shape does not match the problem");
  }
  if (r.kind != spec.kind) {
    throw InputError("realization kind '" + to_string(r.kind) + "' does not match spec kind '" +
                     to_string(spec.kind) + "'");
  }
  ProbeSet probes;
  for (auto& e : elements) probes.add(std::move(e));
  probes.certify(v, qopts);

  CommandResult result;
  result.report = base_report("verify");
  result.report["config"] = config_json(spec, v, qopts.tol, nullptr);
  result.report["realization"] = realization_summary(r);
  CheckList checks;
  evaluate(r, v, probes, spec, qopts, result.report, checks);
  finish(result, checks);
  return result;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

int run_command(const std::string& name, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    if (options.spec_path.empty()) throw InputError("--spec is required");
    const ProblemSpec spec = apply_overrides(load_problem(options.spec_path), options);
    CommandResult result;
    if (name == "quotient") {
      result = cmd_quotient(spec);
    } else if (name == "realize") {
      result = cmd_realize(spec);
    } else if (name == "verify") {
      if (options.realization_path.empty()) throw InputError("verify: --realization is required");
      const Json doc = parse_json(read_file(options.realization_path), options.realization_path);
      try {
        result = cmd_verify(spec, doc);
      } catch (const InputError& e) {
        throw InputError(options.realization_path + ": " + e.what());
      }
    } else {
      throw InputError("unknown command '" + name + "'");
    }
    if (!options.save_realization.empty()) {
      if (!result.realization) throw InputError("--save-realization applies to realize only");
      write_file(options.save_realization, dump_report(*result.realization));
    }
    const std::string text = dump_report(result.report);
    if (options.out_path.empty()) {
      out << text;
    } else {
      write_file(options.out_path, text);
    }
    if (result.exit_code != kExitSuccess) {
      err << name << ": binding check failed\n";
      for (const auto& c : result.report["checks"]) {
        if (!c["passed"].get<bool>()) {
          err << "  " << c["name"].get<std::string>() << " = " << c["value"].get<double>()
              << " > " << c["tolerance"].get<double>() << "\n";
        }
      }
    }
    return result.exit_code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (gap " << e.gap() << ")\n";
    return kExitNonConvergence;
  } catch (const NumericalFault& e) {
    err << "error: " << e.what() << "\n";
    return kExitBindingFailure;
  }
}

}  // namespace quotrep

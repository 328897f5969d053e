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


#include "quotrep/io.hpp"

#include <fstream>
#include <sstream>

#include "quotrep/errors.hpp"

namespace quotrep {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError((where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

template <typename T>
T number(const Json& j, const std::string& where) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) fail(where, "expected true or false");
    return j.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    if (std::is_unsigned_v<T> && j.get<long long>() < 0) fail(where, "expected a non-negative integer");
    return j.get<T>();
  } else {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<T>();
  }
}

template <typename T>
T optional_number(const Json& j, const char* key, T fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return number<T>(*it, where + "/" + key);
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(where, "unknown key '" + it.key() + "'");
  }
}

std::string at(const std::string& where, std::size_t k) { return where + "/" + std::to_string(k); }

}  // namespace

Tolerances ProblemSpec::resolved_tolerances() const {
  Tolerances tol;
  for (const auto& [name, value] : tolerances) {
    try {
      tol.set(name, value);
    } catch (const ContractViolation&) {
      throw InputError("/tolerances: unknown tolerance '" + name + "'");
    }
  }
  return tol;
}

Subspace ProblemSpec::subspace() const {
  const Tolerances tol = resolved_tolerances();
  const SubspaceFlags flags = Subspace::detect_flags(shape, basis, tol.membership);
  auto require = [&](bool holds, const char* what) {
    if (!holds) {
      throw InputError("/subspace/kind: '" + to_string(kind) + "' requires " + what +
                       ", which the basis does not satisfy");
    }
  };
  switch (kind) {
    case RealizationKind::general:
      break;
    case RealizationKind::star:
      require(flags.star_closed, "a self-adjoint subspace");
      break;
    case RealizationKind::system:
      require(flags.contains_unit, "the unit in the subspace");
      require(flags.star_closed, "a self-adjoint subspace");
      break;
    case RealizationKind::subalgebra:
      require(flags.is_subalgebra, "a unital *-subalgebra");
      break;
  }
  return Subspace(shape, basis, flags, tol.membership);
}

// adding 0.0 turns -0.0 into 0.0
Json to_json(Complex z) { return Json::array({z.real() + 0.0, z.imag() + 0.0}); }

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const AlgebraElement& a) {
  Json blocks = Json::array();
  for (const auto& b : a.blocks()) blocks.push_back(to_json(b));
  return Json{{"blocks", blocks}};
}

Json to_json(const AmplifiedElement& c) {
  Json rows = Json::array();
  for (int j = 0; j < c.level(); ++j) {
    Json row = Json::array();
    for (int k = 0; k < c.level(); ++k) row.push_back(to_json(c.entry(j, k)));
    rows.push_back(std::move(row));
  }
  return Json{{"level", c.level()}, {"entries", rows}};
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail(where, "expected a number or an [re, im] pair");
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) fail(at(where, 0), "expected a row");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string wr = at(where, r);
    if (!j[r].is_array() || j[r].size() != cols) {
      fail(wr, "expected a row of " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(j[r][c], at(wr, c));
    }
  }
  return m;
}

AlgebraElement element_from_json(const AlgebraShape& shape, const Json& j,
                                 const std::string& where) {
  std::string wb = where;
  const Json* blocks = &j;
  if (j.is_object()) {
    reject_unknown(j, {"blocks"}, where);
    blocks = &member(j, "blocks", where);
    wb += "/blocks";
  }
  if (!blocks->is_array() || blocks->size() != shape.num_blocks()) {
    fail(wb, "expected " + std::to_string(shape.num_blocks()) + " blocks");
  }
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    ComplexMatrix m = matrix_from_json((*blocks)[i], at(wb, i));
    const int d = shape.block_dim(i);
    if (m.rows() != d || m.cols() != d) {
      fail(at(wb, i), "expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
    }
    out.push_back(std::move(m));
  }
  return AlgebraElement(shape, std::move(out));
}

AmplifiedElement amplified_from_json(const AlgebraShape& shape, const Json& j,
                                     const std::string& where) {
  if (!j.is_object() || !j.contains("entries")) {
    return AmplifiedElement::from_element(element_from_json(shape, j, where));
  }
  reject_unknown(j, {"level", "entries"}, where);
  const Json& entries = j["entries"];
  const std::string we = where + "/entries";
  if (!entries.is_array() || entries.empty()) fail(we, "expected an n x n array of elements");
  const int n = static_cast<int>(entries.size());
  if (j.contains("level") && number<int>(j["level"], where + "/level") != n) {
    fail(where + "/level", "does not match the size of 'entries'");
  }
  std::vector<AlgebraElement> flat;
  for (int r = 0; r < n; ++r) {
    const Json& row = entries[static_cast<std::size_t>(r)];
    const std::string wr = at(we, static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      fail(wr, "expected a row of " + std::to_string(n) + " elements");
    }
    for (int c = 0; c < n; ++c) {
      flat.push_back(element_from_json(shape, row[static_cast<std::size_t>(c)],
                                       at(wr, static_cast<std::size_t>(c))));
    }
  }
  return AmplifiedElement(n, flat);
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // byte offset only; translate to line and column
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto colon = what.find("syntax error");
    if (colon != std::string::npos) what = what.substr(colon);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": " + what);
  }
}

ProblemSpec problem_from_json(const Json& j) {
  if (!j.is_object()) fail("", "expected an object");
  reject_unknown(j, {"schema", "algebra", "subspace", "probes", "seed", "tolerances", "evaluation"},
                 "");
  const Json& schema = member(j, "schema", "");
  if (!schema.is_string() || schema.get<std::string>() != kProblemSchema) {
    fail("/schema", std::string("expected \"") + kProblemSchema + "\"");
  }
  ProblemSpec spec;

  const Json& algebra = member(j, "algebra", "");
  reject_unknown(algebra, {"blocks"}, "/algebra");
  const Json& dims = member(algebra, "blocks", "/algebra");
  if (!dims.is_array() || dims.empty()) fail("/algebra/blocks", "expected a list of block sizes");
  std::vector<int> d;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int di = number<int>(dims[i], at("/algebra/blocks", i));
    if (di < 1) fail(at("/algebra/blocks", i), "block sizes must be positive");
    d.push_back(di);
  }
  spec.shape = AlgebraShape(d);

  const Json& sub = member(j, "subspace", "");
  reject_unknown(sub, {"kind", "basis"}, "/subspace");
  const Json& kind = member(sub, "kind", "/subspace");
  if (!kind.is_string()) fail("/subspace/kind", "expected a string");
  try {
    spec.kind = realization_kind_from_string(kind.get<std::string>());
  } catch (const ContractViolation&) {
    fail("/subspace/kind", "expected general, star, system or subalgebra");
  }
  const Json& basis = member(sub, "basis", "/subspace");
  if (!basis.is_array()) fail("/subspace/basis", "expected a list of elements");
  for (std::size_t k = 0; k < basis.size(); ++k) {
    spec.basis.push_back(element_from_json(spec.shape, basis[k], at("/subspace/basis", k)));
  }

  if (auto it = j.find("probes"); it != j.end()) {
    const Json& probes = *it;
    reject_unknown(probes, {"elements", "auto"}, "/probes");
    if (auto e = probes.find("elements"); e != probes.end()) {
      if (!e->is_array()) fail("/probes/elements", "expected a list");
      for (std::size_t k = 0; k < e->size(); ++k) {
        spec.probes.push_back(amplified_from_json(spec.shape, (*e)[k], at("/probes/elements", k)));
      }
    }
    if (auto a = probes.find("auto"); a != probes.end()) {
      reject_unknown(*a, {"levels", "per_level", "include_basis"}, "/probes/auto");
      AutoProbes ap;
      ap.levels = optional_number<int>(*a, "levels", ap.levels, "/probes/auto");
      ap.per_level = optional_number<int>(*a, "per_level", ap.per_level, "/probes/auto");
      ap.include_basis =
          optional_number<bool>(*a, "include_basis", ap.include_basis, "/probes/auto");
      if (ap.levels < 1) fail("/probes/auto/levels", "must be at least 1");
      if (ap.per_level < 0) fail("/probes/auto/per_level", "must be non-negative");
      spec.auto_probes = ap;
    }
  }

  spec.seed = optional_number<std::uint64_t>(j, "seed", 0, "");

  if (auto it = j.find("tolerances"); it != j.end()) {
    if (!it->is_object()) fail("/tolerances", "expected an object");
    for (auto t = it->begin(); t != it->end(); ++t) {
      spec.tolerances[t.key()] = number<double>(t.value(), "/tolerances/" + t.key());
    }
    spec.resolved_tolerances();
  }

  if (auto it = j.find("evaluation"); it != j.end()) {
    const Json& ev = *it;
    reject_unknown(ev, {"held_out", "max_level", "extra", "compress"}, "/evaluation");
    spec.held_out = optional_number<int>(ev, "held_out", spec.held_out, "/evaluation");
    spec.max_level = optional_number<int>(ev, "max_level", spec.max_level, "/evaluation");
    spec.compress = optional_number<bool>(ev, "compress", spec.compress, "/evaluation");
    if (spec.held_out < 0) fail("/evaluation/held_out", "must be non-negative");
    if (spec.max_level < 1) fail("/evaluation/max_level", "must be at least 1");
    if (auto e = ev.find("extra"); e != ev.end()) {
      if (!e->is_array()) fail("/evaluation/extra", "expected a list");
      for (std::size_t k = 0; k < e->size(); ++k) {
        spec.extra.push_back(amplified_from_json(spec.shape, (*e)[k], at("/evaluation/extra", k)));
      }
    }
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  const Json j = parse_json(read_file(path), path);
  try {
    return problem_from_json(j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Json realization_to_json(const Realization& r, const std::vector<AmplifiedElement>& probes) {
  Json out;
  out["schema"] = kRealizationSchema;
  out["kind"] = to_string(r.kind);
  out["algebra"] = Json{{"blocks", r.rep.shape().block_dims()}};
  out["multiplicities"] = r.rep.multiplicities();
  out["functionals"] = r.functionals;
  out["p"] = to_json(r.p);
  out["q"] = to_json(r.q);
  if (r.u) out["u"] = to_json(*r.u);
  if (r.z) out["z"] = to_json(*r.z);
  if (r.x) out["x"] = to_json(*r.x);
  Json ps = Json::array();
  for (const auto& p : probes) ps.push_back(to_json(p));
  out["probes"] = ps;
  return out;
}

Realization realization_from_json(const Json& j, std::vector<AmplifiedElement>& probes,
                                  const Tolerances& tol) {
  if (!j.is_object()) fail("", "expected an object");
  reject_unknown(j, {"schema", "kind", "algebra", "multiplicities", "functionals", "p", "q", "u",
                     "z", "x", "probes"},
                 "");
  const Json& schema = member(j, "schema", "");
  if (!schema.is_string() || schema.get<std::string>() != kRealizationSchema) {
    fail("/schema", std::string("expected \"") + kRealizationSchema + "\"");
  }
  Realization r;
  try {
    r.kind = realization_kind_from_string(member(j, "kind", "").get<std::string>());
  } catch (const std::exception&) {
    fail("/kind", "expected general, star, system or subalgebra");
  }
  const Json& dims = member(member(j, "algebra", ""), "blocks", "/algebra");
  const Json& mult = member(j, "multiplicities", "");
  if (!dims.is_array() || !mult.is_array() || dims.size() != mult.size() || dims.empty()) {
    fail("/multiplicities", "expected one multiplicity per algebra block");
  }
  std::vector<int> d, m;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    d.push_back(number<int>(dims[i], at("/algebra/blocks", i)));
    m.push_back(number<int>(mult[i], at("/multiplicities", i)));
    if (d.back() < 1 || m.back() < 0) fail(at("/multiplicities", i), "invalid block");
  }
  const AlgebraShape shape(d);
  r.rep = RepresentationData(shape, m);
  r.functionals = number<int>(member(j, "functionals", ""), "/functionals");
  const Eigen::Index dim = r.rep.dimension();
  auto square = [&](const char* key) {
    const std::string w = std::string("/") + key;
    ComplexMatrix out = matrix_from_json(member(j, key, ""), w);
    if (out.rows() != dim || out.cols() != dim) {
      fail(w, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
    }
    return out;
  };
  r.p = square("p");
  r.q = square("q");
  if (j.contains("u")) r.u = square("u");
  if (j.contains("z")) r.z = square("z");
  if (j.contains("x")) r.x = square("x");
  const bool needs_u = r.kind != RealizationKind::general;
  if (needs_u && !r.u) fail("", "missing key 'u'");
  if (r.kind == RealizationKind::system && !r.z) fail("", "missing key 'z'");
  if (r.kind == RealizationKind::subalgebra && !r.x) fail("", "missing key 'x'");

  probes.clear();
  const Json& ps = member(j, "probes", "");
  if (!ps.is_array()) fail("/probes", "expected a list");
  for (std::size_t k = 0; k < ps.size(); ++k) {
    probes.push_back(amplified_from_json(shape, ps[k], at("/probes", k)));
  }
  r.refresh(tol);
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot write file");
  out << text;
  if (!out) throw InputError(path + ": write failed");
}

}  // namespace quotrep

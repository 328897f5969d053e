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


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "quotrep/commands.hpp"
#include "quotrep/errors.hpp"
#include "quotrep/quotient.hpp"
#include "quotrep/realization.hpp"

namespace py = pybind11;
using namespace quotrep;

namespace {

Tolerances tolerances_from(const std::map<std::string, double>& overrides) {
  Tolerances tol;
  for (const auto& [name, value] : overrides) tol.set(name, value);
  return tol;
}

QuotientOptions quotient_options(const std::map<std::string, double>& tol, std::uint64_t seed) {
  QuotientOptions o;
  o.tol = tolerances_from(tol);
  o.seed = seed;
  return o;
}

py::tuple run(const std::string& command, const std::string& spec, const std::string& realization,
              const std::string& save_realization, std::optional<std::uint64_t> seed,
              const std::map<std::string, double>& tol, std::optional<int> levels,
              std::optional<int> probes) {
  CommandOptions o;
  o.spec_path = spec;
  o.realization_path = realization;
  o.save_realization = save_realization;
  o.seed = seed;
  for (const auto& kv : tol) o.tolerances.push_back(kv);
  o.levels = levels;
  o.probes = probes;
  std::ostringstream out, err;
  int code = 0;
  {
    py::gil_scoped_release release;
    code = run_command(command, o, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_quotrep, m) {
  m.doc() = "Quotient norms and concrete realizations of quotient operator spaces";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<NumericalFault>(m, "NumericalFault", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<AlgebraShape>(m, "AlgebraShape")
      .def(py::init<std::vector<int>>(), py::arg("block_dims"))
      .def_property_readonly("block_dims", &AlgebraShape::block_dims)
      .def_property_readonly("dimension", &AlgebraShape::dimension)
      .def("__eq__", [](const AlgebraShape& a, const AlgebraShape& b) { return a == b; })
      .def("__repr__", [](const AlgebraShape& s) {
        std::string out = "AlgebraShape([";
        for (std::size_t i = 0; i < s.num_blocks(); ++i) {
          if (i) out += ", ";
          out += std::to_string(s.block_dim(i));
        }
        return out + "])";
      });

  py::class_<AlgebraElement>(m, "AlgebraElement")
      .def(py::init<AlgebraShape, std::vector<ComplexMatrix>>(), py::arg("shape"),
           py::arg("blocks"))
      .def_static("unit", &AlgebraElement::unit)
      .def_static("zero", &AlgebraElement::zero)
      .def_static("matrix_unit", &AlgebraElement::matrix_unit, py::arg("shape"),
                  py::arg("block"), py::arg("row"), py::arg("col"))
      .def_static(
          "random",
          [](const AlgebraShape& s, std::uint64_t seed, bool hermitian) {
            std::mt19937_64 rng(seed);
            return AlgebraElement::random(s, rng, hermitian);
          },
          py::arg("shape"), py::arg("seed") = 0, py::arg("hermitian") = false)
      .def_property_readonly("shape", &AlgebraElement::shape)
      .def_property_readonly("blocks", &AlgebraElement::blocks)
      .def("adjoint", &AlgebraElement::adjoint)
      .def("norm", &AlgebraElement::norm)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def("__mul__", [](const AlgebraElement& a, const AlgebraElement& b) { return multiply(a, b); })
      .def("__mul__", [](const AlgebraElement& a, Complex s) { return s * a; })
      .def("__rmul__", [](const AlgebraElement& a, Complex s) { return s * a; });

  py::class_<AmplifiedElement>(m, "AmplifiedElement")
      .def(py::init([](const std::vector<std::vector<AlgebraElement>>& rows) {
             const int n = static_cast<int>(rows.size());
             std::vector<AlgebraElement> flat;
             for (const auto& row : rows) {
               if (static_cast<int>(row.size()) != n) {
                 throw ContractViolation("AmplifiedElement: entries must form a square array");
               }
               flat.insert(flat.end(), row.begin(), row.end());
             }
             return AmplifiedElement(n, flat);
           }),
           py::arg("entries"))
      .def(py::init(&AmplifiedElement::from_element), py::arg("element"))
      .def_static("from_blocks", &AmplifiedElement::from_blocks, py::arg("shape"),
                  py::arg("level"), py::arg("blocks"))
      .def_static(
          "random",
          [](const AlgebraShape& s, int level, std::uint64_t seed, bool hermitian) {
            std::mt19937_64 rng(seed);
            return AmplifiedElement::random(s, level, rng, hermitian);
          },
          py::arg("shape"), py::arg("level"), py::arg("seed") = 0, py::arg("hermitian") = false)
      .def_property_readonly("level", &AmplifiedElement::level)
      .def_property_readonly("shape", &AmplifiedElement::shape)
      .def_property_readonly("blocks", &AmplifiedElement::blocks)
      .def("entry", &AmplifiedElement::entry)
      .def("adjoint", &AmplifiedElement::adjoint)
      .def("norm", [](const AmplifiedElement& c) { return cstar_norm(c); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def("__rmul__", [](const AmplifiedElement& c, Complex s) { return s * c; });

  py::class_<SubspaceFlags>(m, "SubspaceFlags")
      .def_readonly("star_closed", &SubspaceFlags::star_closed)
      .def_readonly("contains_unit", &SubspaceFlags::contains_unit)
      .def_readonly("is_subalgebra", &SubspaceFlags::is_subalgebra);

  py::class_<Subspace>(m, "Subspace")
      .def(py::init([](const AlgebraShape& s, const std::vector<AlgebraElement>& basis) {
             return Subspace(s, basis, Subspace::detect_flags(s, basis));
           }),
           py::arg("shape"), py::arg("basis"))
      .def_property_readonly("shape", &Subspace::shape)
      .def_property_readonly("basis", &Subspace::basis)
      .def_property_readonly("dim", &Subspace::dim)
      .def_property_readonly("flags", &Subspace::flags)
      .def("contains", &Subspace::contains);

  py::class_<Functional>(m, "Functional")
      .def_property_readonly("level", &Functional::level)
      .def_property_readonly("blocks", &Functional::blocks)
      .def("norm", &Functional::norm)
      .def("annihilation_residual", &Functional::annihilation_residual)
      .def("__call__", &Functional::operator());

  py::class_<CertifiedNorm>(m, "CertifiedNorm")
      .def_readonly("value", &CertifiedNorm::value)
      .def_readonly("minimizer", &CertifiedNorm::minimizer)
      .def_readonly("minimizer_element", &CertifiedNorm::minimizer_element)
      .def_readonly("certificate", &CertifiedNorm::certificate)
      .def_readonly("dual_value", &CertifiedNorm::dual_value)
      .def_readonly("duality_gap", &CertifiedNorm::duality_gap)
      .def_readonly("iterations", &CertifiedNorm::iterations);

  m.def(
      "quotient_norm",
      [](const AmplifiedElement& c, const Subspace& v, const std::map<std::string, double>& tol,
         std::uint64_t seed) {
        py::gil_scoped_release release;
        return quotient_norm(c, v, quotient_options(tol, seed));
      },
      py::arg("c"), py::arg("v"), py::arg("tol") = std::map<std::string, double>{},
      py::arg("seed") = 0);

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("value", &OracleResult::value)
      .def_readonly("converged", &OracleResult::converged)
      .def_readonly("evaluations", &OracleResult::evaluations);

  m.def(
      "oracle_quotient_norm",
      [](const AmplifiedElement& c, const Subspace& v, std::uint64_t seed, int max_evaluations) {
        OracleBudget b;
        b.seed = seed;
        b.max_evaluations = max_evaluations;
        py::gil_scoped_release release;
        return oracle_quotient_norm(c, v, b);
      },
      py::arg("c"), py::arg("v"), py::arg("seed") = 0, py::arg("max_evaluations") = 400000);

  py::class_<ProbeSet>(m, "ProbeSet")
      .def(py::init<>())
      .def_static(
          "generate",
          [](const Subspace& v, int levels, int per_level, bool include_basis, std::uint64_t seed) {
            return ProbeSet::generate(v, {levels, per_level, include_basis, seed});
          },
          py::arg("v"), py::arg("levels") = 2, py::arg("per_level") = 2,
          py::arg("include_basis") = true, py::arg("seed") = 0)
      .def("add", &ProbeSet::add)
      .def("symmetrize", &ProbeSet::symmetrize)
      .def(
          "certify",
          [](ProbeSet& p, const Subspace& v, const std::map<std::string, double>& tol) {
            py::gil_scoped_release release;
            p.certify(v, quotient_options(tol, 0));
          },
          py::arg("v"), py::arg("tol") = std::map<std::string, double>{})
      .def_property_readonly("certified", &ProbeSet::certified)
      .def("__len__", &ProbeSet::size)
      .def_property_readonly("elements", [](const ProbeSet& p) {
        std::vector<AmplifiedElement> out;
        for (const auto& probe : p.probes()) out.push_back(probe.element);
        return out;
      })
      .def_property_readonly("values", [](const ProbeSet& p) {
        std::vector<std::optional<double>> out;
        for (const auto& probe : p.probes()) {
          out.push_back(probe.certified ? std::optional<double>(probe.certified->value)
                                        : std::nullopt);
        }
        return out;
      });

  py::class_<Realization>(m, "Realization")
      .def_property_readonly("kind", [](const Realization& r) { return to_string(r.kind); })
      .def_property_readonly("dimension", &Realization::dimension)
      .def_readonly("functionals", &Realization::functionals)
      .def_readonly("p", &Realization::p)
      .def_readonly("q", &Realization::q)
      .def_readonly("u", &Realization::u)
      .def_readonly("z", &Realization::z)
      .def_readonly("x", &Realization::x)
      .def("realize",
           [](const Realization& r, const AmplifiedElement& c) { return realize(r, c); })
      .def("realize", [](const Realization& r, const AlgebraElement& a) { return realize(r, a); })
      .def("norm",
           [](const Realization& r, const AmplifiedElement& c) { return realized_norm(r, c); })
      .def("norm", [](const Realization& r, const AlgebraElement& a) { return realized_norm(r, a); })
      .def("star_map_norm", &star_map_norm)
      .def("hat_map_norm", &hat_map_norm)
      .def("leibniz_seminorm", &leibniz_seminorm);

  m.def(
      "build_realization",
      [](const std::string& kind, const Subspace& v, const ProbeSet& probes, bool compress,
         const std::map<std::string, double>& tol) {
        RealizationOptions o;
        o.quotient = quotient_options(tol, 0);
        o.compress = compress;
        py::gil_scoped_release release;
        switch (realization_kind_from_string(kind)) {
          case RealizationKind::general: return build_general(v, probes, o);
          case RealizationKind::star: return build_star(v, probes, o);
          case RealizationKind::system: return build_system(v, probes, o);
          case RealizationKind::subalgebra: break;
        }
        return build_subalgebra(v, probes, o);
      },
      py::arg("kind"), py::arg("v"), py::arg("probes"), py::arg("compress") = false,
      py::arg("tol") = std::map<std::string, double>{});

  py::class_<Check>(m, "Check")
      .def_readonly("name", &Check::name)
      .def_readonly("value", &Check::value)
      .def_readonly("tolerance", &Check::tolerance)
      .def_readonly("binding", &Check::binding)
      .def_readonly("passed", &Check::passed)
      .def("__repr__", [](const Check& c) {
        return "Check(" + c.name + ", " + std::to_string(c.value) + (c.passed ? ", ok)" : ", FAILED)");
      });

  m.def(
      "check_structure",
      [](const Realization& r, const Subspace& v, const ProbeSet& probes, std::uint64_t seed) {
        StructureOptions o;
        o.seed = seed;
        py::gil_scoped_release release;
        return check_structure(r, v, probes, o).checks;
      },
      py::arg("realization"), py::arg("v"), py::arg("probes"), py::arg("seed") = 0);

  py::class_<JordanReport>(m, "JordanReport")
      .def_readonly("unit_split", &JordanReport::unit_split)
      .def_readonly("unitary_split", &JordanReport::unitary_split)
      .def_readonly("choi_min_positive", &JordanReport::choi_min_positive)
      .def_readonly("choi_min_negative", &JordanReport::choi_min_negative)
      .def_readonly("reproduction", &JordanReport::reproduction)
      .def_readonly("passed", &JordanReport::passed);

  m.def("jordan_decomposition_check",
        [](const Realization& r) { return jordan_decomposition_check(r); });

  py::class_<LeibnizReport>(m, "LeibnizReport")
      .def_readonly("pairs", &LeibnizReport::pairs)
      .def_readonly("max_excess", &LeibnizReport::max_excess);

  m.def("leibniz_sweep", &leibniz_sweep, py::arg("realization"), py::arg("pairs"),
        py::arg("seed") = 0);

  m.def("_run", &run, py::arg("command"), py::arg("spec"), py::arg("realization") = "",
        py::arg("save_realization") = "", py::arg("seed") = std::nullopt,
        py::arg("tol") = std::map<std::string, double>{}, py::arg("levels") = std::nullopt,
        py::arg("probes") = std::nullopt);
}

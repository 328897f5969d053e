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

#include "quotrep/config.hpp"

#include "quotrep/errors.hpp"

namespace quotrep {

namespace {

template <typename Fn>
void for_each_field(Tolerances& t, Fn&& fn) {
  fn("rank_cutoff", t.rank_cutoff);
  fn("hermitian_check", t.hermitian_check);
  fn("membership", t.membership);
  fn("solver_gap", t.solver_gap);
  fn("certificate_norm", t.certificate_norm);
  fn("annihilation", t.annihilation);
  fn("attainment", t.attainment);
  fn("oracle_agreement", t.oracle_agreement);
  fn("reconstruction", t.reconstruction);
  fn("projection", t.projection);
  fn("probe_exactness", t.probe_exactness);
  fn("overshoot", t.overshoot);
  fn("structural", t.structural);
  fn("star_map", t.star_map);
  fn("leibniz", t.leibniz);
  fn("choi_psd", t.choi_psd);
}

}  // namespace

void Tolerances::set(const std::string& name, double value) {
  if (!(value > 0.0)) {
    throw ContractViolation("tolerance '" + name + "' must be positive");
  }
  bool found = false;
  for_each_field(*this, [&](const char* key, double& field) {
    if (name == key) {
      field = value;
      found = true;
    }
  });
  if (!found) throw ContractViolation("unknown tolerance '" + name + "'");
}

double Tolerances::get(const std::string& name) const {
  auto copy = *this;
  double out = 0.0;
  bool found = false;
  for_each_field(copy, [&](const char* key, double& field) {
    if (name == key) {
      out = field;
      found = true;
    }
  });
  if (!found) throw ContractViolation("unknown tolerance '" + name + "'");
  return out;
}

std::map<std::string, double> Tolerances::as_map() const {
  auto copy = *this;
  std::map<std::string, double> out;
  for_each_field(copy, [&](const char* key, double& field) { out[key] = field; });
  return out;
}

}  // namespace quotrep

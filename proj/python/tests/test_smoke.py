# Copyright 2026 The quotrep Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import os
import pathlib

import numpy as np
import pytest

import quotrep as qr

SPECS = pathlib.Path(os.environ.get(
    "QUOTREP_SPECS_DIR", pathlib.Path(__file__).resolve().parents[2] / "specs"))


def m2():
    return qr.AlgebraShape([2])


def diag(a, b):
    return qr.AlgebraElement(m2(), [np.diag([a, b]).astype(complex)])


def test_shape_and_elements():
    s = qr.AlgebraShape([2, 1])
    assert s.dimension == 5
    a = qr.AlgebraElement.random(s, seed=3)
    assert a.adjoint().adjoint().blocks[0] == pytest.approx(a.blocks[0])
    u = qr.AlgebraElement.unit(s)
    assert (u * a).blocks[1] == pytest.approx(a.blocks[1])
    assert qr.AlgebraElement.unit(s).norm() == pytest.approx(1.0)


def test_worked_example():
    v = qr.Subspace(m2(), [qr.AlgebraElement.unit(m2())])
    assert v.flags.contains_unit and v.flags.star_closed
    c = qr.AmplifiedElement(diag(1.0, -1.0))
    q = qr.quotient_norm(c, v)
    assert q.value == pytest.approx(1.0, abs=1e-9)
    assert abs(q.duality_gap) < 1e-9
    t = q.certificate.blocks[0]
    assert t == pytest.approx(np.diag([0.5, -0.5]), abs=1e-8)
    assert q.certificate.norm() == pytest.approx(1.0, abs=1e-9)
    assert q.certificate.annihilation_residual(v) < 1e-12


def test_quotient_matches_oracle():
    s = qr.AlgebraShape([2, 1])
    v = qr.Subspace(s, [qr.AlgebraElement.unit(s), qr.AlgebraElement.random(s, seed=1)])
    c = qr.AmplifiedElement.random(s, 1, seed=2)
    q = qr.quotient_norm(c, v)
    o = qr.oracle_quotient_norm(c, v, seed=4)
    assert o.value == pytest.approx(q.value, rel=1e-4)
    assert q.value <= c.norm() + 1e-12


def test_amplified_entries():
    a = diag(1.0, 2.0)
    z = qr.AlgebraElement.zero(m2())
    c = qr.AmplifiedElement([[a, z], [z, a]])
    assert c.level == 2
    assert c.norm() == pytest.approx(2.0)


def test_bad_tolerance_name():
    v = qr.Subspace(m2(), [qr.AlgebraElement.unit(m2())])
    with pytest.raises(qr.ContractViolation):
        qr.quotient_norm(qr.AmplifiedElement(diag(1.0, 0.0)), v, tol={"nope": 1.0})


def test_system_realization():
    s = qr.AlgebraShape([2, 1])
    v = qr.Subspace(s, [qr.AlgebraElement.unit(s), qr.AlgebraElement.random(s, seed=5, hermitian=True)])
    probes = qr.ProbeSet.generate(v, levels=1, per_level=1, seed=5)
    probes.certify(v)
    assert probes.certified
    r = qr.build_realization("system", v, probes)
    assert r.kind == "system"
    assert r.z is not None
    z = r.z
    assert z.conj().T == pytest.approx(-z, abs=1e-10)
    checks = qr.check_structure(r, v, probes)
    assert all(ch.passed for ch in checks if ch.binding), [ch for ch in checks if not ch.passed]
    for elem, value in zip(probes.elements, probes.values):
        assert r.norm(elem) == pytest.approx(value, abs=1e-5)
    j = qr.jordan_decomposition_check(r)
    assert j.passed


def test_subalgebra_leibniz():
    e11 = qr.AlgebraElement.matrix_unit(m2(), 0, 0, 0)
    e22 = qr.AlgebraElement.matrix_unit(m2(), 0, 1, 1)
    b = qr.Subspace(m2(), [e11, e22])
    assert b.flags.is_subalgebra
    probes = qr.ProbeSet.generate(b, levels=1, per_level=1, seed=7)
    probes.certify(b)
    r = qr.build_realization("subalgebra", b, probes)
    rep = qr.leibniz_sweep(r, 50, seed=1)
    assert rep.pairs == 50
    assert rep.max_excess <= 1e-9


def test_quotient_command():
    report = qr.quotient(SPECS / "m2_unit.json")
    assert report["schema"] == "quotrep.report/1"
    assert report["status"] == "pass"


def test_realize_verify_round_trip(tmp_path):
    saved = tmp_path / "r.json"
    first = qr.realize(SPECS / "system_sum.json", save_realization=saved, seed=5)
    assert saved.exists()
    second = qr.verify(SPECS / "system_sum.json", saved, seed=5)
    assert first["status"] == second["status"] == "pass"
    assert first["checks"] == second["checks"]


def test_invalid_spec_exit_code():
    code, _ = qr.run_command("realize", SPECS / "system_invalid.json", check=False)
    assert code == 2
    with pytest.raises(qr.CommandError) as err:
        qr.realize(SPECS / "system_invalid.json")
    assert err.value.code == 2

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


"""Quotient norms on finite-dimensional C*-algebras and their realizations."""

import json

from ._quotrep import (
    AlgebraElement,
    AlgebraShape,
    AmplifiedElement,
    CertifiedNorm,
    Check,
    ContractViolation,
    ConvergenceError,
    Functional,
    JordanReport,
    LeibnizReport,
    NumericalFault,
    OracleResult,
    ProbeSet,
    Realization,
    Subspace,
    SubspaceFlags,
    _run,
    build_realization,
    check_structure,
    jordan_decomposition_check,
    leibniz_sweep,
    oracle_quotient_norm,
    quotient_norm,
)

__version__ = "0.1.0"


class CommandError(RuntimeError):
    def __init__(self, code, message, report=None):
        super().__init__(message)
        self.code = code
        self.report = report


def run_command(command, spec, realization="", save_realization="", seed=None,
                tol=None, levels=None, probes=None, check=True):
    """Runs a command-line subcommand in process and returns (exit code, report).

    The report is the parsed JSON document, or None when the command failed
    before producing one. With check=True a non-zero exit raises CommandError.
    """
    code, out, err = _run(command, str(spec), str(realization), str(save_realization),
                          seed, tol or {}, levels, probes)
    report = json.loads(out) if out.strip() else None
    if check and code != 0:
        raise CommandError(code, err.strip() or f"{command} exited with {code}", report)
    return code, report


def quotient(spec, **kwargs):
    return run_command("quotient", spec, **kwargs)[1]


def realize(spec, **kwargs):
    return run_command("realize", spec, **kwargs)[1]


def verify(spec, realization, **kwargs):
    return run_command("verify", spec, realization=realization, **kwargs)[1]

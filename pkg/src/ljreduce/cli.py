"""Batch front end: load a problem specification, run the requested
pipelines, emit a machine-readable report and a human summary.

Exit codes: 0 all certificates pass, 2 parse or parameter error,
3 precondition or certificate failure, 4 theorem-violation certificate
(which indicates a tolerance misconfiguration, not a counterexample).
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import config, matspace, report as report_mod
from .certify import SUITES, run_suite
from .constraints import ConstrainedSystem, t_reduce, verify_equivalence
from .core import LJBParams, complexify, ljb_algebra, verify_dynamical_correspondence, verify_ljb_axioms
from .errors import (
    LJError,
    ParameterError,
    PreconditionError,
    SpecFormatError,
    TheoremViolationError,
)
from .genrand import GenSpec, gen_algebra
from .gns import gns, is_pure, purity_obstruction, reduced_gns_equivalence
from .reduction import quotient_norm, reduce_by_ideal, reduce_by_subalgebra
from .states import StateFunctional, is_state, reduce_state, vanishes_on

TASKS = ("verify", "reduce-ideal", "reduce-subalgebra", "t-reduce",
         "equivalence", "states", "gns", "purity")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_THEOREM = 4

TOL_ENV_VAR = "LJREDUCE_TOL"


@dataclass
class ProblemSpec:
    """Validated problem file: carrier, optional substructures, task list."""

    n: int
    params: LJBParams
    algebra_basis: list | None = None
    algebra_profile: GenSpec | None = None
    ideal: list = dataclass_field(default_factory=list)
    subalgebra: list = dataclass_field(default_factory=list)
    constraints: list = dataclass_field(default_factory=list)
    states: list = dataclass_field(default_factory=list)
    tasks: list = dataclass_field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "lambda": self.params.lam,
            "kappa": self.params.kappa,
        }
        if self.algebra_basis is not None:
            out["algebra"] = {
                "basis": [report_mod.matrix_to_json(m)
                          for m in self.algebra_basis]
            }
        else:
            p = {"profile": self.algebra_profile.profile,
                 "seed": self.algebra_profile.seed}
            if self.algebra_profile.block_sizes:
                p["block_sizes"] = list(self.algebra_profile.block_sizes)
            if self.algebra_profile.target_dim:
                p["target_dim"] = self.algebra_profile.target_dim
            out["algebra"] = p
        for key, mats in (("ideal", self.ideal),
                          ("subalgebra", self.subalgebra),
                          ("constraints", self.constraints),
                          ("states", self.states)):
            if mats:
                out[key] = [report_mod.matrix_to_json(m) for m in mats]
        out["tasks"] = list(self.tasks)
        return out


def _parse_matrices(raw, n: int, what: str) -> list:
    mats = []
    for k, rows in enumerate(raw):
        try:
            mats.append(report_mod.matrix_from_json(rows, n))
        except (ValueError, TypeError, IndexError) as exc:
            raise SpecFormatError(f"{what}[{k}]: {exc}") from exc
    return mats


def load_spec(data: dict) -> ProblemSpec:
    try:
        n = int(data["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError("spec requires an integer field 'n'") from exc
    lam = float(data.get("lambda", 0.5))
    kappa = float(data.get("kappa", 1.0))
    params = LJBParams(lam=lam, kappa=kappa)
    alg = data.get("algebra", {"profile": "full_matrix", "seed": 0})
    basis = None
    profile = None
    if "basis" in alg:
        basis = _parse_matrices(alg["basis"], n, "algebra.basis")
    else:
        try:
            profile = GenSpec(
                seed=int(alg.get("seed", 0)), n=n,
                profile=alg.get("profile", "full_matrix"),
                block_sizes=tuple(alg.get("block_sizes", ())),
                target_dim=int(alg.get("target_dim", 0)),
            )
        except (PreconditionError, TypeError, ValueError) as exc:
            raise SpecFormatError(f"algebra profile: {exc}") from exc
    tasks = list(data.get("tasks", []))
    for t in tasks:
        if t not in TASKS:
            raise SpecFormatError(f"unknown task {t!r}; choose from {TASKS}")
    return ProblemSpec(
        n=n, params=params, algebra_basis=basis, algebra_profile=profile,
        ideal=_parse_matrices(data.get("ideal", []), n, "ideal"),
        subalgebra=_parse_matrices(data.get("subalgebra", []), n, "subalgebra"),
        constraints=_parse_matrices(data.get("constraints", []), n,
                                    "constraints"),
        states=_parse_matrices(data.get("states", []), n, "states"),
        tasks=tasks,
    )


def load_spec_file(path: str) -> ProblemSpec:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFormatError(f"cannot read spec file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecFormatError("spec file must hold a JSON object")
    return load_spec(data)


class _Runner:
    """Executes tasks in dependency order over a shared build context."""

    def __init__(self, spec: ProblemSpec, rng_seed: int = 0):
        self.spec = spec
        self.rng_seed = rng_seed
        self.report = {"n": spec.n, "lambda": spec.params.lam,
                       "kappa": spec.params.kappa, "tasks": {}}
        self.summary = []
        self.exit_code = EXIT_OK
        amb = matspace.AmbientSpace(spec.n)
        if spec.algebra_basis is not None:
            carrier = matspace.span(amb, spec.algebra_basis, hermitian=True)
            self.algebra = ljb_algebra(carrier, spec.params)
        else:
            self.algebra = gen_algebra(spec.algebra_profile, spec.params)
        self.field_algebra = None
        self.system = None
        self.reduction = None
        self.treduction = None
        self.reducing_subalgebra = None

    def _field(self):
        if self.field_algebra is None:
            self.field_algebra = complexify(self.algebra)
        return self.field_algebra

    def _sys(self):
        if self.system is None:
            if not self.spec.constraints:
                raise PreconditionError("task requires a constraint list")
            self.system = ConstrainedSystem(self._field(),
                                            tuple(self.spec.constraints),
                                            params=self.spec.params)
        return self.system

    def _mark(self, task: str, ok: bool):
        self.summary.append(f"task {task}: {'PASS' if ok else 'FAIL'}")
        if not ok and self.exit_code == EXIT_OK:
            self.exit_code = EXIT_PRECONDITION

    def run_task(self, task: str):
        handler = getattr(self, "task_" + task.replace("-", "_"))
        try:
            section, ok = handler()
        except TheoremViolationError as exc:
            self.report["tasks"][task] = {"error": type(exc).__name__,
                                          "message": str(exc)}
            self.exit_code = EXIT_THEOREM
            self.summary.append(f"task {task}: THEOREM-VIOLATION ({exc})")
            return False
        except LJError as exc:
            self.report["tasks"][task] = {"error": type(exc).__name__,
                                          "message": str(exc)}
            if self.exit_code in (EXIT_OK,):
                self.exit_code = EXIT_PRECONDITION
            self.summary.append(f"task {task}: ERROR {type(exc).__name__}")
            return False
        self.report["tasks"][task] = section
        self._mark(task, ok)
        return ok

    def task_verify(self):
        rep1 = verify_ljb_axioms(self.algebra, rng_seed=self.rng_seed)
        rep2 = verify_dynamical_correspondence(self.algebra,
                                               rng_seed=self.rng_seed)
        section = {
            "dim": self.algebra.dim,
            "axioms": rep1.to_dict(),
            "dynamical_correspondence": rep2.to_dict(),
        }
        return section, rep1.passed and rep2.passed

    def _norm_table(self, result):
        table = []
        for b in result.quotient.carrier.basis:
            table.append({
                "representative_norm": float(np.linalg.norm(b, 2)),
                "quotient_norm": quotient_norm(result, b),
            })
        return table

    def task_reduce_ideal(self):
        if not self.spec.ideal:
            raise PreconditionError("reduce-ideal requires an ideal basis")
        amb = self.algebra.carrier.ambient
        j = matspace.span(amb, self.spec.ideal, hermitian=True)
        result = reduce_by_ideal(self.algebra, j)
        self.reduction = result
        section = result.to_dict()
        section["norm_table"] = self._norm_table(result)
        return section, result.axiom_report.passed

    def task_reduce_subalgebra(self):
        amb = self.algebra.carrier.ambient
        if self.spec.subalgebra:
            j = matspace.span(amb, self.spec.subalgebra, hermitian=True)
        elif self.spec.constraints:
            from .constraints import constrained_ideal

            j = matspace.hermitian_part(constrained_ideal(self._sys()))
        else:
            raise PreconditionError(
                "reduce-subalgebra requires a subalgebra basis or constraints")
        result = reduce_by_subalgebra(self.algebra, j)
        self.reduction = result
        self.reducing_subalgebra = j
        section = result.to_dict()
        section["norm_table"] = self._norm_table(result)
        return section, result.axiom_report.passed

    def task_t_reduce(self):
        self.treduction = t_reduce(self._sys())
        return self.treduction.to_dict(), True

    def task_equivalence(self):
        cert = verify_equivalence(self._sys(), self.treduction,
                                  rng_seed=self.rng_seed)
        return cert.to_dict(), cert.passed

    def _states(self):
        if not self.spec.states:
            raise PreconditionError("task requires a states list")
        return [StateFunctional.from_density(self.algebra, rho)
                for rho in self.spec.states]

    def task_states(self):
        out = []
        all_ok = True
        for k, omega in enumerate(self._states()):
            entry = {"state": k}
            rep = is_state(omega)
            entry["report"] = rep.to_dict()
            all_ok = all_ok and rep.ok
            if self.treduction is not None:
                entry["dirac"] = bool(
                    self.treduction.dirac.is_dirac(omega.rho))
            if self.reduction is not None:
                ok, worst = vanishes_on(omega, self.reduction.reducing_ideal)
                entry["vanishes_on_ideal"] = ok
                if ok and rep.ok:
                    reduced = reduce_state(omega, self.reduction)
                    entry["reduced_values"] = [float(v)
                                               for v in reduced.values]
            out.append(entry)
        return {"states": out}, all_ok

    def task_gns(self):
        out = []
        all_ok = True
        f = self._field()
        for k, omega in enumerate(self._states()):
            entry = {"state": k}
            rep = gns(f, omega)
            entry["gns"] = rep.to_dict()
            entry["pure"] = bool(is_pure(f, omega))
            all_ok = all_ok and rep.passed
            if self.reduction is not None and self.reduction.quotient.dim:
                ok, _ = vanishes_on(
                    StateFunctional.from_density(self.reduction.normalizer,
                                                 omega.rho),
                    self.reduction.reducing_ideal)
                if ok:
                    j = self.reducing_subalgebra \
                        if self.reducing_subalgebra is not None \
                        else self.reduction.reducing_ideal
                    tilde = reduce_state(omega, self.reduction)
                    cert = reduced_gns_equivalence(f, self.reduction, j,
                                                   omega, tilde)
                    entry["reduced_gns"] = cert.to_dict()
                    all_ok = all_ok and cert.passed
            out.append(entry)
        return {"states": out}, all_ok

    def task_purity(self):
        if self.reduction is None:
            raise PreconditionError(
                "purity requires a completed reduction task")
        out = []
        all_ok = True
        f = self._field()
        j = self.reducing_subalgebra \
            if self.reducing_subalgebra is not None \
            else self.reduction.reducing_ideal
        for k, omega in enumerate(self._states()):
            obs = purity_obstruction(f, self.reduction.normalizer.carrier, j,
                                     omega)
            pure = bool(is_pure(f, omega))
            consistent = not (pure and not obs.pure_possible)
            entry = {"state": k, "obstruction": obs.to_dict(), "pure": pure,
                     "consistent": consistent}
            all_ok = all_ok and consistent
            out.append(entry)
        return {"states": out}, all_ok


def run(spec: ProblemSpec, rng_seed: int = 0):
    """Execute the spec's tasks in dependency order; returns (report, exit)."""
    runner = _Runner(spec, rng_seed=rng_seed)
    requested = [t for t in TASKS if t in spec.tasks]
    runner.report["requested_tasks"] = requested
    for task in requested:
        runner.run_task(task)
    return runner.report, runner.exit_code, runner.summary


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ljreduce",
        description="Verification and reduction engine for Lie-Jordan "
                    "algebras of Hermitian matrices.")
    parser.add_argument("--tol", type=float, default=None,
                        help="scale every tolerance by this factor "
                             f"(default from ${TOL_ENV_VAR} when set)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the tasks in a problem file")
    p_run.add_argument("spec", help="path to a JSON problem specification")
    p_run.add_argument("--out", default=None,
                       help="write the JSON report here instead of stdout")
    p_run.add_argument("--seed", type=int, default=0)

    p_cert = sub.add_parser("certify", help="run a randomized suite")
    p_cert.add_argument("suite", choices=sorted(SUITES))
    p_cert.add_argument("--seed", type=int, default=0)
    p_cert.add_argument("--count", type=int, default=None)
    p_cert.add_argument("--out", default=None)

    args = parser.parse_args(argv)

    scale = args.tol
    if scale is None and os.environ.get(TOL_ENV_VAR):
        try:
            scale = float(os.environ[TOL_ENV_VAR])
        except ValueError:
            print(f"ignoring malformed ${TOL_ENV_VAR}", file=sys.stderr)
    if scale is not None:
        config.set_scale(scale)

    if args.command == "run":
        try:
            spec = load_spec_file(args.spec)
        except (SpecFormatError, ParameterError) as exc:
            print(f"spec error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        report, code, summary = run(spec, rng_seed=args.seed)
        rendered = report_mod.render(report)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(rendered + "\n")
        else:
            print(rendered)
        for line in summary:
            print(line, file=sys.stderr)
        return code

    result = run_suite(args.suite, seed=args.seed, count=args.count)
    rendered = report_mod.render(result.to_dict())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rendered + "\n")
    print(result.summary())
    return EXIT_OK if result.passed else EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())

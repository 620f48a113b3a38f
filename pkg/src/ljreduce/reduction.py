"""Reduction of Lie-Jordan algebras by Jordan ideals and by subalgebras.

Both procedures share the same skeleton: compute the normalizer
N = {a : [a, J] <= J}, identify the reducing ideal inside it (N ^ J for the
ideal case, N o J for the subalgebra case), verify the ideal property
exhaustively on basis pairs, and realize the quotient on the orthogonal
complement of the ideal inside N, with products re-projected onto that
carrier.

The quotient norm |[a]| = inf_b |a + b| is computed structurally: a
finite-dimensional associative ideal is cut out by a central projection e
of its multiplier algebra (the support projection of the ideal), and the
infimum is attained at the compression (I-e) a (I-e).  The infimum
definition is kept as an independent convex-optimization oracle for
cross-validation only.
"""

from dataclasses import dataclass, field

import numpy as np

from . import config, matspace
from .core import (
    AxiomReport,
    CStarAlgebra,
    LJBAlgebra,
    complexify,
    jordan_product,
    operator_norm,
    verify_ljb_axioms,
)
from .errors import (
    ClosureError,
    MembershipError,
    NotAnIdealError,
    NotASubalgebraError,
    PreconditionError,
    TheoremViolationError,
    UnitalSubalgebraError,
)
from .matspace import MatrixSubspace, hs_norm


@dataclass
class StructureCheck:
    """Outcome of an ideal / subalgebra verification with a witness pair."""

    ok: bool
    worst_residual: float
    witness: tuple | None = None

    def to_dict(self) -> dict:
        out = {"ok": bool(self.ok), "worst_residual": float(self.worst_residual)}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def _require_contained(sub: MatrixSubspace, space: MatrixSubspace, what: str):
    ok, res = space.contains(sub)
    if not ok:
        raise MembershipError(f"{what} is not contained in the carrier",
                              residual=res)


def _pair_residuals(left: np.ndarray, right: np.ndarray, target: MatrixSubspace,
                    product) -> StructureCheck:
    """Worst membership residual of product(l_i, r_j) in target, all pairs."""
    worst, witness, ok = 0.0, None, True
    if len(left) and len(right):
        mats = np.stack([product(a, c) for a in left for c in right])
        res = matspace.batch_residuals(target, mats)
        scale = np.maximum(1.0, np.linalg.norm(
            mats.reshape(len(mats), -1), axis=1))
        rel = res / scale
        idx = int(np.argmax(rel))
        worst = float(rel[idx])
        witness = (idx // len(right), idx % len(right))
        ok = worst <= config.TOL.closure
    return StructureCheck(ok=ok, worst_residual=worst, witness=witness)


def is_jordan_ideal(alg: LJBAlgebra, j: MatrixSubspace) -> StructureCheck:
    """L o J <= J, checked exhaustively on basis pairs."""
    _require_contained(j, alg.carrier, "J")
    return _pair_residuals(alg.carrier.basis, j.basis, j, alg.jordan)


def is_lj_subalgebra(alg: LJBAlgebra, j: MatrixSubspace) -> StructureCheck:
    """Closure of J under both products."""
    _require_contained(j, alg.carrier, "J")
    cj = _pair_residuals(j.basis, j.basis, j, alg.jordan)
    cl = _pair_residuals(j.basis, j.basis, j, alg.bracket)
    if cj.worst_residual >= cl.worst_residual:
        return StructureCheck(cj.ok and cl.ok, cj.worst_residual, cj.witness)
    return StructureCheck(cj.ok and cl.ok, cl.worst_residual, cl.witness)


def is_unital_subalgebra(alg: LJBAlgebra, j: MatrixSubspace):
    """Internal Jordan unit of J: e in J with e o x = x on J.

    Returns (flag, unit or None).  The zero subspace counts as non-unital.
    """
    from .core import find_jordan_unit

    _require_contained(j, alg.carrier, "J")
    if j.dim == 0:
        return False, None
    e = find_jordan_unit(j)
    return (e is not None), e


def normalizer(alg: LJBAlgebra, j: MatrixSubspace) -> LJBAlgebra:
    """N_J = {a in L : [a, J] <= J}, a closed unital Lie-Jordan subalgebra."""
    _require_contained(j, alg.carrier, "J")
    conditions = [
        (lambda x, c=c: alg.bracket(x, c), j)
        for c in j.basis
    ]
    space = matspace.constrained_subspace(alg.carrier, conditions)
    out = LJBAlgebra(carrier=space, params=alg.params, unit=alg.unit,
                     projected=alg.projected, compression=alg.compression)
    if not out.projected:
        from .core import closure_residuals

        worst, witness = closure_residuals(out)
        if worst > config.TOL.closure:
            raise ClosureError("normalizer failed to close under the products",
                               witness=witness, residual=worst)
    return out


@dataclass
class ReductionResult:
    """Normalizer, reducing ideal, quotient, and the coset projection data."""

    mode: str
    normalizer: LJBAlgebra
    reducing_ideal: MatrixSubspace
    quotient: LJBAlgebra
    support: np.ndarray
    axiom_report: AxiomReport = field(repr=False, default=None)
    ideal_check: StructureCheck = field(repr=False, default=None)

    def project(self, a: np.ndarray) -> np.ndarray:
        """Canonical coset representative of a in N_J."""
        ok, res = self.normalizer.carrier.member(a)
        if not ok:
            raise MembershipError("element is not in the normalizer",
                                  residual=res)
        return np.asarray(a, dtype=complex) - self.reducing_ideal.project(a)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "normalizer_dim": self.normalizer.dim,
            "ideal_dim": self.reducing_ideal.dim,
            "quotient_dim": self.quotient.dim,
            "quotient_axioms": self.axiom_report.to_dict()
            if self.axiom_report else None,
        }


def support_projection(d: MatrixSubspace, ambient: CStarAlgebra) -> np.ndarray:
    """Unit of a two-sided associative ideal of a finite-dimensional algebra.

    The range projection e of h = sum_i d_i^dag d_i over the ideal's basis:
    ker h = ker e because every d in the ideal satisfies d = d e, so e acts
    as the unit of the ideal and commutes with the ambient algebra.
    """
    n = d.n
    _require_contained(d, ambient.space, "ideal")
    for kind, check in (
        ("left", _pair_residuals(ambient.space.basis, d.basis, d,
                                 lambda a, x: a @ x)),
        ("right", _pair_residuals(ambient.space.basis, d.basis, d,
                                  lambda a, x: x @ a)),
    ):
        if not check.ok:
            raise NotAnIdealError(
                f"subspace is not a two-sided ideal ({kind} products escape)",
                witness=check.witness, residual=check.worst_residual,
            )
    if d.dim == 0:
        return np.zeros((n, n), dtype=complex)
    h = sum(x.conj().T @ x for x in d.basis)
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    keep = w > config.TOL.rank_rtol * max(w[-1], 0.0)
    e = (v[:, keep] * 1.0) @ v[:, keep].conj().T
    e = (e + e.conj().T) / 2
    ok, res = d.member(e)
    worst = res
    for x in d.basis:
        worst = max(worst, hs_norm(e @ x - x), hs_norm(x @ e - x))
    for a in ambient.space.basis:
        worst = max(worst, hs_norm(e @ a - a @ e))
    if not ok or worst > config.TOL.closure * max(1.0, float(w[-1])):
        raise TheoremViolationError(
            f"support projection failed its defining identities "
            f"(residual {worst:.3e}); tolerance misconfiguration suspected"
        )
    return e


def _quotient_algebra(n_alg: LJBAlgebra, ideal: MatrixSubspace):
    """Quotient of N by a verified Lie-Jordan ideal, on canonical carriers."""
    carrier = matspace.complement_within(n_alg.carrier, ideal)
    n = n_alg.n
    if ideal.dim == 0:
        e = np.zeros((n, n), dtype=complex)
    else:
        ambient = complexify(n_alg)
        d_complex = matspace.complex_closure(ideal)
        e = support_projection(d_complex, ambient)
    compression = np.eye(n, dtype=complex) - e
    unit = None
    if n_alg.unit is not None and carrier.dim:
        unit = n_alg.unit - ideal.project(n_alg.unit)
    quotient = LJBAlgebra(carrier=carrier, params=n_alg.params, unit=unit,
                          projected=True, compression=compression)
    return quotient, e


def reduce_by_ideal(alg: LJBAlgebra, j: MatrixSubspace) -> ReductionResult:
    """Reduction by a Jordan ideal: N_J / (N_J ^ J).

    Verifies the ideal hypothesis, that N_J ^ J is a Lie-Jordan ideal of the
    normalizer, and re-checks the algebra axioms on the quotient.
    """
    check = is_jordan_ideal(alg, j)
    if not check.ok:
        raise NotAnIdealError("J is not a Jordan ideal of L",
                              witness=check.witness,
                              residual=check.worst_residual)
    n_alg = normalizer(alg, j)
    reducing = matspace.intersect(n_alg.carrier, j)
    ideal_check = _lj_ideal_in(n_alg, reducing)
    if not ideal_check.ok:
        raise TheoremViolationError(
            f"N ^ J failed the Lie-Jordan ideal property in N "
            f"(residual {ideal_check.worst_residual:.3e})"
        )
    quotient, e = _quotient_algebra(n_alg, reducing)
    report = verify_ljb_axioms(quotient)
    if not report.passed:
        raise TheoremViolationError(
            f"quotient failed the Lie-Jordan axioms (worst {report.worst:.3e})"
        )
    return ReductionResult(mode="by_ideal", normalizer=n_alg,
                           reducing_ideal=reducing, quotient=quotient,
                           support=e, axiom_report=report,
                           ideal_check=ideal_check)


def _lj_ideal_in(n_alg: LJBAlgebra, k: MatrixSubspace) -> StructureCheck:
    """K is a Lie-Jordan ideal of N: both products of N-basis with K land in K."""
    cj = _pair_residuals(n_alg.carrier.basis, k.basis, k, n_alg.jordan)
    cl = _pair_residuals(n_alg.carrier.basis, k.basis, k, n_alg.bracket)
    if cj.worst_residual >= cl.worst_residual:
        return StructureCheck(cj.ok and cl.ok, cj.worst_residual, cj.witness)
    return StructureCheck(cj.ok and cl.ok, cl.worst_residual, cl.witness)


def reduce_by_subalgebra(alg: LJBAlgebra, j: MatrixSubspace) -> ReductionResult:
    """Reduction by a Lie-Jordan subalgebra: N_J / (N_J o J).

    J must not contain the Jordan unit of L; reducing by a subalgebra
    containing the unit collapses the normalizer onto itself and is refused.
    """
    check = is_lj_subalgebra(alg, j)
    if not check.ok:
        raise NotASubalgebraError("J is not a Lie-Jordan subalgebra of L",
                                  witness=check.witness,
                                  residual=check.worst_residual)
    if alg.unit is None:
        raise PreconditionError("subalgebra reduction requires a unital algebra")
    if j.member(alg.unit)[0]:
        raise UnitalSubalgebraError(
            "J contains the Jordan unit; N o J would be all of N and the "
            "reduction is refused"
        )
    n_alg = normalizer(alg, j)
    products = [
        jordan_product(a, c) for a in n_alg.carrier.basis for c in j.basis
    ]
    reducing = matspace.span(alg.carrier.ambient, products, hermitian=True)
    ok, res = reducing.contains(j)
    if not ok:
        raise TheoremViolationError(
            f"J is not recovered inside N o J (residual {res:.3e})"
        )
    ok, res = n_alg.carrier.contains(reducing)
    if not ok:
        raise TheoremViolationError(
            f"N o J escapes the normalizer (residual {res:.3e})"
        )
    ideal_check = _lj_ideal_in(n_alg, reducing)
    if not ideal_check.ok:
        raise TheoremViolationError(
            f"N o J failed the Lie-Jordan ideal property in N "
            f"(residual {ideal_check.worst_residual:.3e})"
        )
    quotient, e = _quotient_algebra(n_alg, reducing)
    report = verify_ljb_axioms(quotient)
    if not report.passed:
        raise TheoremViolationError(
            f"quotient failed the Lie-Jordan axioms (worst {report.worst:.3e})"
        )
    return ReductionResult(mode="by_subalgebra", normalizer=n_alg,
                           reducing_ideal=reducing, quotient=quotient,
                           support=e, axiom_report=report,
                           ideal_check=ideal_check)


def quotient_norm(result: ReductionResult, a: np.ndarray) -> float:
    """|[a]| for a in N_J, via the support projection of the reducing ideal."""
    ok, res = result.normalizer.carrier.member(a)
    if not ok:
        raise MembershipError("element is not in the normalizer", residual=res)
    c = np.eye(result.normalizer.n, dtype=complex) - result.support
    return operator_norm(c @ np.asarray(a, dtype=complex) @ c)


def quotient_norm_infimum(result: ReductionResult, a: np.ndarray,
                          solver=None) -> float:
    """Independent oracle: minimize |a + sum_i t_i b_i|_op over real t.

    Solved as a convex spectral-norm program; used only to cross-validate
    the structural quotient norm.
    """
    import cvxpy as cp

    basis = result.reducing_ideal.basis
    a = np.asarray(a, dtype=complex)
    if len(basis) == 0:
        return operator_norm(a)
    t = cp.Variable(len(basis))
    expr = cp.Constant(a)
    for i, b in enumerate(basis):
        expr = expr + t[i] * cp.Constant(b)
    problem = cp.Problem(cp.Minimize(cp.norm(expr, 2)))
    problem.solve(solver=solver)
    if problem.status not in ("optimal", "optimal_inaccurate"):
        raise PreconditionError(f"norm oracle did not solve: {problem.status}")
    return float(problem.value)


def verify_quotient_well_defined(result: ReductionResult, trials: int = 20,
                                 rng_seed: int = 0) -> AxiomReport:
    """Products of coset representatives do not depend on the representative."""
    rng = np.random.default_rng(rng_seed)
    n_alg = result.normalizer
    k = result.reducing_ideal
    q = result.quotient
    worst = 0.0
    for _ in range(trials if n_alg.dim else 0):
        a = n_alg.random_element(rng)
        b = n_alg.random_element(rng)
        k1 = k.random_element(rng) if k.dim else np.zeros_like(a)
        k2 = k.random_element(rng) if k.dim else np.zeros_like(a)
        scale = 1.0 + hs_norm(a) * hs_norm(b)
        for product in (n_alg.jordan, n_alg.bracket):
            lhs = result.project(product(a + k1, b + k2))
            rhs = result.project(product(a, b))
            worst = max(worst, hs_norm(lhs - rhs) / scale)
        worst = max(
            worst,
            hs_norm(q.jordan(result.project(a), result.project(b))
                    - result.project(n_alg.jordan(a, b)))
            / scale,
        )
    residuals = {"well_defined": worst}
    return AxiomReport(residuals=residuals,
                       passed=worst <= config.TOL.closure * 10,
                       worst=worst)

"""T-reduction of a constrained quantum system (F, C).

Pipeline: the constraint set generates the constrained ideal
D = [F C] ^ [C F], the observables are its weak commutant O = D_W (equal to
the multiplier algebra M(D), certified numerically on every run), and the
physical algebra is the quotient O / D realized on canonical
representatives.  Dirac states are the states killed by the squared
constraints; their support projection characterizes them exactly at matrix
level.  The module also certifies that this associative reduction coincides
with the Lie-Jordan reduction of the Hermitian parts.
"""

from dataclasses import dataclass, field

import numpy as np

from . import config, matspace
from .core import (
    CStarAlgebra,
    LJBAlgebra,
    LJBParams,
    complexify,
    cstar_from_span,
    ljb_algebra,
    operator_norm,
)
from .errors import (
    HermiticityError,
    MembershipError,
    NotAnIdealError,
    NotASubalgebraError,
    TheoremViolationError,
)
from .matspace import MatrixSubspace, hs_norm
from .reduction import (
    ReductionResult,
    StructureCheck,
    _lj_ideal_in,
    _pair_residuals,
    _quotient_algebra,
    is_jordan_ideal,
    normalizer,
    reduce_by_ideal,
    support_projection,
)


@dataclass(frozen=True)
class ConstrainedSystem:
    """A unital field algebra together with Hermitian constraint operators."""

    field_algebra: CStarAlgebra
    constraints: tuple
    params: LJBParams = field(default_factory=LJBParams)

    def __post_init__(self):
        f = self.field_algebra
        eye = np.eye(f.n, dtype=complex)
        ok, res = f.member(eye)
        if not ok:
            raise MembershipError("field algebra does not contain the identity",
                                  residual=res)
        mats = []
        for k, c in enumerate(self.constraints):
            c = np.asarray(c, dtype=complex)
            if np.linalg.norm(c - c.conj().T) > \
                    config.TOL.ortho * max(1.0, np.linalg.norm(c)):
                raise HermiticityError(f"constraint {k} is not Hermitian")
            c = (c + c.conj().T) / 2
            ok, res = f.member(c)
            if not ok:
                raise MembershipError(
                    f"constraint {k} is outside the field algebra", residual=res)
            c.setflags(write=False)
            mats.append(c)
        object.__setattr__(self, "constraints", tuple(mats))

    @property
    def n(self) -> int:
        return self.field_algebra.n


def constrained_ideal(sys: ConstrainedSystem) -> MatrixSubspace:
    """D = [F C] ^ [C F]; verified to be a C*-subalgebra of F."""
    f = sys.field_algebra
    amb = f.space.ambient
    left = matspace.span(
        amb, [b @ c for b in f.space.basis for c in sys.constraints])
    right = matspace.span(
        amb, [c @ b for b in f.space.basis for c in sys.constraints])
    d = matspace.intersect(left, right)
    for i, b in enumerate(d.basis):
        ok, res = d.member(b.conj().T)
        if not ok:
            raise TheoremViolationError(
                f"constrained ideal is not *-closed (residual {res:.3e})")
    check = _pair_residuals(d.basis, d.basis, d, lambda a, b: a @ b)
    if not check.ok:
        raise TheoremViolationError(
            f"constrained ideal is not product-closed "
            f"(residual {check.worst_residual:.3e})")
    return d


@dataclass
class DiracStates:
    """Support projection of the Dirac states and the Thm-6.1 certificate.

    A state tr(rho .) is Dirac iff rho = p rho p; the Dirac face is the
    state space of the compressed algebra p F p, so it is nonempty iff
    rank(p) > 0 and a single point iff rank(p) = 1.
    """

    support: np.ndarray
    rank: int
    annihilator_matches_ideal: bool
    annihilator_residual: float
    sampled_worst_value: float

    @property
    def exists(self) -> bool:
        return self.rank > 0

    @property
    def unique(self) -> bool:
        return self.rank == 1

    def is_dirac(self, rho: np.ndarray) -> bool:
        rho = np.asarray(rho, dtype=complex)
        p = self.support
        return hs_norm(rho - p @ rho @ p) <= \
            config.TOL.state_vanish * max(1.0, hs_norm(rho))

    def to_dict(self) -> dict:
        return {
            "support_rank": self.rank,
            "exists": self.exists,
            "unique": self.unique,
            "annihilator_matches_ideal": bool(self.annihilator_matches_ideal),
            "annihilator_residual": float(self.annihilator_residual),
            "sampled_worst_value": float(self.sampled_worst_value),
        }


def dirac_states(sys: ConstrainedSystem, d: MatrixSubspace | None = None,
                 samples: int = 10, rng_seed: int = 0) -> DiracStates:
    """Dirac support projection plus the numerical Thm-6.1 certificate.

    p projects onto the joint kernel of the squared constraints.  The
    largest C*-subalgebra annihilated by every Dirac state is
    {A : pA = Ap = 0} (positivity forces one-sided kernels from the
    two-sided compression), and the certificate checks that this subspace
    equals D and that sampled Dirac states vanish on D's basis.
    """
    n = sys.n
    f = sys.field_algebra
    if d is None:
        d = constrained_ideal(sys)
    h = np.zeros((n, n), dtype=complex)
    for c in sys.constraints:
        h = h + c @ c
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    cutoff = max(config.TOL.rank_rtol * max(float(w[-1]), 0.0),
                 config.TOL.rank_abs)
    kernel = w <= cutoff
    p = v[:, kernel] @ v[:, kernel].conj().T
    p = (p + p.conj().T) / 2
    rank = int(np.sum(kernel))
    annihilator = matspace.constrained_subspace(
        f.space,
        [(lambda a: a @ p, None), (lambda a: p @ a, None)],
    )
    eq, res = matspace.subspaces_equal(annihilator, d)
    worst = 0.0
    if rank > 0 and d.dim > 0:
        rng = np.random.default_rng(rng_seed)
        for _ in range(samples):
            x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            rho = p @ (x @ x.conj().T) @ p
            tr = float(np.trace(rho).real)
            if tr <= 0:
                continue
            rho = rho / tr
            worst = max(worst,
                        max(abs(np.trace(rho @ b)) for b in d.basis))
    return DiracStates(support=p, rank=rank,
                       annihilator_matches_ideal=eq,
                       annihilator_residual=res,
                       sampled_worst_value=float(worst))


def weak_commutant(f: CStarAlgebra, omega: MatrixSubspace) -> CStarAlgebra:
    """Omega_W = {x in F : [x, H] in Omega for all H in Omega}."""
    ok, res = f.contains(omega)
    if not ok:
        raise MembershipError("Omega is not contained in F", residual=res)
    conditions = [
        (lambda x, h=h: x @ h - h @ x, omega)
        for h in omega.basis
    ]
    space = matspace.constrained_subspace(f.space, conditions)
    return cstar_from_span(space, unit=np.eye(f.n, dtype=complex))


def multiplier_algebra(f: CStarAlgebra, omega: MatrixSubspace) -> CStarAlgebra:
    """M(Omega) = {x in F : x Omega <= Omega and Omega x <= Omega}."""
    ok, res = f.contains(omega)
    if not ok:
        raise MembershipError("Omega is not contained in F", residual=res)
    closed = _pair_residuals(omega.basis, omega.basis, omega,
                             lambda a, b: a @ b)
    if not closed.ok:
        raise NotASubalgebraError(
            "Omega is not a subalgebra; the multiplier algebra needs one",
            witness=closed.witness, residual=closed.worst_residual)
    for i, b in enumerate(omega.basis):
        ok, res = omega.member(b.conj().T)
        if not ok:
            raise NotASubalgebraError("Omega is not *-closed",
                                      witness=(i,), residual=res)
    conditions = []
    for h in omega.basis:
        conditions.append((lambda x, h=h: x @ h, omega))
        conditions.append((lambda x, h=h: h @ x, omega))
    space = matspace.constrained_subspace(f.space, conditions)
    return cstar_from_span(space, unit=np.eye(f.n, dtype=complex))


@dataclass
class TReductionResult:
    """Constrained ideal, observables, and the physical quotient algebra."""

    d: MatrixSubspace
    observables: CStarAlgebra
    quotient: CStarAlgebra
    support: np.ndarray
    dirac: DiracStates | None = None
    ljb_reduction: ReductionResult | None = None

    @property
    def dim_d(self) -> int:
        return self.d.dim // 2 if self.d.dim else 0

    def project(self, a: np.ndarray) -> np.ndarray:
        ok, res = self.observables.member(a)
        if not ok:
            raise MembershipError("element is not an observable", residual=res)
        return np.asarray(a, dtype=complex) - self.d.project(a)

    def to_dict(self) -> dict:
        out = {
            "d_dim": self.dim_d,
            "observables_dim": self.observables.dim_complex,
            "quotient_dim": self.quotient.dim_complex,
        }
        if self.dirac is not None:
            out["dirac"] = self.dirac.to_dict()
        return out


def _quotient_cstar(observables: CStarAlgebra, d: MatrixSubspace,
                    rng_seed: int = 0):
    """O / D on canonical representatives, with re-projected product."""
    carrier = matspace.complement_within(observables.space, d)
    n = observables.n
    if d.dim == 0:
        e = np.zeros((n, n), dtype=complex)
    else:
        e = support_projection(d, observables)
    compression = np.eye(n, dtype=complex) - e
    unit = None
    if observables.unit is not None and carrier.dim:
        unit = observables.unit - d.project(observables.unit)
    quotient = cstar_from_span(carrier, unit=unit, projected=True,
                               compression=compression)
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    for _ in range(10 if quotient.dim_complex else 0):
        a = quotient.random_element(rng)
        b = quotient.random_element(rng)
        c = quotient.random_element(rng)
        scale = 1.0 + hs_norm(a) * hs_norm(b) * hs_norm(c)
        worst = max(worst, hs_norm(
            quotient.product(quotient.product(a, b), c)
            - quotient.product(a, quotient.product(b, c))) / scale)
    if worst > config.TOL.closure * 10:
        raise TheoremViolationError(
            f"quotient product is not associative (residual {worst:.3e})")
    return quotient, e


def t_reduce(sys: ConstrainedSystem) -> TReductionResult:
    """Full T-reduction with the Thm-6.2 certificate D_W = M(D).

    A mismatch between the weak commutant and the multiplier algebra raises
    a theorem-violation error; it indicates a tolerance problem, never a
    valid counterexample.
    """
    f = sys.field_algebra
    d = constrained_ideal(sys)
    observables = weak_commutant(f, d)
    multipliers = multiplier_algebra(f, d)
    eq, res = matspace.subspaces_equal(observables.space, multipliers.space)
    if not eq:
        raise TheoremViolationError(
            f"weak commutant differs from the multiplier algebra "
            f"(dims {observables.dim_complex} vs {multipliers.dim_complex}, "
            f"residual {res:.3e})")
    ok, res = observables.member(np.eye(f.n, dtype=complex))
    if not ok:
        raise TheoremViolationError("observable algebra lost the unit")
    quotient, e = _quotient_cstar(observables, d)
    if quotient.dim_complex != observables.dim_complex - d.dim // 2:
        raise TheoremViolationError("quotient dimension identity failed")
    dirac = dirac_states(sys, d=d)
    return TReductionResult(d=d, observables=observables, quotient=quotient,
                            support=e, dirac=dirac)


@dataclass
class EquivalenceCertificate:
    """Per-clause outcome of the associative / Lie-Jordan equivalence check."""

    observables_match_normalizer: bool
    clause_a_residual: float
    lj_ideal: StructureCheck
    associative_ideal: StructureCheck
    quotient_dims: tuple
    quotients_match: bool
    product_residual: float
    bracket_residual: float
    norm_residual: float

    @property
    def clause_b_consistent(self) -> bool:
        return self.lj_ideal.ok == self.associative_ideal.ok

    @property
    def passed(self) -> bool:
        return (self.observables_match_normalizer
                and self.clause_b_consistent
                and self.quotients_match
                and self.quotient_dims[0] == self.quotient_dims[1]
                and max(self.product_residual, self.bracket_residual,
                        self.norm_residual) <= config.TOL.axiom)

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "clause_a": {
                "observables_match_normalizer":
                    bool(self.observables_match_normalizer),
                "residual": float(self.clause_a_residual),
            },
            "clause_b": {
                "lj_ideal": self.lj_ideal.to_dict(),
                "associative_ideal": self.associative_ideal.to_dict(),
                "consistent": bool(self.clause_b_consistent),
            },
            "clause_c": {
                "dims": list(self.quotient_dims),
                "carriers_match": bool(self.quotients_match),
                "product_residual": float(self.product_residual),
                "bracket_residual": float(self.bracket_residual),
                "norm_residual": float(self.norm_residual),
            },
        }


def verify_equivalence(sys: ConstrainedSystem,
                       treduction: TReductionResult | None = None,
                       rng_seed: int = 0) -> EquivalenceCertificate:
    """Certify that T-reduction equals the Lie-Jordan reduction.

    (a) the Hermitian part of O is the normalizer of J = D_sa inside
    L = F_sa; (b) J is a Lie-Jordan ideal of the normalizer exactly when D
    is a bilateral ideal of O, both sides computed independently; (c) the
    quotient N_J / J coincides with the Hermitian part of O / D on the nose:
    same canonical carrier, matching products, matching quotient norms.
    """
    t = treduction or t_reduce(sys)
    f = sys.field_algebra
    eye = np.eye(f.n, dtype=complex)
    l_alg = ljb_algebra(f.hermitian_part(), sys.params, unit=eye)
    j_sa = matspace.hermitian_part(t.d)
    n_alg = normalizer(l_alg, j_sa)

    o_sa = matspace.hermitian_part(t.observables.space)
    match_a, res_a = matspace.subspaces_equal(o_sa, n_alg.carrier)

    lj_check = _lj_ideal_in(n_alg, j_sa)
    left = _pair_residuals(t.observables.space.basis, t.d.basis, t.d,
                           lambda a, x: a @ x)
    right = _pair_residuals(t.observables.space.basis, t.d.basis, t.d,
                            lambda a, x: x @ a)
    if left.worst_residual >= right.worst_residual:
        assoc_check = StructureCheck(left.ok and right.ok,
                                     left.worst_residual, left.witness)
    else:
        assoc_check = StructureCheck(left.ok and right.ok,
                                     right.worst_residual, right.witness)

    lj_quotient, e = _quotient_algebra(n_alg, j_sa)
    qc_sa = matspace.hermitian_part(t.quotient.space)
    match_c, _ = matspace.subspaces_equal(lj_quotient.carrier, qc_sa)
    dims = (lj_quotient.dim, t.quotient.dim_complex)

    lam = sys.params.lam
    prod_res = brack_res = norm_res = 0.0
    rng = np.random.default_rng(rng_seed)
    basis = lj_quotient.carrier.basis
    for i in range(len(basis)):
        for j in range(len(basis)):
            qi, qj = basis[i], basis[j]
            ab = t.quotient.product(qi, qj)
            ba = t.quotient.product(qj, qi)
            prod_res = max(prod_res, hs_norm(
                lj_quotient.jordan(qi, qj) - (ab + ba) / 2))
            brack_res = max(brack_res, hs_norm(
                lj_quotient.bracket(qi, qj) - 1j * lam * (ab - ba)))
    for _ in range(10 if lj_quotient.dim else 0):
        q = lj_quotient.random_element(rng)
        norm_res = max(norm_res,
                       abs(lj_quotient.norm(q) - t.quotient.norm(q))
                       / (1.0 + lj_quotient.norm(q)))
    return EquivalenceCertificate(
        observables_match_normalizer=match_a,
        clause_a_residual=res_a,
        lj_ideal=lj_check,
        associative_ideal=assoc_check,
        quotient_dims=dims,
        quotients_match=match_c,
        product_residual=prod_res,
        bracket_residual=brack_res,
        norm_residual=norm_res,
    )


def complexified_ideal_reduction(alg: LJBAlgebra,
                                 j: MatrixSubspace) -> TReductionResult:
    """Ideal reduction pushed to the complexified algebras.

    Forms O = N_J + iN_J and D = J + iJ, verifies D ^ O is a bilateral
    associative ideal of O, and certifies that the Hermitian part of
    O / (D ^ O) is exactly the Lie-Jordan quotient.
    """
    check = is_jordan_ideal(alg, j)
    if not check.ok:
        raise NotAnIdealError("J is not a Jordan ideal of L",
                              witness=check.witness,
                              residual=check.worst_residual)
    r = reduce_by_ideal(alg, j)
    observables = complexify(r.normalizer)
    d_full = matspace.complex_closure(j)
    d_cap = matspace.intersect(d_full, observables.space)
    eq, res = matspace.subspaces_equal(
        d_cap, matspace.complex_closure(r.reducing_ideal))
    if not eq:
        raise TheoremViolationError(
            f"D ^ O differs from the complexified reducing ideal "
            f"(residual {res:.3e})")
    for kind, chk in (
        ("left", _pair_residuals(observables.space.basis, d_cap.basis, d_cap,
                                 lambda a, x: a @ x)),
        ("right", _pair_residuals(observables.space.basis, d_cap.basis, d_cap,
                                  lambda a, x: x @ a)),
    ):
        if not chk.ok:
            raise TheoremViolationError(
                f"D ^ O is not a bilateral ideal of O ({kind} products, "
                f"residual {chk.worst_residual:.3e})")
    quotient, e = _quotient_cstar(observables, d_cap)
    eq, _ = matspace.subspaces_equal(
        matspace.hermitian_part(quotient.space), r.quotient.carrier)
    if not eq or quotient.dim_complex != r.quotient.dim:
        raise TheoremViolationError(
            "Hermitian part of the complexified quotient does not match the "
            "Lie-Jordan quotient")
    return TReductionResult(d=d_cap, observables=observables,
                            quotient=quotient, support=e, dirac=None,
                            ljb_reduction=r)

"""Lie-Jordan structure on Hermitian matrix subspaces.

The two products on Hermitian matrices are

    a o b   = (ab + ba) / 2                (Jordan, commutative)
    [a,b]   = i lambda (ab - ba)           (scaled Lie bracket, Hermitian)

subject to kappa * lambda^2 = 1/4, which makes

    a . b   = a o b - i sqrt(kappa) [a,b]

an associative product on the complexification; with lambda = 1/2, kappa = 1
it is the ordinary matrix product.  This module provides the products, the
algebra containers (real Lie-Jordan and complexified C*-flavoured), and the
runtime verifiers for the structural identities: Jordan identity, Jacobi,
Leibniz, the associator relation, the Banach norm conditions, the dynamical
correspondence, and the one-parameter Jordan automorphism groups generated
by inner derivations.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import config, matspace
from .errors import (
    ClosureError,
    DimensionMismatchError,
    HermiticityError,
    MembershipError,
    ParameterError,
)
from .matspace import MatrixSubspace, hs_norm

PARAM_CONSTRAINT_TOL = 1e-12


@dataclass(frozen=True)
class LJBParams:
    """Scaling of the Lie bracket and the associator coefficient."""

    lam: float = 0.5
    kappa: float = 1.0

    def __post_init__(self):
        if self.kappa <= 0:
            raise ParameterError(f"kappa must be positive, got {self.kappa}")
        if abs(self.kappa * self.lam ** 2 - 0.25) > PARAM_CONSTRAINT_TOL:
            raise ParameterError(
                f"kappa * lambda^2 must equal 1/4, got {self.kappa * self.lam ** 2}"
            )


def _check_hermitian_pair(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"incompatible shapes {a.shape} and {b.shape}")
    for m in (a, b):
        if np.linalg.norm(m - m.conj().T) > \
                config.TOL.ortho * max(1.0, np.linalg.norm(m)):
            raise HermiticityError("product arguments must be Hermitian")
    return a, b


def jordan_product(a, b) -> np.ndarray:
    """(ab + ba) / 2 on Hermitian matrices."""
    a, b = _check_hermitian_pair(a, b)
    return (a @ b + b @ a) / 2


def lie_bracket(a, b, params: LJBParams) -> np.ndarray:
    """i lambda (ab - ba); Hermitian for Hermitian arguments."""
    a, b = _check_hermitian_pair(a, b)
    return 1j * params.lam * (a @ b - b @ a)


def associative_product(a, b, params: LJBParams) -> np.ndarray:
    """a o b - i sqrt(kappa) [a,b], extended complex-bilinearly.

    Equal to the plain matrix product when lambda > 0 on the constraint
    curve kappa * lambda^2 = 1/4.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"incompatible shapes {a.shape} and {b.shape}")
    p, q = a @ b, b @ a
    return (p + q) / 2 + np.sqrt(params.kappa) * params.lam * (p - q)


def operator_norm(a) -> float:
    """Largest singular value, the unique C*-norm in finite dimension."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def find_jordan_unit(space: MatrixSubspace) -> np.ndarray | None:
    """Least-squares solve for e in the span with e o b = b for all basis b."""
    k = space.dim
    if k == 0:
        return None
    n = space.n
    m = np.empty((k * space.ambient.field_dim, k))
    rhs = np.empty(k * space.ambient.field_dim)
    d = space.ambient.field_dim
    for j, bj in enumerate(space.basis):
        for i, bi in enumerate(space.basis):
            m[j * d:(j + 1) * d, i] = matspace.flatten((bi @ bj + bj @ bi) / 2)
        rhs[j * d:(j + 1) * d] = matspace.flatten(bj)
    t, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    t[np.abs(t) <= 1e-12 * max(1.0, np.abs(t).max())] = 0.0
    e = space.from_coefficients(t)
    worst = max(
        hs_norm((e @ bj + bj @ e) / 2 - bj) / max(1.0, hs_norm(bj))
        for bj in space.basis
    )
    if worst > config.TOL.closure:
        return None
    return (e + e.conj().T) / 2


@dataclass(frozen=True)
class LJBAlgebra:
    """A Lie-Jordan algebra carried by a Hermitian matrix subspace.

    Quotient algebras set `projected`, which re-projects products onto the
    carrier (the canonical-representative realization), and `compression`,
    the central projection complement I - e that computes the quotient norm
    as the norm of the compressed representative.
    """

    carrier: MatrixSubspace
    params: LJBParams = field(default_factory=LJBParams)
    unit: np.ndarray | None = None
    projected: bool = False
    compression: np.ndarray | None = None

    def __post_init__(self):
        if not self.carrier.hermitian:
            raise HermiticityError("LJB carrier must be a Hermitian subspace")
        if self.unit is not None:
            u = np.asarray(self.unit, dtype=complex)
            ok, res = self.carrier.member(u)
            if not ok:
                raise MembershipError("unit is not in the carrier", residual=res)
            u.setflags(write=False)
            object.__setattr__(self, "unit", u)

    @property
    def dim(self) -> int:
        return self.carrier.dim

    @property
    def n(self) -> int:
        return self.carrier.n

    def jordan(self, a, b) -> np.ndarray:
        p = jordan_product(a, b)
        return self.carrier.project(p) if self.projected else p

    def bracket(self, a, b) -> np.ndarray:
        p = lie_bracket(a, b, self.params)
        return self.carrier.project(p) if self.projected else p

    def _compress(self, a) -> np.ndarray:
        if self.compression is None:
            return np.asarray(a, dtype=complex)
        return self.compression @ a @ self.compression

    def norm(self, a) -> float:
        return operator_norm(self._compress(a))

    def is_positive(self, a) -> tuple[bool, float]:
        """Positive-cone membership: nonnegative spectrum up to tolerance."""
        y = self._compress(a)
        y = (y + y.conj().T) / 2
        if y.size == 0:
            return True, 0.0
        lo = float(np.linalg.eigvalsh(y)[0])
        return lo >= -config.TOL.psd * max(1.0, operator_norm(y)), lo

    def random_element(self, rng: np.random.Generator, scale: float = 1.0):
        return self.carrier.random_element(rng, scale)


def ljb_algebra(carrier: MatrixSubspace, params: LJBParams | None = None,
                unit="auto") -> LJBAlgebra:
    """Wrap a Hermitian subspace; unit='auto' solves for a Jordan unit."""
    params = params or LJBParams()
    if isinstance(unit, str) and unit == "auto":
        unit = find_jordan_unit(carrier)
    return LJBAlgebra(carrier=carrier, params=params, unit=unit)


# ---------------------------------------------------------------------------
# verification reports


@dataclass
class AxiomReport:
    residuals: dict
    passed: bool
    worst: float
    witness: tuple | None = None

    def to_dict(self) -> dict:
        out = {"passed": bool(self.passed), "worst_residual": float(self.worst)}
        out["residuals"] = {k: float(v) for k, v in self.residuals.items()}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def _finalize(residuals, witness=None) -> AxiomReport:
    worst = max(residuals.values()) if residuals else 0.0
    return AxiomReport(
        residuals=residuals,
        passed=worst <= config.TOL.axiom,
        worst=worst,
        witness=witness,
    )


def closure_residuals(alg: LJBAlgebra) -> tuple[float, tuple | None]:
    """Worst membership residual of plain basis-pair products.

    Exhaustive over all pairs; meaningful only for non-projected carriers
    (projected products land in the carrier by construction).
    """
    space = alg.carrier
    k = space.dim
    if k == 0:
        return 0.0, None
    b = space.basis
    ab = np.einsum("iuv,jvw->ijuw", b, b)
    ba = np.einsum("juv,ivw->ijuw", b, b)
    jo = (ab + ba) / 2
    li = 1j * alg.params.lam * (ab - ba)
    res_j = matspace.batch_residuals(space, jo.reshape(k * k, space.n, space.n))
    res_l = matspace.batch_residuals(space, li.reshape(k * k, space.n, space.n))
    res = np.maximum(res_j, res_l)
    idx = int(np.argmax(res))
    return float(res[idx]), (idx // k, idx % k)


def verify_ljb_axioms(alg: LJBAlgebra, trials: int = 20,
                      rng_seed: int = 0) -> AxiomReport:
    """Max residuals of the structural identities over random elements.

    Checks the Jordan identity, Jacobi, Leibniz, the associator relation with
    the algebra's kappa, the three Banach norm conditions (with the algebra's
    norm, which is the quotient norm on quotient carriers), closure of all
    basis pairs under both products, and the unit laws when a unit is set.
    """
    rng = np.random.default_rng(rng_seed)
    jordan, bracket, norm = alg.jordan, alg.bracket, alg.norm
    kappa = alg.params.kappa
    res = {
        "jordan_identity": 0.0,
        "jacobi": 0.0,
        "leibniz": 0.0,
        "associator": 0.0,
        "norm_submultiplicative": 0.0,
        "norm_square": 0.0,
        "norm_monotone": 0.0,
    }
    if alg.dim:
        for _ in range(trials):
            a = alg.random_element(rng)
            b = alg.random_element(rng)
            c = alg.random_element(rng)
            na, nb, nc = hs_norm(a), hs_norm(b), hs_norm(c)
            a2 = jordan(a, a)
            s = 1.0 + na * na * nb * na
            res["jordan_identity"] = max(
                res["jordan_identity"],
                hs_norm(jordan(jordan(a2, b), a) - jordan(a2, jordan(b, a))) / s,
            )
            s = 1.0 + na * nb * nc
            res["jacobi"] = max(
                res["jacobi"],
                hs_norm(
                    bracket(bracket(a, b), c)
                    + bracket(bracket(c, a), b)
                    + bracket(bracket(b, c), a)
                ) / s,
            )
            res["leibniz"] = max(
                res["leibniz"],
                hs_norm(
                    bracket(a, jordan(b, c))
                    - jordan(bracket(a, b), c)
                    - jordan(b, bracket(a, c))
                ) / s,
            )
            res["associator"] = max(
                res["associator"],
                hs_norm(
                    jordan(jordan(a, b), c)
                    - jordan(a, jordan(b, c))
                    - kappa * bracket(b, bracket(c, a))
                ) / s,
            )
            qa, qb = norm(a), norm(b)
            res["norm_submultiplicative"] = max(
                res["norm_submultiplicative"],
                max(0.0, norm(jordan(a, b)) - qa * qb) / (1.0 + qa * qb),
            )
            res["norm_square"] = max(
                res["norm_square"],
                abs(norm(jordan(a, a)) - qa * qa) / (1.0 + qa * qa),
            )
            res["norm_monotone"] = max(
                res["norm_monotone"],
                max(0.0, norm(jordan(a, a)) - norm(jordan(a, a) + jordan(b, b)))
                / (1.0 + norm(jordan(a, a))),
            )
    witness = None
    if not alg.projected:
        worst, witness = closure_residuals(alg)
        res["closure"] = worst
    if alg.unit is not None:
        u = alg.unit
        res["unit_member"] = alg.carrier.member(u)[1]
        res["unit_law"] = max(
            (hs_norm(alg.jordan(u, b) - b) / max(1.0, hs_norm(b))
             for b in alg.carrier.basis),
            default=0.0,
        )
    return _finalize(res, witness)


def verify_dynamical_correspondence(alg: LJBAlgebra, trials: int = 20,
                                    rng_seed: int = 0) -> AxiomReport:
    """Check that a -> [a, .] is a dynamical correspondence.

    With psi_a = [a, .] and delta_a = a o ., verifies on random triples
    kappa [psi_a, psi_b] c + [delta_a, delta_b] c = 0, psi_a a = 0,
    and the antisymmetry psi_a b = -psi_b a.
    """
    rng = np.random.default_rng(rng_seed)
    jordan, bracket = alg.jordan, alg.bracket
    kappa = alg.params.kappa
    res = {"correspondence": 0.0, "skew": 0.0, "antisymmetry": 0.0}
    for _ in range(trials if alg.dim else 0):
        a = alg.random_element(rng)
        b = alg.random_element(rng)
        c = alg.random_element(rng)
        s = 1.0 + hs_norm(a) * hs_norm(b) * hs_norm(c)
        lhs = kappa * (bracket(a, bracket(b, c)) - bracket(b, bracket(a, c)))
        rhs = jordan(a, jordan(b, c)) - jordan(b, jordan(a, c))
        res["correspondence"] = max(res["correspondence"], hs_norm(lhs + rhs) / s)
        res["skew"] = max(res["skew"], hs_norm(bracket(a, a)) / (1.0 + hs_norm(a) ** 2))
        res["antisymmetry"] = max(
            res["antisymmetry"],
            hs_norm(bracket(a, b) + bracket(b, a)) / (1.0 + hs_norm(a) * hs_norm(b)),
        )
    if alg.unit is not None:
        res["unit_central"] = max(
            (hs_norm(alg.bracket(alg.unit, b)) / max(1.0, hs_norm(b))
             for b in alg.carrier.basis),
            default=0.0,
        )
    return _finalize(res)


def _derivation_matrix(alg: LJBAlgebra, a: np.ndarray) -> np.ndarray:
    """Coefficient matrix of x -> [a, x] on the carrier basis."""
    cols = [alg.carrier.coefficients(alg.bracket(a, b)) for b in alg.carrier.basis]
    return np.stack(cols, axis=1)


def verify_jordan_automorphism(alg: LJBAlgebra, a: np.ndarray, t_values,
                               trials: int = 8, rng_seed: int = 0) -> AxiomReport:
    """Check that exp(t [a, .]) is a Jordan automorphism preserving the cone.

    On plain matrix carriers the flow has the closed form
    Phi_t(b) = exp(i t lambda a) b exp(-i t lambda a); on quotient carriers
    it is computed as the exponential of the derivation in basis coordinates.
    Verifies Phi_t(b o c) = Phi_t(b) o Phi_t(c), that Phi_t maps the carrier
    into itself, and that squares stay in the positive cone.
    """
    ok, r = alg.carrier.member(a)
    if not ok:
        raise MembershipError("automorphism generator is not in the carrier",
                              residual=r)
    rng = np.random.default_rng(rng_seed)
    res = {"automorphism": 0.0, "carrier_stable": 0.0, "cone_preserved": 0.0}
    pairs = [(alg.random_element(rng), alg.random_element(rng))
             for _ in range(trials)]
    for t in np.atleast_1d(t_values):
        if alg.projected:
            flow = expm(float(t) * _derivation_matrix(alg, a))

            def phi(x, flow=flow):
                return alg.carrier.from_coefficients(
                    flow @ alg.carrier.coefficients(x))
        else:
            u = expm(1j * float(t) * alg.params.lam * np.asarray(a, dtype=complex))

            def phi(x, u=u):
                return u @ x @ u.conj().T
        for b, c in pairs:
            s = 1.0 + hs_norm(b) * hs_norm(c)
            res["automorphism"] = max(
                res["automorphism"],
                hs_norm(phi(alg.jordan(b, c)) - alg.jordan(phi(b), phi(c))) / s,
            )
            img = phi(b)
            res["carrier_stable"] = max(
                res["carrier_stable"],
                alg.carrier.member(img)[1] / max(1.0, hs_norm(b)),
            )
            p = alg.jordan(b, b)
            _, lo = alg.is_positive(phi(p))
            res["cone_preserved"] = max(
                res["cone_preserved"], max(0.0, -lo) / (1.0 + hs_norm(p)))
    return _finalize(res)


# ---------------------------------------------------------------------------
# complexification


@dataclass(frozen=True)
class CStarAlgebra:
    """An associative *-closed complex matrix subspace with the spectral norm.

    `space` is the complex-closed real subspace (real dimension 2m);
    `complex_basis` holds m matrices orthonormal under tr(A^dag B).  Quotient
    algebras re-project products onto the carrier and compute norms through
    the compression I - e by the ideal's support projection.
    """

    space: MatrixSubspace
    complex_basis: np.ndarray
    unit: np.ndarray | None = None
    projected: bool = False
    compression: np.ndarray | None = None

    @property
    def dim_complex(self) -> int:
        return len(self.complex_basis)

    @property
    def n(self) -> int:
        return self.space.n

    def product(self, a, b) -> np.ndarray:
        p = np.asarray(a, dtype=complex) @ np.asarray(b, dtype=complex)
        return self.space.project(p) if self.projected else p

    @staticmethod
    def involution(a) -> np.ndarray:
        return np.asarray(a, dtype=complex).conj().T

    def norm(self, a) -> float:
        if self.compression is None:
            return operator_norm(a)
        return operator_norm(self.compression @ a @ self.compression)

    def member(self, v):
        return self.space.member(v)

    def contains(self, sub: MatrixSubspace):
        return self.space.contains(sub)

    def hermitian_part(self) -> MatrixSubspace:
        return matspace.hermitian_part(self.space)

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return self.space.random_element(rng)


def cstar_from_span(space: MatrixSubspace, unit=None, projected: bool = False,
                    compression=None, rng_seed: int = 0) -> CStarAlgebra:
    """Validate and wrap a complex-closed, *-closed, product-closed subspace."""
    cb = matspace.complex_orthonormal_basis(space)
    if 2 * len(cb) != space.dim:
        raise ClosureError(
            f"subspace is not closed under multiplication by i "
            f"(real dim {space.dim}, complex rank {len(cb)})"
        )
    for i, b in enumerate(space.basis):
        ok, r = space.member(b.conj().T)
        if not ok:
            raise ClosureError("subspace is not closed under the involution",
                               witness=(i,), residual=r)
    if not projected and space.dim:
        k = space.dim
        prods = np.einsum("iuv,jvw->ijuw", space.basis, space.basis)
        res = matspace.batch_residuals(space, prods.reshape(k * k, space.n, space.n))
        idx = int(np.argmax(res))
        if res[idx] > config.TOL.closure:
            raise ClosureError(
                "subspace is not closed under the associative product",
                witness=(idx // k, idx % k), residual=float(res[idx]),
            )
    alg = CStarAlgebra(space=space, complex_basis=cb, unit=unit,
                       projected=projected, compression=compression)
    if unit is not None:
        ok, r = space.member(unit)
        if not ok:
            raise MembershipError("unit is not in the algebra", residual=r)
        worst = max(
            (max(hs_norm(alg.product(unit, b) - b), hs_norm(alg.product(b, unit) - b))
             for b in space.basis),
            default=0.0,
        )
        if worst > config.TOL.closure * max(1.0, operator_norm(unit)):
            raise ClosureError("declared unit fails the unit law", residual=worst)
    rng = np.random.default_rng(rng_seed)
    for _ in range(3 if space.dim else 0):
        x = alg.random_element(rng)
        nx = alg.norm(x)
        if abs(alg.norm(alg.product(alg.involution(x), x)) - nx * nx) > \
                config.TOL.axiom * (1.0 + nx * nx):
            raise ClosureError("C*-identity fails on a random member")
    return alg


def complexify(alg: LJBAlgebra) -> CStarAlgebra:
    """The C*-algebra on L + iL with the associative product.

    Requires a Lie-Jordan closed carrier; its Hermitian part recovers the
    original carrier and the real dimension doubles.
    """
    if not alg.projected:
        worst, witness = closure_residuals(alg)
        if worst > config.TOL.closure:
            raise ClosureError(
                "carrier is not Lie-Jordan closed; cannot complexify",
                witness=witness, residual=worst,
            )
    space = matspace.complex_closure(alg.carrier)
    return cstar_from_span(
        space,
        unit=alg.unit,
        projected=alg.projected,
        compression=alg.compression,
    )

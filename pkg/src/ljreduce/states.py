"""States of Lie-Jordan algebras: positivity, reduction, and extension.

A real linear functional on a Hermitian carrier is represented by its
density matrix in the carrier's span (finite-dimensional Riesz
representation), omega(a) = Re tr(rho a).  Positivity is equivalent to
positive semidefiniteness of the Jordan Gram matrix G_ij = omega(b_i o b_j).

Reduction of a state to a quotient is evaluation on canonical
representatives.  Extension from a unital subalgebra to the full algebra is
a convex feasibility problem: find a PSD density matrix on the ambient
space matching the prescribed values, solved by Dykstra's alternating
projections between the affine matching set and the PSD cone.  The
extension lemma guarantees feasibility, so hitting the iteration cap
signals a numerical problem, not emptiness.
"""

from dataclasses import dataclass

import numpy as np

from . import config, matspace
from .core import LJBAlgebra
from .errors import (
    ConvergenceError,
    MembershipError,
    PreconditionError,
    StateError,
)
from .matspace import MatrixSubspace, hs_norm
from .reduction import ReductionResult


@dataclass(frozen=True)
class StateFunctional:
    """A real functional on an LJB carrier, held by its canonical density."""

    algebra: LJBAlgebra
    rho: np.ndarray
    values: np.ndarray

    @classmethod
    def from_density(cls, algebra: LJBAlgebra, rho: np.ndarray):
        """Functional tr(rho .), with rho projected into the carrier span."""
        rho = np.asarray(rho, dtype=complex)
        rho = (rho + rho.conj().T) / 2
        canonical = algebra.carrier.project(rho)
        values = algebra.carrier.coefficients(rho)
        canonical.setflags(write=False)
        values.setflags(write=False)
        return cls(algebra=algebra, rho=canonical, values=values)

    @classmethod
    def from_values(cls, algebra: LJBAlgebra, values: np.ndarray):
        values = np.asarray(values, dtype=float)
        rho = algebra.carrier.from_coefficients(values)
        return cls.from_density(algebra, rho)

    def __call__(self, a: np.ndarray) -> float:
        return float(np.real(np.vdot(self.rho, a)))

    def evaluate_complex(self, x: np.ndarray) -> complex:
        """Complex-linear extension to the complexified algebra."""
        return complex(np.trace(self.rho @ np.asarray(x, dtype=complex)))

    def gram(self) -> np.ndarray:
        """Jordan Gram matrix over the carrier basis."""
        basis = self.algebra.carrier.basis
        k = len(basis)
        g = np.empty((k, k))
        for i in range(k):
            for j in range(i, k):
                g[i, j] = g[j, i] = self(self.algebra.jordan(basis[i], basis[j]))
        return g


@dataclass
class StateReport:
    ok: bool
    normalization_error: float
    min_gram_eigenvalue: float

    def to_dict(self) -> dict:
        return {
            "is_state": bool(self.ok),
            "normalization_error": float(self.normalization_error),
            "min_gram_eigenvalue": float(self.min_gram_eigenvalue),
        }


def is_state(omega: StateFunctional) -> StateReport:
    """Normalization omega(1) = 1 and PSD Jordan Gram matrix."""
    alg = omega.algebra
    if alg.unit is None:
        raise PreconditionError("state test requires a unital algebra")
    norm_err = abs(omega(alg.unit) - 1.0)
    if alg.dim == 0:
        return StateReport(False, norm_err, 0.0)
    g = omega.gram()
    min_eig = float(np.linalg.eigvalsh((g + g.T) / 2)[0])
    scale = max(1.0, float(np.abs(g).max()))
    ok = norm_err <= config.TOL.state_vanish and \
        min_eig >= -config.TOL.psd * scale
    return StateReport(ok, norm_err, min_eig)


def vanishes_on(omega: StateFunctional, s: MatrixSubspace) -> tuple[bool, float]:
    """Whether |omega(b)| <= tol on every basis element of s."""
    ok, res = omega.algebra.carrier.contains(s)
    if not ok:
        raise MembershipError("subspace is not inside the state's algebra",
                              residual=res)
    worst = max((abs(omega(b)) for b in s.basis), default=0.0)
    return worst <= config.TOL.state_vanish, worst


def nj0_equivalent(omega1: StateFunctional, omega2: StateFunctional,
                   n_space: MatrixSubspace) -> tuple[bool, float]:
    """Two states are equivalent iff they agree on the normalizer subspace."""
    if omega1.algebra.carrier is not omega2.algebra.carrier and \
            not matspace.subspaces_equal(omega1.algebra.carrier,
                                         omega2.algebra.carrier)[0]:
        raise PreconditionError("states live on different algebras")
    worst = max((abs(omega1(b) - omega2(b)) for b in n_space.basis),
                default=0.0)
    return worst <= config.TOL.state_vanish, worst


@dataclass(frozen=True)
class StateClass:
    """An equivalence class of states: agreement on a fixed subspace."""

    base: StateFunctional
    equivalence_subspace: MatrixSubspace

    def contains(self, omega: StateFunctional) -> bool:
        return nj0_equivalent(self.base, omega, self.equivalence_subspace)[0]


def reduce_state(omega: StateFunctional, result: ReductionResult) -> StateFunctional:
    """Induced state on the quotient, evaluated on canonical representatives.

    Requires the restriction to the normalizer to be a state vanishing on
    the reducing ideal; the induced functional is then automatically
    normalized and positive, which is re-verified.
    """
    n_alg = result.normalizer
    restricted = StateFunctional.from_density(n_alg, omega.rho)
    rep = is_state(restricted)
    if not rep.ok:
        raise PreconditionError(
            f"restriction to the normalizer is not a state "
            f"(normalization error {rep.normalization_error:.3e}, "
            f"min Gram eigenvalue {rep.min_gram_eigenvalue:.3e})")
    ok, worst = vanishes_on(restricted, result.reducing_ideal)
    if not ok:
        raise PreconditionError(
            f"state does not vanish on the reducing ideal "
            f"(worst value {worst:.3e})")
    reduced = StateFunctional.from_density(result.quotient, omega.rho)
    if result.quotient.dim:
        rep = is_state(reduced)
        if not rep.ok:
            raise StateError(
                f"induced functional failed the state test on the quotient "
                f"(min Gram eigenvalue {rep.min_gram_eigenvalue:.3e})")
    return reduced


def _dykstra(n: int, basis: np.ndarray, targets: np.ndarray):
    """Nearest-to-zero PSD matrix satisfying <b_i, x> = t_i.

    Dykstra's scheme between the PSD cone and the affine matching set; the
    basis rows must be orthonormal, which makes the affine projection a
    single correction sweep.  Returns (matrix, iterations, residuals).
    """
    tol = config.TOL.dykstra
    b = np.asarray(basis, dtype=complex)
    x = np.zeros((n, n), dtype=complex)
    p = np.zeros_like(x)
    q = np.zeros_like(x)

    def affine(z):
        r = np.real(np.einsum("kij,ij->k", b.conj(), z)) - targets
        return z - np.einsum("k,kij->ij", r, b)

    y = x
    for it in range(1, config.TOL.dykstra_max_iter + 1):
        z = x + p
        z = (z + z.conj().T) / 2
        w, v = np.linalg.eigh(z)
        y = (v * np.clip(w, 0.0, None)) @ v.conj().T
        p = z - y
        x = affine(y + q)
        q = y + q - x
        affine_res = float(np.linalg.norm(
            np.real(np.einsum("kij,ij->k", b.conj(), y)) - targets))
        psd_violation = max(0.0, -float(np.linalg.eigvalsh(
            (x + x.conj().T) / 2)[0]))
        if affine_res <= tol and psd_violation <= tol:
            return y, it, (affine_res, psd_violation)
    raise ConvergenceError(
        "state extension did not converge within the iteration cap",
        iterations=config.TOL.dykstra_max_iter,
        residuals=(affine_res, psd_violation))


def extend_state(omega_prime: StateFunctional, target: LJBAlgebra) -> StateFunctional:
    """Positive normalized extension from a unital subalgebra.

    The extension lemma (Hahn-Banach plus norm preservation) guarantees a
    positive extension exists whenever the unit of the target lies in the
    subalgebra, so the feasibility problem below always has a solution.
    """
    sub = omega_prime.algebra
    ok, res = target.carrier.contains(sub.carrier)
    if not ok:
        raise MembershipError("subalgebra is not contained in the target",
                              residual=res)
    if target.unit is None:
        raise PreconditionError("extension requires a unital target algebra")
    ok, res = sub.carrier.member(target.unit)
    if not ok:
        raise PreconditionError("the target's unit must lie in the subalgebra")
    rep = is_state(omega_prime)
    if not rep.ok:
        raise PreconditionError(
            f"functional to extend is not a state "
            f"(min Gram eigenvalue {rep.min_gram_eigenvalue:.3e})")
    rho, _, _ = _dykstra(target.n, sub.carrier.basis, omega_prime.values)
    extended = StateFunctional.from_density(target, rho)
    check = is_state(extended)
    if not check.ok:
        raise StateError(
            f"extension failed the state test "
            f"(min Gram eigenvalue {check.min_gram_eigenvalue:.3e})")
    return extended


def random_quotient_state(result: ReductionResult,
                          rng: np.random.Generator) -> StateFunctional:
    """Random state on a quotient algebra via its compressed corner.

    The compression a -> (I-e) a (I-e) is an isomorphism onto a corner of
    the ambient matrix algebra, so tr(sigma .) with a PSD sigma supported on
    that corner is positive for the quotient products.
    """
    q = result.quotient
    if q.dim == 0:
        raise PreconditionError("the zero algebra has no states")
    n = q.n
    c = np.eye(n, dtype=complex) - result.support
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    sigma = c @ (x @ x.conj().T) @ c
    tr = float(np.trace(sigma).real)
    if tr <= 1e-12:
        raise PreconditionError("degenerate corner sample")
    sigma /= tr
    return StateFunctional.from_density(q, sigma)


@dataclass
class CorrespondenceCertificate:
    """Round-trip evidence for the reduced-state correspondence."""

    samples: int
    worst_roundtrip: float
    worst_equivalence: float

    @property
    def passed(self) -> bool:
        return (self.worst_roundtrip <= config.TOL.roundtrip
                and self.worst_equivalence <= config.TOL.roundtrip)

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "samples": self.samples,
            "worst_roundtrip": float(self.worst_roundtrip),
            "worst_equivalence": float(self.worst_equivalence),
        }


def verify_state_correspondence(target: LJBAlgebra, result: ReductionResult,
                                samples: int = 10,
                                rng_seed: int = 0) -> CorrespondenceCertificate:
    """Certify the bijection between reduced states and equivalence classes.

    (i) a sampled quotient state, pulled back to the normalizer, extended to
    the full algebra, and reduced again, reproduces its values; (ii) the
    extension obtained after reducing an admissible state is equivalent to
    the original, i.e. agrees on the normalizer.
    """
    n_alg = result.normalizer
    worst_rt = 0.0
    worst_eq = 0.0
    done = 0
    rng = np.random.default_rng(rng_seed)
    if result.quotient.dim:
        for _ in range(samples):
            tilde = random_quotient_state(result, rng)
            pulled = StateFunctional.from_density(n_alg, tilde.rho)
            omega = extend_state(pulled, target)
            back = reduce_state(omega, result)
            worst_rt = max(worst_rt,
                           float(np.abs(back.values - tilde.values).max()))
            again = extend_state(
                StateFunctional.from_density(n_alg, back.rho), target)
            _, diff = nj0_equivalent(omega, again, n_alg.carrier)
            worst_eq = max(worst_eq, diff)
            done += 1
    return CorrespondenceCertificate(samples=done, worst_roundtrip=worst_rt,
                                     worst_equivalence=worst_eq)

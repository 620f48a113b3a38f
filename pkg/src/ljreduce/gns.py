"""GNS representations of finite-dimensional C*-algebras.

The construction is pure linear algebra here: the sesquilinear form
(X, Y) -> omega(X^dag Y) on a complex-orthonormal basis of the algebra has a
PSD Gram matrix; its kernel spans the Gelfand ideal, its positive
eigenpairs give an orthonormal basis of cosets, and left multiplication
expressed in that basis is the representation.  No completion is involved:
the pre-Hilbert space is already complete in finite dimension.

The reduced-state equivalence realizes the representation space of a
reduced state in two ways, as the GNS space of the quotient algebra and as
cosets of (N + J) + i(N + J) inside the big algebra under the extension's
form, and verifies that matching coset generators defines a unitary
intertwiner.
"""

from dataclasses import dataclass, field

import numpy as np

from . import config, matspace
from .core import CStarAlgebra, LJBAlgebra, complexify
from .errors import PreconditionError, StateError
from .matspace import MatrixSubspace
from .reduction import ReductionResult
from .states import StateFunctional, is_state, reduce_state, vanishes_on


def _state_gram(algebra: CStarAlgebra, omega: StateFunctional) -> np.ndarray:
    cb = algebra.complex_basis
    m = len(cb)
    s = np.empty((m, m), dtype=complex)
    for j in range(m):
        bj = algebra.involution(cb[j])
        for k in range(m):
            s[j, k] = omega.evaluate_complex(
                algebra.product(bj, cb[k]))
    return (s + s.conj().T) / 2


def _check_state_on(algebra: CStarAlgebra, omega: StateFunctional,
                    s: np.ndarray) -> None:
    if algebra.unit is None:
        raise PreconditionError("GNS construction requires a unital algebra")
    w = np.linalg.eigvalsh(s)
    scale = max(1.0, float(w[-1]) if w.size else 1.0)
    if w.size and w[0] < -config.TOL.psd * scale:
        raise StateError(
            f"functional is not positive on the algebra "
            f"(min form eigenvalue {w[0]:.3e})")
    norm_err = abs(omega.evaluate_complex(algebra.unit) - 1.0)
    if norm_err > config.TOL.state_vanish:
        raise StateError(f"functional is not normalized (error {norm_err:.3e})")


def _canonical_phase(vec: np.ndarray) -> np.ndarray:
    j = int(np.argmax(np.abs(vec)))
    if abs(vec[j]) == 0:
        return vec
    return vec * (abs(vec[j]) / vec[j])


def gelfand_ideal(algebra: CStarAlgebra, omega: StateFunctional) -> MatrixSubspace:
    """J_omega = {X : omega(X^dag X) = 0}, the kernel of the GNS form.

    Computed from the eigendecomposition of the form's Gram matrix; the
    result is complex-closed and verified to be a left ideal.
    """
    s = _state_gram(algebra, omega)
    _check_state_on(algebra, omega, s)
    m = len(algebra.complex_basis)
    if m == 0:
        return matspace.zero_subspace(algebra.space.ambient)
    w, v = np.linalg.eigh(s)
    cutoff = max(config.TOL.gelfand_rtol * max(float(w[-1]), 0.0),
                 config.TOL.rank_abs)
    null_vectors = [v[:, i] for i in range(m) if w[i] <= cutoff]
    mats = [np.tensordot(vec, algebra.complex_basis, axes=(0, 0))
            for vec in null_vectors]
    ideal = matspace.span(algebra.space.ambient,
                          mats + [1j * z for z in mats])
    worst = 0.0
    for b in algebra.complex_basis:
        for z in mats:
            _, res = ideal.member(algebra.product(b, z))
            worst = max(worst, res)
    if worst > config.TOL.closure * 100:
        raise StateError(
            f"Gelfand kernel is not a left ideal (residual {worst:.3e}); "
            f"the functional is probably not positive")
    return ideal


@dataclass
class GNSRep:
    """Cyclic representation of a finite-dimensional algebra from a state."""

    algebra: CStarAlgebra
    state: StateFunctional
    gelfand: MatrixSubspace
    hilbert_dim: int
    coset_reps: np.ndarray           # (r, n, n) representatives of the ONB cosets
    rep_matrices: np.ndarray         # (m, r, r) aligned with algebra.complex_basis
    cyclic_vector: np.ndarray        # (r,)
    residuals: dict = field(default_factory=dict)

    def represent(self, x: np.ndarray) -> np.ndarray:
        """pi(x) for any x in the algebra, by expansion in the complex basis."""
        coeffs = np.array([
            np.trace(b.conj().T @ x) for b in self.algebra.complex_basis
        ])
        return np.tensordot(coeffs, self.rep_matrices, axes=(0, 0))

    @property
    def passed(self) -> bool:
        return max(self.residuals.values(), default=0.0) <= config.TOL.gns

    def to_dict(self) -> dict:
        return {
            "hilbert_dim": self.hilbert_dim,
            "gelfand_dim": self.gelfand.dim // 2,
            "passed": bool(self.passed),
            "residuals": {k: float(v) for k, v in self.residuals.items()},
        }


def gns(algebra: CStarAlgebra, omega: StateFunctional) -> GNSRep:
    """GNS representation with all structural invariants verified.

    Builds the orthonormal coset basis from the positive eigenpairs of the
    form omega(X^dag Y), assembles left multiplication in that basis, and
    records residuals for multiplicativity, *-compatibility, unitality,
    state recovery and cyclicity.
    """
    cb = algebra.complex_basis
    m = len(cb)
    s = _state_gram(algebra, omega)
    _check_state_on(algebra, omega, s)
    w, v = np.linalg.eigh(s)
    cutoff = max(config.TOL.gelfand_rtol * max(float(w[-1]), 0.0),
                 config.TOL.rank_abs)
    order = np.argsort(w)[::-1]
    cols = [order[i] for i in range(m) if w[order[i]] > cutoff]
    coeffs = np.stack([
        _canonical_phase(v[:, c]) / np.sqrt(w[c]) for c in cols
    ]) if cols else np.zeros((0, m), dtype=complex)
    r = len(cols)
    reps = np.stack([np.tensordot(c, cb, axes=(0, 0)) for c in coeffs]) \
        if r else np.zeros((0,) + cb.shape[1:], dtype=complex)

    def bracket_column(x):
        """Coordinates of the coset [x] in the orthonormal coset basis."""
        return np.array([
            omega.evaluate_complex(
                algebra.product(algebra.involution(reps[k]), x))
            for k in range(r)
        ])

    rep_matrices = np.zeros((m, r, r), dtype=complex)
    for i, b in enumerate(cb):
        for ell in range(r):
            rep_matrices[i, :, ell] = bracket_column(
                algebra.product(b, reps[ell]))
    cyclic = bracket_column(algebra.unit)

    rep = GNSRep(algebra=algebra, state=omega,
                 gelfand=gelfand_ideal(algebra, omega),
                 hilbert_dim=r, coset_reps=reps,
                 rep_matrices=rep_matrices, cyclic_vector=cyclic)

    res = {}
    hom = star = 0.0
    for i, b in enumerate(cb):
        for j, c in enumerate(cb):
            hom = max(hom, float(np.linalg.norm(
                rep_matrices[i] @ rep_matrices[j]
                - rep.represent(algebra.product(b, c)))))
        star = max(star, float(np.linalg.norm(
            rep.represent(algebra.involution(b))
            - rep_matrices[i].conj().T)))
    res["homomorphism"] = hom
    res["star_compatible"] = star
    res["unital"] = float(np.linalg.norm(
        rep.represent(algebra.unit) - np.eye(r)))
    res["state_recovery"] = max(
        (abs(np.vdot(cyclic, rep_matrices[i] @ cyclic)
             - omega.evaluate_complex(cb[i])) for i in range(m)),
        default=0.0)
    if r:
        orbit = np.stack([rep_matrices[i] @ cyclic for i in range(m)], axis=1)
        sv = np.linalg.svd(orbit, compute_uv=False)
        rank = int(np.sum(sv > max(config.TOL.rank_rtol * sv[0],
                                   config.TOL.rank_abs)))
        res["cyclicity_defect"] = float(r - rank)
    res["dimension_identity"] = float(
        abs(r - (m - rep.gelfand.dim // 2)))
    rep.residuals = res
    return rep


def is_irreducible(rep: GNSRep) -> tuple[bool, int]:
    """Commutant dimension test: irreducible iff the commutant is scalar."""
    r = rep.hilbert_dim
    if r == 0:
        return False, 0
    eye = np.eye(r)
    blocks = [
        np.kron(eye, p) - np.kron(p.T, eye)
        for p in rep.rep_matrices
    ]
    stacked = np.vstack(blocks)
    sv = np.linalg.svd(stacked, compute_uv=False)
    cutoff = max(config.TOL.rank_rtol * (sv[0] if sv.size else 0.0),
                 config.TOL.rank_abs)
    rank = int(np.sum(sv > cutoff))
    commutant_dim = r * r - rank
    return commutant_dim == 1, commutant_dim


def is_pure(algebra: CStarAlgebra, omega: StateFunctional) -> bool:
    """A state is pure iff its GNS representation is irreducible."""
    return is_irreducible(gns(algebra, omega))[0]


@dataclass
class GNSEquivalenceCertificate:
    """Unitary equivalence of the two realizations of a reduced GNS space."""

    dims: tuple
    residuals: dict

    @property
    def passed(self) -> bool:
        return (self.dims[0] == self.dims[1]
                and max(self.residuals.values(), default=0.0) <= config.TOL.gns)

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "dims": list(self.dims),
            "residuals": {k: float(v) for k, v in self.residuals.items()},
        }


def reduced_gns_equivalence(f: CStarAlgebra, result: ReductionResult,
                            j: MatrixSubspace, omega: StateFunctional,
                            omega_tilde: StateFunctional) -> GNSEquivalenceCertificate:
    """Certify the unitary equivalence of the reduced GNS constructions.

    Compares the GNS space of the reduced state on the quotient algebra
    against the cosets of (N + J) + i(N + J) under the extension's form
    omega(A^dag B), building the intertwiner on matching coset generators.
    Preconditions: the extension restricts to a state on the normalizer
    vanishing on the reducing ideal, induces the given reduced state, and
    its Gelfand ideal contains the complexified reducing ideal.
    """
    n_alg = result.normalizer
    restricted = StateFunctional.from_density(n_alg, omega.rho)
    rep = is_state(restricted)
    if not rep.ok:
        raise PreconditionError(
            "extension does not restrict to a state on the normalizer")
    ok, worst = vanishes_on(restricted, result.reducing_ideal)
    if not ok:
        raise PreconditionError(
            f"extension does not vanish on the reducing ideal "
            f"(worst value {worst:.3e})")
    induced = reduce_state(omega, result)
    drift = float(np.abs(induced.values - omega_tilde.values).max()) \
        if induced.values.size else 0.0
    if drift > config.TOL.gns:
        raise PreconditionError(
            f"extension does not induce the given reduced state "
            f"(drift {drift:.3e})")
    j_omega = gelfand_ideal(f, omega)
    ok, res = j_omega.contains(
        matspace.complex_closure(result.reducing_ideal))
    if not ok:
        raise PreconditionError(
            f"Gelfand ideal does not contain the complexified reducing "
            f"ideal (residual {res:.3e})")

    reduced_alg = complexify(result.quotient)
    h_tilde = gns(reduced_alg, omega_tilde)

    w_space = matspace.complex_closure(
        matspace.subspace_sum(n_alg.carrier, j))
    wb = matspace.complex_orthonormal_basis(w_space)
    mw = len(wb)
    t = np.empty((mw, mw), dtype=complex)
    for a in range(mw):
        for b in range(mw):
            t[a, b] = omega.evaluate_complex(wb[a].conj().T @ wb[b])
    t = (t + t.conj().T) / 2
    w, v = np.linalg.eigh(t)
    cutoff = max(config.TOL.gelfand_rtol * max(float(w[-1]), 0.0),
                 config.TOL.rank_abs)
    order = np.argsort(w)[::-1]
    cols = [order[i] for i in range(mw) if w[order[i]] > cutoff]
    y_reps = [np.tensordot(_canonical_phase(v[:, c]) / np.sqrt(w[c]), wb,
                           axes=(0, 0)) for c in cols]
    rprime = len(y_reps)

    qb = reduced_alg.complex_basis
    mq = len(qb)
    alpha = np.zeros((h_tilde.hilbert_dim, mq), dtype=complex)
    beta = np.zeros((rprime, mq), dtype=complex)
    for i, q in enumerate(qb):
        alpha[:, i] = np.array([
            omega_tilde.evaluate_complex(reduced_alg.product(
                reduced_alg.involution(h_tilde.coset_reps[k]), q))
            for k in range(h_tilde.hilbert_dim)
        ])
        beta[:, i] = np.array([
            omega.evaluate_complex(y.conj().T @ q) for y in y_reps
        ])

    residuals = {}
    residuals["gram_agreement"] = float(np.linalg.norm(
        alpha.conj().T @ alpha - beta.conj().T @ beta))
    if h_tilde.hilbert_dim == rprime and h_tilde.hilbert_dim > 0:
        u = beta @ np.linalg.pinv(alpha)
        residuals["generator_match"] = float(np.linalg.norm(u @ alpha - beta))
        residuals["unitary"] = float(max(
            np.linalg.norm(u.conj().T @ u - np.eye(rprime)),
            np.linalg.norm(u @ u.conj().T - np.eye(rprime))))
        inter = 0.0
        for i, q in enumerate(qb):
            pi_t = h_tilde.rep_matrices[i]
            pi_p = np.empty((rprime, rprime), dtype=complex)
            for k, yk in enumerate(y_reps):
                for ell, yl in enumerate(y_reps):
                    pi_p[k, ell] = omega.evaluate_complex(
                        yk.conj().T @ (q @ yl))
            inter = max(inter, float(np.linalg.norm(u @ pi_t - pi_p @ u)))
        residuals["intertwining"] = inter
        omega_prime_vec = np.array([
            omega.evaluate_complex(y.conj().T) for y in y_reps
        ])
        residuals["cyclic_match"] = float(np.linalg.norm(
            u @ h_tilde.cyclic_vector - omega_prime_vec))
    return GNSEquivalenceCertificate(
        dims=(h_tilde.hilbert_dim, rprime), residuals=residuals)


@dataclass
class PurityObstruction:
    """Dimension probe for purity of extensions of a reduced state."""

    pure_possible: bool
    dim_span: int
    dim_algebra: int

    @property
    def verdict(self) -> str:
        return "pure_possible" if self.pure_possible else "pure_impossible"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "dim_span": self.dim_span,
            "dim_algebra": self.dim_algebra,
        }


def purity_obstruction(f: CStarAlgebra, n_space: MatrixSubspace,
                       j: MatrixSubspace,
                       omega: StateFunctional) -> PurityObstruction:
    """Whether the extension can be pure: the span test of the GNS carrier.

    Computes S as the complexified normalizer plus the complexified
    subalgebra plus the *-closure of the Gelfand ideal of the extension; a
    pure extension forces S to exhaust the algebra, so a strict inclusion
    obstructs purity.  The *-closure is what makes the probe sound: the
    Gelfand ideal is only a left ideal, and its adjoints also act trivially
    on the cyclic vector's bra side.
    """
    j_omega = gelfand_ideal(f, omega)
    j_omega_star = matspace.span(
        f.space.ambient, [b.conj().T for b in j_omega.basis])
    s = matspace.subspace_sum(
        matspace.subspace_sum(matspace.complex_closure(n_space),
                              matspace.complex_closure(j)),
        matspace.subspace_sum(j_omega, j_omega_star))
    dim_s = s.dim // 2
    dim_f = f.dim_complex
    return PurityObstruction(pure_possible=dim_s == dim_f,
                             dim_span=dim_s, dim_algebra=dim_f)

"""Real-linear subspaces of complex n x n matrices.

Matrices are flattened to real coordinate vectors of length 2n^2 (real parts
then imaginary parts), which turns the real Hilbert-Schmidt inner product
<A,B> = Re tr(A^dag B) into the Euclidean dot product.  Every subspace is
stored as an orthonormal basis under that inner product, so projections,
intersections, sums and quotient decompositions are plain dense linear
algebra.  Rank decisions use a relative singular-value cutoff; in finite
dimension all subspaces are closed, so no completion step exists anywhere.
"""

from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import (
    AmbientMismatchError,
    DimensionMismatchError,
    HermiticityError,
    MembershipError,
)


@dataclass(frozen=True)
class AmbientSpace:
    """The ambient space M_n(C) viewed as a real vector space."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatchError(f"matrix side must be >= 1, got {self.n}")

    @property
    def field_dim(self) -> int:
        return 2 * self.n * self.n

    @property
    def herm_dim(self) -> int:
        return self.n * self.n


def flatten(a: np.ndarray) -> np.ndarray:
    """Real coordinates of a matrix: [Re entries, Im entries]."""
    a = np.asarray(a, dtype=complex)
    return np.concatenate([a.real.ravel(), a.imag.ravel()])


def unflatten(x: np.ndarray, n: int) -> np.ndarray:
    m = n * n
    return (x[:m] + 1j * x[m:]).reshape(n, n)


def hs_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Re tr(a^dag b)."""
    return float(np.real(np.vdot(a, b)))


def hs_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def is_hermitian(a: np.ndarray, tol: float | None = None) -> bool:
    tol = config.TOL.ortho if tol is None else tol
    return np.linalg.norm(a - a.conj().T) <= tol * max(1.0, np.linalg.norm(a))


@dataclass(frozen=True)
class MatrixSubspace:
    """A real-linear subspace of M_n(C) with an orthonormal basis.

    `basis` has shape (dim, n, n); `coords` caches the flattened basis as a
    (dim, 2n^2) row matrix.  Instances are immutable and safe to share.
    """

    ambient: AmbientSpace
    basis: np.ndarray
    hermitian: bool = False
    coords: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.ambient.n
        basis = np.asarray(self.basis, dtype=complex)
        if basis.ndim == 2 and basis.size == 0:
            basis = basis.reshape(0, n, n)
        if basis.shape[1:] != (n, n):
            raise DimensionMismatchError(
                f"basis shape {basis.shape} does not match ambient n={n}"
            )
        coords = np.stack([flatten(b) for b in basis]) if len(basis) else \
            np.zeros((0, self.ambient.field_dim))
        gram = coords @ coords.T
        if len(basis) and np.abs(gram - np.eye(len(basis))).max() > config.TOL.ortho:
            raise ValueError("basis is not orthonormal under the HS inner product")
        if self.hermitian:
            for i, b in enumerate(basis):
                if np.linalg.norm(b - b.conj().T) > config.TOL.ortho:
                    raise HermiticityError(f"basis element {i} is not Hermitian")
        basis.setflags(write=False)
        coords.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.ambient.n

    def coefficients(self, v: np.ndarray) -> np.ndarray:
        """Coefficients of the orthogonal projection of v onto the subspace."""
        return self.coords @ flatten(v)

    def from_coefficients(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        if self.dim == 0:
            return np.zeros((self.n, self.n), dtype=complex)
        return np.tensordot(c, self.basis, axes=(0, 0))

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.from_coefficients(self.coefficients(v))

    def member(self, v: np.ndarray) -> tuple[bool, float]:
        """Membership test; returns (flag, residual norm)."""
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.n, self.n):
            raise DimensionMismatchError(
                f"expected shape {(self.n, self.n)}, got {v.shape}"
            )
        residual = hs_norm(v - self.project(v))
        ok = residual <= config.TOL.member_rtol * max(1.0, hs_norm(v))
        return ok, residual

    def contains(self, other: "MatrixSubspace") -> tuple[bool, float]:
        """Whether every basis element of `other` lies in this subspace."""
        _check_same_ambient(self, other)
        worst = 0.0
        ok = True
        for b in other.basis:
            flag, res = self.member(b)
            worst = max(worst, res)
            ok = ok and flag
        return ok, worst

    def random_element(self, rng: np.random.Generator,
                       scale: float = 1.0) -> np.ndarray:
        c = rng.normal(size=self.dim, scale=scale)
        return self.from_coefficients(c)


def _check_same_ambient(a: MatrixSubspace, b: MatrixSubspace) -> None:
    if a.ambient.n != b.ambient.n:
        raise AmbientMismatchError(
            f"ambient sizes differ: {a.ambient.n} vs {b.ambient.n}"
        )



def _rank_cutoff(s: np.ndarray) -> float:
    top = float(s[0]) if s.size else 0.0
    return max(config.TOL.rank_rtol * top, config.TOL.rank_abs)

def span(ambient: AmbientSpace, generators, hermitian: bool = False) -> MatrixSubspace:
    """Orthonormal basis of the real span of the generators.

    Rank is decided by the relative singular-value cutoff of the stacked
    coordinate matrix.  With the hermitian flag set, every generator must be
    Hermitian; the basis then consists of Hermitian matrices.
    """
    n = ambient.n
    mats = []
    for k, g in enumerate(generators):
        g = np.asarray(g, dtype=complex)
        if g.shape != (n, n):
            raise DimensionMismatchError(
                f"generator {k} has shape {g.shape}, expected {(n, n)}"
            )
        if hermitian:
            if np.linalg.norm(g - g.conj().T) > \
                    config.TOL.ortho * max(1.0, np.linalg.norm(g)):
                raise HermiticityError(f"generator {k} is not Hermitian")
            g = (g + g.conj().T) / 2
        mats.append(g)
    if not mats:
        return MatrixSubspace(ambient, np.zeros((0, n, n), dtype=complex), hermitian)
    coords = np.stack([flatten(m) for m in mats])
    # an already-orthogonal family passes through unrotated, so structured
    # generators (diagonal units, Pauli matrices) keep exact sparsity
    gram = coords @ coords.T
    off = gram - np.diag(np.diag(gram))
    if np.abs(off).max(initial=0.0) <= config.TOL.ortho:
        norms = np.sqrt(np.diag(gram))
        keep = norms > config.TOL.rank_abs
        if keep.any():
            basis = np.stack([m / nm for m, nm in zip(mats, norms) if nm > config.TOL.rank_abs])
        else:
            basis = np.zeros((0, n, n), dtype=complex)
        return MatrixSubspace(ambient, basis, hermitian)
    u, s, vh = np.linalg.svd(coords, full_matrices=False)
    rank = int(np.sum(s > _rank_cutoff(s)))
    basis = np.stack([unflatten(row, n) for row in vh[:rank]]) if rank else \
        np.zeros((0, n, n), dtype=complex)
    if hermitian and rank:
        basis = (basis + basis.conj().transpose(0, 2, 1)) / 2
    return MatrixSubspace(ambient, basis, hermitian)


def zero_subspace(ambient: AmbientSpace, hermitian: bool = False) -> MatrixSubspace:
    return span(ambient, [], hermitian)


def intersect(a: MatrixSubspace, b: MatrixSubspace) -> MatrixSubspace:
    """Intersection a ^ b via the null space of the stacked coordinate system.

    A vector lies in both row spaces iff C_a^T x = C_b^T y for coefficient
    vectors (x, y), i.e. (x, y) is in the null space of [C_a^T | -C_b^T].
    """
    _check_same_ambient(a, b)
    hermitian = a.hermitian and b.hermitian
    if a.dim == 0 or b.dim == 0:
        return zero_subspace(a.ambient, hermitian)
    stacked = np.hstack([a.coords.T, -b.coords.T])
    u, s, vh = np.linalg.svd(stacked, full_matrices=True)
    rank = int(np.sum(s > _rank_cutoff(s)))
    null = vh[rank:]
    gens = [a.from_coefficients(row[: a.dim]) for row in null]
    return span(a.ambient, gens, hermitian)


def subspace_sum(a: MatrixSubspace, b: MatrixSubspace) -> MatrixSubspace:
    """Span of the union of bases."""
    _check_same_ambient(a, b)
    gens = list(a.basis) + list(b.basis)
    return span(a.ambient, gens, a.hermitian and b.hermitian)


def coset_decompose(s: MatrixSubspace, k: MatrixSubspace,
                    v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split v in S as (representative, kernel part) with respect to K <= S.

    The representative is the orthogonal projection onto K-perp inside S,
    i.e. the minimal-norm element of the coset v + K.
    """
    ok, res = s.contains(k)
    if not ok:
        raise MembershipError("K is not contained in S", residual=res)
    ok, res = s.member(v)
    if not ok:
        raise MembershipError("v is not a member of S", residual=res)
    kernel_part = k.project(v)
    representative = np.asarray(v, dtype=complex) - kernel_part
    return representative, kernel_part


def complement_within(s: MatrixSubspace, k: MatrixSubspace) -> MatrixSubspace:
    """Orthonormal basis of K-perp ^ S for K <= S."""
    ok, res = s.contains(k)
    if not ok:
        raise MembershipError("K is not contained in S", residual=res)
    if k.dim == 0:
        return s
    rows = s.coords - (s.coords @ k.coords.T) @ k.coords
    gens = [unflatten(r, s.n) for r in rows]
    return span(s.ambient, gens, s.hermitian)


def constrained_subspace(domain: MatrixSubspace, conditions) -> MatrixSubspace:
    """{a in domain : f(a) in target for every (f, target) condition}.

    Each condition is a pair (f, target) with f linear on matrices and
    target a MatrixSubspace or None for the zero subspace.  Computed as the
    null space of the stacked residual map over the domain's basis.
    """
    if domain.dim == 0 or not conditions:
        return domain
    rows = []
    for f, target in conditions:
        block = np.empty((domain.ambient.field_dim, domain.dim))
        for i, b in enumerate(domain.basis):
            w = f(b)
            if target is not None:
                w = w - target.project(w)
            block[:, i] = flatten(w)
        rows.append(block)
    m = np.vstack(rows)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(s > _rank_cutoff(s)))
    null = vh[rank:]
    if null.size == 0:
        return zero_subspace(domain.ambient, domain.hermitian)
    basis = np.stack([domain.from_coefficients(row) for row in null])
    return MatrixSubspace(domain.ambient, basis, domain.hermitian)


def subspaces_equal(a: MatrixSubspace, b: MatrixSubspace) -> tuple[bool, float]:
    """Subspace equality via dimensions plus mutual containment."""
    _check_same_ambient(a, b)
    ok_ab, res_ab = b.contains(a)
    ok_ba, res_ba = a.contains(b)
    return (a.dim == b.dim and ok_ab and ok_ba), max(res_ab, res_ba)


def batch_residuals(s: MatrixSubspace, mats: np.ndarray) -> np.ndarray:
    """Projection residual norms for a stack of matrices, vectorized."""
    mats = np.asarray(mats, dtype=complex)
    m = mats.reshape(len(mats), -1)
    x = np.hstack([m.real, m.imag])
    r = x - (x @ s.coords.T) @ s.coords
    return np.linalg.norm(r, axis=1)


def complex_closure(s: MatrixSubspace) -> MatrixSubspace:
    """Smallest complex-linear subspace containing s, as a real subspace."""
    gens = list(s.basis) + [1j * b for b in s.basis]
    return span(s.ambient, gens, hermitian=False)


def is_complex_closed(s: MatrixSubspace) -> bool:
    return all(s.member(1j * b)[0] for b in s.basis)


def hermitian_part(s: MatrixSubspace) -> MatrixSubspace:
    """Hermitian elements of a complex-closed subspace, as a real subspace."""
    gens = []
    for b in s.basis:
        gens.append((b + b.conj().T) / 2)
        gens.append((b - b.conj().T) / 2j)
    return span(s.ambient, gens, hermitian=True)


def complex_orthonormal_basis(s: MatrixSubspace) -> np.ndarray:
    """Complex-orthonormal basis (under tr(A^dag B)) of the complex span of s.

    Returns an array of shape (m, n, n).  For a complex-closed s the complex
    dimension m equals s.dim / 2.
    """
    n = s.n
    if s.dim == 0:
        return np.zeros((0, n, n), dtype=complex)
    vecs = np.stack([b.ravel() for b in s.basis])
    u, sv, vh = np.linalg.svd(vecs, full_matrices=False)
    rank = int(np.sum(sv > _rank_cutoff(sv)))
    out = vh[:rank].reshape(rank, n, n)
    # canonical phase: largest-modulus entry made real positive
    mats = []
    for m in out:
        flat = m.ravel()
        j = int(np.argmax(np.abs(flat)))
        phase = flat[j] / abs(flat[j])
        mats.append(m / phase)
    return np.stack(mats)

"""Deterministic random instances for the certification suites.

Every generator derives its stream from the GenSpec seed and a per-operation
tag, so identical specs reproduce identical algebras, constraints and states
bit for bit.  Generated carriers are Lie-Jordan closed by construction:
full Hermitian algebras, Hermitian parts of block-diagonal algebras, real
diagonal (commutative) algebras, and Hermitian parts of unital
*-subalgebras obtained by closing random degenerate Hermitian generators
under the matrix product until the dimension stabilizes.
"""

from dataclasses import dataclass, field

import numpy as np

from . import matspace
from .constraints import ConstrainedSystem
from .core import CStarAlgebra, LJBAlgebra, LJBParams, complexify, ljb_algebra
from .errors import PreconditionError
from .matspace import AmbientSpace, MatrixSubspace
from .states import StateFunctional

PROFILES = ("full_matrix", "block_diagonal", "commutative",
            "random_unital_subalgebra")

_CLOSURE_ROUNDS = 10


@dataclass(frozen=True)
class GenSpec:
    """Seeded description of a random instance."""

    seed: int
    n: int
    profile: str = "full_matrix"
    block_sizes: tuple = ()
    target_dim: int = 0

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise PreconditionError(f"unknown profile {self.profile!r}")
        if self.profile == "block_diagonal":
            if not self.block_sizes or sum(self.block_sizes) != self.n:
                raise PreconditionError(
                    f"block sizes {self.block_sizes} must sum to n={self.n}")
        if self.target_dim > self.n * self.n:
            raise PreconditionError("target dimension exceeds n^2")


def _rng(spec: GenSpec, tag: int) -> np.random.Generator:
    return np.random.default_rng([spec.seed, tag, spec.n])


def hermitian_basis(n: int) -> list:
    """Standard orthonormal Hermitian basis of M_n: n^2 matrices."""
    out = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[i, i] = 1.0
        out.append(m)
    r = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = m[j, i] = r
            out.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = -1j * r
            m[j, i] = 1j * r
            out.append(m)
    return out


def _embed(block: np.ndarray, offset: int, n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    k = block.shape[0]
    m[offset:offset + k, offset:offset + k] = block
    return m


def _block_generators(sizes, n: int):
    """Hermitian basis of the block-diagonal algebra, grouped per block."""
    groups = []
    offset = 0
    for size in sizes:
        groups.append([_embed(b, offset, n) for b in hermitian_basis(size)])
        offset += size
    return groups


def _random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(x)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_partition(rng: np.random.Generator, n: int) -> tuple:
    sizes = []
    left = n
    while left:
        k = int(rng.integers(1, left + 1))
        sizes.append(k)
        left -= k
    return tuple(sizes)


def _pick_partition(rng: np.random.Generator, n: int, target_dim: int) -> tuple:
    """Partition whose block algebra dimension best approaches the target."""
    candidates = [_random_partition(rng, n) for _ in range(20)]
    if not target_dim:
        return candidates[0]
    return min(candidates,
               key=lambda s: abs(sum(k * k for k in s) - target_dim))


def _close_under_products(amb: AmbientSpace, generators) -> MatrixSubspace:
    """Complex span closed under the matrix product, with rank stabilization."""
    gens = list(generators) + [1j * g for g in generators]
    space = matspace.span(amb, gens)
    for _ in range(_CLOSURE_ROUNDS):
        cb = matspace.complex_orthonormal_basis(space)
        prods = [a @ b for a in cb for b in cb]
        bigger = matspace.span(amb, list(space.basis) + prods)
        if bigger.dim == space.dim:
            return bigger
        space = bigger
    return space


def gen_algebra(spec: GenSpec, params: LJBParams | None = None) -> LJBAlgebra:
    """A Lie-Jordan closed carrier per the requested profile."""
    params = params or LJBParams()
    n = spec.n
    amb = AmbientSpace(n)
    eye = np.eye(n, dtype=complex)
    if spec.profile == "full_matrix":
        carrier = matspace.span(amb, hermitian_basis(n), hermitian=True)
    elif spec.profile == "block_diagonal":
        gens = [b for grp in _block_generators(spec.block_sizes, n) for b in grp]
        carrier = matspace.span(amb, gens, hermitian=True)
    elif spec.profile == "commutative":
        gens = [np.diag((np.arange(n) == i).astype(complex)) for i in range(n)]
        carrier = matspace.span(amb, gens, hermitian=True)
    else:
        rng = _rng(spec, 1)
        sizes = _pick_partition(rng, n, spec.target_dim)
        u = _random_unitary(rng, n)
        gens = [eye]
        offset = 0
        for size in sizes:
            for _ in range(2):
                x = rng.normal(size=(size, size)) + \
                    1j * rng.normal(size=(size, size))
                h = _embed((x + x.conj().T) / 2, offset, n)
                gens.append(u @ h @ u.conj().T)
            offset += size
        space = _close_under_products(amb, gens)
        carrier = matspace.hermitian_part(space)
    return LJBAlgebra(carrier=carrier, params=params, unit=eye)


def gen_ideal(spec: GenSpec, proper: bool = True) -> MatrixSubspace:
    """A Jordan ideal of the generated algebra: a sum of block summands.

    Only block-diagonal and commutative profiles have nontrivial Jordan
    ideals of this form; other profiles yield the zero ideal.
    """
    n = spec.n
    amb = AmbientSpace(n)
    rng = _rng(spec, 2)
    if spec.profile == "block_diagonal":
        groups = _block_generators(spec.block_sizes, n)
    elif spec.profile == "commutative":
        groups = [[np.diag((np.arange(n) == i).astype(complex))]
                  for i in range(n)]
    else:
        return matspace.zero_subspace(amb, hermitian=True)
    count = len(groups)
    upper = count if not proper else count - 1
    k = int(rng.integers(1, upper + 1)) if upper >= 1 else 0
    chosen = rng.choice(count, size=k, replace=False) if k else []
    gens = [b for idx in chosen for b in groups[int(idx)]]
    return matspace.span(amb, gens, hermitian=True)


def gen_constraints(spec: GenSpec, count: int,
                    algebra: LJBAlgebra | None = None,
                    projections: bool = True) -> list:
    """Random Hermitian constraints inside the algebra's carrier.

    With `projections`, each constraint is spectrally rounded onto the
    projection over its positive eigenspace, which stays in the carrier
    because the carrier's complexification is closed under the functional
    calculus of its elements.
    """
    algebra = algebra or gen_algebra(spec)
    rng = _rng(spec, 3)
    out = []
    for _ in range(count):
        h = algebra.random_element(rng)
        if projections:
            w, v = np.linalg.eigh(h)
            keep = w > 0
            h = (v[:, keep] * 1.0) @ v[:, keep].conj().T
        out.append((h + h.conj().T) / 2)
    return out


def gen_state(spec: GenSpec, algebra: LJBAlgebra) -> StateFunctional:
    """A state from a normalized random Gaussian density, always accepted."""
    rng = _rng(spec, 4)
    n = algebra.n
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = x @ x.conj().T
    unit = algebra.unit if algebra.unit is not None else np.eye(n, dtype=complex)
    scale = float(np.real(np.trace(rho @ unit)))
    if scale <= 1e-12:
        raise PreconditionError("degenerate random density")
    return StateFunctional.from_density(algebra, rho / scale)


def gen_system(spec: GenSpec, n_constraints: int,
               params: LJBParams | None = None,
               projections: bool = True) -> ConstrainedSystem:
    """A constrained system whose field algebra complexifies the carrier."""
    algebra = gen_algebra(spec, params)
    field_algebra = complexify(algebra)
    constraints = gen_constraints(spec, n_constraints, algebra=algebra,
                                  projections=projections)
    return ConstrainedSystem(field_algebra=field_algebra,
                             constraints=tuple(constraints),
                             params=algebra.params)

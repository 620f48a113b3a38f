import numpy as np
import pytest

from ljreduce import core, matspace as ms


def unit_matrix(i, j, n):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1.0
    return m


@pytest.fixture(scope="session")
def paulis():
    return {
        "I": np.eye(2, dtype=complex),
        "x": np.array([[0, 1], [1, 0]], dtype=complex),
        "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "z": np.array([[1, 0], [0, -1]], dtype=complex),
    }


@pytest.fixture(scope="session")
def herm2(paulis):
    amb = ms.AmbientSpace(2)
    carrier = ms.span(amb, [paulis[k] for k in "Ixyz"], hermitian=True)
    return core.ljb_algebra(carrier)


@pytest.fixture(scope="session")
def diag3():
    amb = ms.AmbientSpace(3)
    gens = [unit_matrix(i, i, 3) for i in range(3)]
    return core.ljb_algebra(ms.span(amb, gens, hermitian=True))


def random_hermitian(rng, n, scale=1.0):
    x = rng.normal(size=(n, n), scale=scale) + \
        1j * rng.normal(size=(n, n), scale=scale)
    return (x + x.conj().T) / 2


def real_coords(m):
    """Independent flattening used by brute-force oracles."""
    m = np.asarray(m, dtype=complex)
    return np.concatenate([m.real.ravel(), m.imag.ravel()])


def brute_rank(mats, tol=1e-9):
    """Oracle: rank of the stacked real coordinate matrix."""
    mats = [m for m in mats]
    if not mats:
        return 0
    stack = np.stack([real_coords(m) for m in mats])
    return int(np.linalg.matrix_rank(stack, tol=tol))

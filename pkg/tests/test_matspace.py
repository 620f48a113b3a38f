import numpy as np
import pytest

from ljreduce import matspace as ms
from ljreduce.errors import (
    AmbientMismatchError,
    DimensionMismatchError,
    HermiticityError,
    MembershipError,
)

from conftest import brute_rank, random_hermitian, real_coords, unit_matrix

AMB2 = ms.AmbientSpace(2)


def test_ambient_dimensions():
    amb = ms.AmbientSpace(3)
    assert amb.field_dim == 18
    assert amb.herm_dim == 9
    with pytest.raises(DimensionMismatchError):
        ms.AmbientSpace(0)


def test_flatten_is_linear_isometry():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        t = rng.normal()
        assert np.allclose(ms.flatten(a + t * b),
                           ms.flatten(a) + t * ms.flatten(b))
        assert np.isclose(ms.flatten(a) @ ms.flatten(b), ms.hs_inner(a, b))
        back = ms.unflatten(ms.flatten(a), 3)
        assert np.allclose(back, a)


def test_span_dependent_generators():
    eye = np.eye(2, dtype=complex)
    s = ms.span(AMB2, [eye, 2 * eye], hermitian=True)
    assert s.dim == 1


def test_span_empty():
    assert ms.span(AMB2, []).dim == 0


def test_span_paulis_is_full_hermitian(paulis):
    mats = [paulis[k] for k in "Ixyz"]
    # oracle: rank of the 4 x 8 real coordinate matrix
    assert brute_rank(mats) == 4
    s = ms.span(AMB2, mats, hermitian=True)
    assert s.dim == 4
    rng = np.random.default_rng(1)
    for _ in range(5):
        assert s.member(random_hermitian(rng, 2))[0]


def test_span_errors(paulis):
    with pytest.raises(DimensionMismatchError):
        ms.span(AMB2, [np.eye(3)])
    with pytest.raises(HermiticityError):
        ms.span(AMB2, [unit_matrix(0, 1, 2)], hermitian=True)


def test_orthonormality_invariant():
    rng = np.random.default_rng(2)
    for n in (2, 3, 4):
        amb = ms.AmbientSpace(n)
        gens = [random_hermitian(rng, n) for _ in range(n * n + 2)]
        s = ms.span(amb, gens, hermitian=True)
        gram = s.coords @ s.coords.T
        assert np.abs(gram - np.eye(s.dim)).max() <= 1e-12


def test_intersect_idempotent(paulis):
    s = ms.span(AMB2, [paulis["x"], paulis["z"]], hermitian=True)
    x = ms.intersect(s, s)
    assert x.dim == s.dim
    assert ms.subspaces_equal(x, s)[0]


def test_intersect_unit_columns():
    # real spans of {E11, E21} and {E11, E12} meet exactly in E11
    a = ms.span(AMB2, [unit_matrix(0, 0, 2), unit_matrix(1, 0, 2)])
    b = ms.span(AMB2, [unit_matrix(0, 0, 2), unit_matrix(0, 1, 2)])
    # oracle: dim(A) + dim(B) - dim(A u B) over real coordinates
    union_rank = brute_rank(list(a.basis) + list(b.basis))
    assert a.dim + b.dim - union_rank == 1
    x = ms.intersect(a, b)
    assert x.dim == 1
    assert x.member(unit_matrix(0, 0, 2))[0]


def test_intersect_with_zero(paulis):
    s = ms.span(AMB2, [paulis["x"]], hermitian=True)
    z = ms.zero_subspace(AMB2, hermitian=True)
    assert ms.intersect(s, z).dim == 0


def test_intersect_ambient_mismatch(paulis):
    s = ms.span(AMB2, [paulis["x"]])
    t = ms.span(ms.AmbientSpace(3), [np.eye(3)])
    with pytest.raises(AmbientMismatchError):
        ms.intersect(s, t)


def test_sum_absorbs_zero(paulis):
    s = ms.span(AMB2, [paulis["x"], paulis["y"]], hermitian=True)
    z = ms.zero_subspace(AMB2, hermitian=True)
    t = ms.subspace_sum(s, z)
    assert ms.subspaces_equal(s, t)[0]


def test_sum_disjoint_coordinates():
    s = ms.subspace_sum(ms.span(AMB2, [unit_matrix(0, 0, 2)]),
                        ms.span(AMB2, [unit_matrix(1, 1, 2)]))
    assert s.dim == 2
    assert s.member(np.diag([3.0, -2.0]).astype(complex))[0]


def test_grassmann_identity_bulk():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        amb = ms.AmbientSpace(n)
        ka = int(rng.integers(0, 2 * n * n + 1))
        kb = int(rng.integers(0, 2 * n * n + 1))
        ga = [rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
              for _ in range(ka)]
        gb = [rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
              for _ in range(kb)]
        a = ms.span(amb, ga)
        b = ms.span(amb, gb)
        lhs = a.dim + b.dim
        rhs = ms.intersect(a, b).dim + ms.subspace_sum(a, b).dim
        assert lhs == rhs


def test_member_scaling(paulis):
    s = ms.span(AMB2, [paulis["I"]], hermitian=True)
    ok, res = s.member(3 * paulis["I"])
    assert ok and res <= 1e-12


def test_member_orthogonal_residual(paulis):
    s = ms.span(AMB2, [paulis["z"]], hermitian=True)
    ok, res = s.member(paulis["x"])
    assert not ok
    assert np.isclose(res, np.sqrt(2.0))


def test_member_zero_in_zero_space():
    z = ms.zero_subspace(AMB2)
    ok, res = z.member(np.zeros((2, 2), dtype=complex))
    assert ok and res == 0.0


def test_projection_idempotent():
    rng = np.random.default_rng(4)
    amb = ms.AmbientSpace(3)
    s = ms.span(amb, [random_hermitian(rng, 3) for _ in range(4)],
                hermitian=True)
    for _ in range(20):
        v = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        p1 = s.project(v)
        p2 = s.project(p1)
        assert np.linalg.norm(p1 - p2) <= 1e-12


def test_coset_decompose_examples():
    diag = ms.span(AMB2, [unit_matrix(0, 0, 2), unit_matrix(1, 1, 2)],
                   hermitian=True)
    k = ms.span(AMB2, [unit_matrix(0, 0, 2)], hermitian=True)
    v = np.diag([3.0, 5.0]).astype(complex)
    rep, ker = ms.coset_decompose(diag, k, v)
    assert np.allclose(rep, np.diag([0.0, 5.0]))
    assert np.allclose(ker, np.diag([3.0, 0.0]))
    assert np.linalg.norm(v - (rep + ker)) <= 1e-10

    rep, ker = ms.coset_decompose(diag, k, unit_matrix(0, 0, 2))
    assert np.linalg.norm(rep) <= 1e-12

    z = ms.zero_subspace(AMB2, hermitian=True)
    rep, ker = ms.coset_decompose(diag, z, v)
    assert np.allclose(rep, v)


def test_coset_decompose_preconditions(paulis):
    diag = ms.span(AMB2, [unit_matrix(0, 0, 2), unit_matrix(1, 1, 2)],
                   hermitian=True)
    off = ms.span(AMB2, [paulis["x"]], hermitian=True)
    with pytest.raises(MembershipError):
        ms.coset_decompose(diag, off, np.diag([1.0, 0]).astype(complex))
    with pytest.raises(MembershipError):
        ms.coset_decompose(diag, ms.zero_subspace(AMB2, hermitian=True),
                           paulis["x"])


def test_complement_within():
    diag = ms.span(AMB2, [unit_matrix(0, 0, 2), unit_matrix(1, 1, 2)],
                   hermitian=True)
    k = ms.span(AMB2, [unit_matrix(0, 0, 2)], hermitian=True)
    q = ms.complement_within(diag, k)
    assert q.dim == 1
    assert q.member(unit_matrix(1, 1, 2))[0]


def test_complex_closure_and_hermitian_part(paulis):
    s = ms.span(AMB2, [paulis[k] for k in "Ixyz"], hermitian=True)
    c = ms.complex_closure(s)
    assert c.dim == 8
    assert ms.is_complex_closed(c)
    h = ms.hermitian_part(c)
    assert ms.subspaces_equal(h, s)[0]


def test_complex_orthonormal_basis_counts(paulis):
    s = ms.span(AMB2, [paulis[k] for k in "Ixyz"], hermitian=True)
    c = ms.complex_closure(s)
    cb = ms.complex_orthonormal_basis(c)
    assert len(cb) == 4
    for i in range(4):
        for j in range(4):
            ip = np.trace(cb[i].conj().T @ cb[j])
            assert np.isclose(ip, 1.0 if i == j else 0.0)


def test_constrained_subspace_zero_map(paulis):
    s = ms.span(AMB2, [paulis[k] for k in "Ixyz"], hermitian=True)
    # {a : a E11 - E11 a lands in span{E11}} inside hermitian 2x2 = diagonals
    e11 = unit_matrix(0, 0, 2)
    target = ms.span(AMB2, [e11], hermitian=False)
    out = ms.constrained_subspace(s, [(lambda x: x @ e11 - e11 @ x, target)])
    assert out.dim == 2
    assert out.member(np.diag([1.0, -2.0]).astype(complex))[0]

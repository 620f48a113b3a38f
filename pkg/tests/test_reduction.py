import numpy as np
import pytest

from ljreduce import core, matspace as ms, reduction as red
from ljreduce.errors import (
    MembershipError,
    NotAnIdealError,
    NotASubalgebraError,
    PreconditionError,
    TheoremViolationError,
    UnitalSubalgebraError,
)
from ljreduce.genrand import GenSpec, gen_algebra, gen_ideal

from conftest import random_hermitian, real_coords, unit_matrix

AMB2 = ms.AmbientSpace(2)


@pytest.fixture(scope="module")
def e11():
    return unit_matrix(0, 0, 2)


@pytest.fixture(scope="module")
def span_e11(e11):
    return ms.span(AMB2, [e11], hermitian=True)


def brute_normalizer_dim(l_basis, j_basis, params):
    """Oracle: null space of the bracket-escape map over real coordinates."""
    rows = []
    j_coords = np.stack([real_coords(j) for j in j_basis])
    proj = j_coords.T @ np.linalg.pinv(j_coords.T)
    for j in j_basis:
        cols = []
        for b in l_basis:
            w = 1j * params.lam * (b @ j - j @ b)
            c = real_coords(w)
            cols.append(c - proj @ c)
        rows.append(np.stack(cols, axis=1))
    m = np.vstack(rows)
    return len(l_basis) - np.linalg.matrix_rank(m, tol=1e-9)


def test_normalizer_trivial_cases(herm2):
    z = ms.zero_subspace(AMB2, hermitian=True)
    assert red.normalizer(herm2, z).dim == herm2.dim
    assert red.normalizer(herm2, herm2.carrier).dim == herm2.dim


def test_normalizer_corner(herm2, span_e11, e11):
    n_alg = red.normalizer(herm2, span_e11)
    assert n_alg.dim == 2
    # oracle over explicit real coordinates
    expected = brute_normalizer_dim(herm2.carrier.basis, [e11], herm2.params)
    assert n_alg.dim == expected
    assert n_alg.carrier.member(np.diag([2.0, -1.0]).astype(complex))[0]
    assert not n_alg.carrier.member(np.array([[0, 1], [1, 0]], dtype=complex))[0]
    rep = core.verify_ljb_axioms(n_alg, trials=10)
    assert rep.passed
    assert n_alg.unit is not None


def test_normalizer_requires_containment(herm2):
    other = ms.span(ms.AmbientSpace(3), [np.eye(3, dtype=complex)],
                    hermitian=True)
    with pytest.raises(Exception):
        red.normalizer(herm2, other)


def test_is_jordan_ideal(herm2, span_e11):
    assert red.is_jordan_ideal(herm2, herm2.carrier).ok
    assert red.is_jordan_ideal(
        herm2, ms.zero_subspace(AMB2, hermitian=True)).ok
    check = red.is_jordan_ideal(herm2, span_e11)
    assert not check.ok
    assert check.witness is not None
    assert check.worst_residual > 0.1


def test_is_lj_subalgebra(herm2, span_e11, paulis):
    assert red.is_lj_subalgebra(herm2, span_e11).ok
    bad = red.is_lj_subalgebra(
        herm2, ms.span(AMB2, [paulis["x"]], hermitian=True))
    assert not bad.ok
    assert red.is_lj_subalgebra(
        herm2, ms.zero_subspace(AMB2, hermitian=True)).ok


def test_is_unital_subalgebra(herm2, span_e11, e11):
    flag, unit = red.is_unital_subalgebra(herm2, span_e11)
    assert flag
    assert np.allclose(unit, e11)
    flag, unit = red.is_unital_subalgebra(
        herm2, ms.zero_subspace(AMB2, hermitian=True))
    assert not flag and unit is None


def test_reduce_by_ideal_identity(herm2):
    r = red.reduce_by_ideal(herm2, ms.zero_subspace(AMB2, hermitian=True))
    assert r.quotient.dim == herm2.dim
    assert r.axiom_report.passed
    rng = np.random.default_rng(0)
    a = herm2.random_element(rng)
    b = herm2.random_element(rng)
    assert np.allclose(r.quotient.jordan(a, b), herm2.jordan(a, b))
    assert np.isclose(red.quotient_norm(r, a), np.linalg.norm(a, 2))


def test_reduce_by_ideal_full_collapse(herm2):
    r = red.reduce_by_ideal(herm2, herm2.carrier)
    assert r.quotient.dim == 0
    assert red.quotient_norm(r, herm2.carrier.basis[0]) <= 1e-12


def test_reduce_by_ideal_three_points(diag3):
    j = ms.span(ms.AmbientSpace(3), [unit_matrix(0, 0, 3)], hermitian=True)
    assert red.is_jordan_ideal(diag3, j).ok
    r = red.reduce_by_ideal(diag3, j)
    assert r.normalizer.dim == 3
    assert r.reducing_ideal.dim == 1
    assert r.quotient.dim == 2
    # quotient is the function algebra on the remaining two points
    q = r.quotient
    f = np.diag([0.0, 2.0, 3.0]).astype(complex)
    g = np.diag([0.0, 5.0, -1.0]).astype(complex)
    assert np.allclose(q.jordan(f, g), np.diag([0.0, 10.0, -3.0]))
    assert r.axiom_report.passed
    assert np.allclose(q.unit, np.diag([0.0, 1.0, 1.0]))


def test_reduce_by_ideal_rejects_non_ideal(herm2, span_e11):
    with pytest.raises(NotAnIdealError) as exc:
        red.reduce_by_ideal(herm2, span_e11)
    assert exc.value.witness is not None


def test_exact_sequence_dimensions():
    for seed in range(6):
        spec = GenSpec(seed=seed, n=4, profile="block_diagonal",
                       block_sizes=(2, 1, 1))
        alg = gen_algebra(spec)
        j = gen_ideal(spec)
        r = red.reduce_by_ideal(alg, j)
        assert r.quotient.dim == r.normalizer.dim - r.reducing_ideal.dim
        ok, _ = r.normalizer.carrier.contains(r.reducing_ideal)
        assert ok


def test_reduce_by_subalgebra_trivial(herm2):
    r = red.reduce_by_subalgebra(herm2,
                                 ms.zero_subspace(AMB2, hermitian=True))
    assert r.quotient.dim == herm2.dim
    assert r.mode == "by_subalgebra"


def test_reduce_by_subalgebra_corner(herm2, span_e11):
    r = red.reduce_by_subalgebra(herm2, span_e11)
    assert r.normalizer.dim == 2
    assert r.reducing_ideal.dim == 1
    assert r.quotient.dim == 1
    assert r.ideal_check.ok
    ok, _ = r.reducing_ideal.contains(span_e11)
    assert ok
    assert r.axiom_report.passed
    assert r.quotient.unit is not None
    assert np.isclose(r.quotient.norm(r.quotient.unit), 1.0)


def test_reduce_by_subalgebra_rejects_unit(herm2, paulis):
    with pytest.raises(UnitalSubalgebraError):
        red.reduce_by_subalgebra(
            herm2, ms.span(AMB2, [paulis["I"]], hermitian=True))
    with pytest.raises(UnitalSubalgebraError):
        red.reduce_by_subalgebra(herm2, herm2.carrier)


def test_reduce_by_subalgebra_rejects_non_subalgebra(herm2, paulis):
    with pytest.raises(NotASubalgebraError) as exc:
        red.reduce_by_subalgebra(
            herm2, ms.span(AMB2, [paulis["x"]], hermitian=True))
    assert exc.value.witness is not None


def test_support_projection_cases(e11):
    diag = ms.span(AMB2, [unit_matrix(0, 0, 2), unit_matrix(1, 1, 2),
                          1j * unit_matrix(0, 0, 2),
                          1j * unit_matrix(1, 1, 2)])
    ambient = core.cstar_from_span(diag, unit=np.eye(2, dtype=complex))
    z = ms.zero_subspace(AMB2)
    assert np.allclose(red.support_projection(z, ambient), np.zeros((2, 2)))
    assert np.allclose(red.support_projection(diag, ambient), np.eye(2))
    d = ms.span(AMB2, [e11, 1j * e11])
    assert np.allclose(red.support_projection(d, ambient), e11)


def test_support_projection_rejects_non_ideal(herm2, e11):
    full = core.complexify(herm2)
    d = ms.span(AMB2, [e11, 1j * e11])
    with pytest.raises(NotAnIdealError):
        red.support_projection(d, full)  # corner is not an ideal of M_2


def test_quotient_norm_examples(e11):
    amb = AMB2
    diag = core.ljb_algebra(ms.span(
        amb, [unit_matrix(0, 0, 2), unit_matrix(1, 1, 2)], hermitian=True))
    j = ms.span(amb, [e11], hermitian=True)
    r = red.reduce_by_ideal(diag, j)
    a = np.diag([3.0, 5.0]).astype(complex)
    assert np.isclose(red.quotient_norm(r, a), 5.0)
    assert red.quotient_norm(r, e11) <= 1e-12
    with pytest.raises(MembershipError):
        red.quotient_norm(r, np.array([[0, 1], [1, 0]], dtype=complex))


def test_quotient_norm_inf_oracle_agrees(e11):
    diag = core.ljb_algebra(ms.span(
        AMB2, [unit_matrix(0, 0, 2), unit_matrix(1, 1, 2)], hermitian=True))
    r = red.reduce_by_ideal(diag, ms.span(AMB2, [e11], hermitian=True))
    rng = np.random.default_rng(1)
    for _ in range(3):
        a = r.normalizer.random_element(rng)
        structural = red.quotient_norm(r, a)
        oracle = red.quotient_norm_infimum(r, a)
        assert abs(structural - oracle) <= 1e-6 * max(1.0, oracle)


def test_quotient_norm_contraction():
    spec = GenSpec(seed=5, n=4, profile="block_diagonal", block_sizes=(2, 2))
    alg = gen_algebra(spec)
    j = gen_ideal(spec)
    r = red.reduce_by_ideal(alg, j)
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = r.normalizer.random_element(rng)
        assert red.quotient_norm(r, a) <= np.linalg.norm(a, 2) + 1e-10


def test_quotient_well_defined():
    for seed in range(4):
        spec = GenSpec(seed=seed, n=4, profile="block_diagonal",
                       block_sizes=(2, 2))
        alg = gen_algebra(spec)
        r = red.reduce_by_ideal(alg, gen_ideal(spec))
        assert red.verify_quotient_well_defined(r, trials=10,
                                                rng_seed=seed).passed


def test_quotient_automorphism_flow():
    # exp(t [a, .]) on a quotient carrier, through the projected bracket
    spec = GenSpec(seed=9, n=3, profile="block_diagonal", block_sizes=(2, 1))
    alg = gen_algebra(spec)
    r = red.reduce_by_ideal(alg, gen_ideal(spec))
    if r.quotient.dim:
        rng = np.random.default_rng(3)
        a = r.quotient.random_element(rng)
        rep = core.verify_jordan_automorphism(r.quotient, a, [0.0, 0.7, -1.3])
        assert rep.passed

import numpy as np
import pytest
from scipy.linalg import expm

from ljreduce import core, matspace as ms
from ljreduce.errors import (
    ClosureError,
    HermiticityError,
    MembershipError,
    ParameterError,
)

from conftest import random_hermitian, unit_matrix

AMB2 = ms.AmbientSpace(2)


def test_params_constraint():
    core.LJBParams(0.5, 1.0)
    core.LJBParams(0.25, 4.0)
    core.LJBParams(-0.5, 1.0)
    with pytest.raises(ParameterError):
        core.LJBParams(1.0, 1.0)
    with pytest.raises(ParameterError):
        core.LJBParams(0.5, -1.0)
    with pytest.raises(ParameterError):
        core.LJBParams(0.5, 0.0)


def test_jordan_product_examples(paulis):
    rng = np.random.default_rng(0)
    a = random_hermitian(rng, 2)
    assert np.allclose(core.jordan_product(paulis["I"], a), a)
    assert np.allclose(core.jordan_product(paulis["x"], paulis["y"]),
                       np.zeros((2, 2)))
    assert np.allclose(core.jordan_product(a, a), a @ a)
    b = random_hermitian(rng, 2)
    assert np.allclose(core.jordan_product(a, b), core.jordan_product(b, a))


def test_jordan_product_errors(paulis):
    with pytest.raises(HermiticityError):
        core.jordan_product(unit_matrix(0, 1, 2), paulis["x"])
    with pytest.raises(Exception):
        core.jordan_product(paulis["x"], np.eye(3))


def test_lie_bracket_examples(paulis):
    p = core.LJBParams()
    rng = np.random.default_rng(1)
    a = random_hermitian(rng, 2)
    assert np.allclose(core.lie_bracket(a, a, p), np.zeros((2, 2)))
    assert np.allclose(core.lie_bracket(paulis["I"], a, p), np.zeros((2, 2)))
    # i/2 (sx sy - sy sx) = -sz
    assert np.allclose(core.lie_bracket(paulis["x"], paulis["y"], p),
                       -paulis["z"])
    out = core.lie_bracket(a, random_hermitian(rng, 2), p)
    assert np.linalg.norm(out - out.conj().T) <= 1e-14


def test_associative_product_reduces_to_matrix_product(paulis):
    p = core.LJBParams()
    rng = np.random.default_rng(2)
    a = random_hermitian(rng, 2)
    assert np.allclose(core.associative_product(a, paulis["I"], p), a)
    assert np.allclose(core.associative_product(paulis["x"], paulis["y"], p),
                       1j * paulis["z"])
    for _ in range(20):
        x = random_hermitian(rng, 3)
        y = random_hermitian(rng, 3)
        z = random_hermitian(rng, 3)
        lhs = core.associative_product(core.associative_product(x, y, p), z, p)
        rhs = core.associative_product(x, core.associative_product(y, z, p), p)
        assert np.linalg.norm(lhs - rhs) <= 1e-10 * (
            1 + np.linalg.norm(x) * np.linalg.norm(y) * np.linalg.norm(z))


@pytest.mark.parametrize("lam,kappa", [(0.5, 1.0), (0.25, 4.0), (-0.5, 1.0)])
def test_recovery_identities(lam, kappa):
    p = core.LJBParams(lam, kappa)
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = random_hermitian(rng, 3)
        b = random_hermitian(rng, 3)
        dot_ab = core.associative_product(a, b, p)
        dot_ba = core.associative_product(b, a, p)
        assert np.allclose(core.jordan_product(a, b), (dot_ab + dot_ba) / 2,
                           atol=1e-12)
        assert np.allclose(core.lie_bracket(a, b, p),
                           1j / (2 * np.sqrt(kappa)) * (dot_ab - dot_ba),
                           atol=1e-12)


def test_associator_identity_bulk():
    p = core.LJBParams()
    rng = np.random.default_rng(4)
    for _ in range(1000):
        n = int(rng.integers(1, 6))
        a = random_hermitian(rng, n)
        b = random_hermitian(rng, n)
        c = random_hermitian(rng, n)
        jo = core.jordan_product
        resid = jo(jo(a, b), c) - jo(a, jo(b, c)) \
            - p.kappa * core.lie_bracket(b, core.lie_bracket(c, a, p), p)
        scale = 1 + np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(c)
        assert np.linalg.norm(resid) <= 1e-9 * scale


def test_axioms_full_hermitian(herm2):
    rep = core.verify_ljb_axioms(herm2, trials=25, rng_seed=0)
    assert rep.passed
    assert rep.worst <= 1e-12


def test_axioms_commutative(diag3):
    rep = core.verify_ljb_axioms(diag3, trials=25, rng_seed=0)
    assert rep.passed
    # brackets vanish identically on a commuting carrier
    assert rep.residuals["jacobi"] == 0.0
    assert rep.residuals["leibniz"] == 0.0
    assert rep.residuals["associator"] <= 1e-15
    rep2 = core.verify_dynamical_correspondence(diag3, trials=10, rng_seed=0)
    assert rep2.passed
    assert rep2.residuals["skew"] == 0.0
    assert rep2.residuals["antisymmetry"] == 0.0
    assert rep2.residuals["correspondence"] <= 1e-15


def test_axioms_report_closure_failure(paulis):
    bad = core.ljb_algebra(ms.span(AMB2, [paulis["x"], paulis["z"]],
                                   hermitian=True))
    rep = core.verify_ljb_axioms(bad, trials=5, rng_seed=0)
    assert not rep.passed
    assert rep.residuals["closure"] > 1e-3
    assert rep.witness is not None


def test_dynamical_correspondence(herm2):
    rep = core.verify_dynamical_correspondence(herm2, trials=25, rng_seed=0)
    assert rep.passed
    assert rep.residuals["unit_central"] == 0.0


def test_dynamical_correspondence_full_3():
    amb = ms.AmbientSpace(3)
    from ljreduce.genrand import hermitian_basis

    alg = core.ljb_algebra(ms.span(amb, hermitian_basis(3), hermitian=True))
    rep = core.verify_dynamical_correspondence(alg, trials=20, rng_seed=1)
    assert rep.passed


def test_automorphism_identity_at_zero(herm2, paulis):
    rep = core.verify_jordan_automorphism(herm2, paulis["z"], [0.0])
    assert rep.passed


def test_automorphism_pi_rotation(herm2, paulis):
    # oracle: U = expm(i pi sz / 2) conjugates sx to -sx
    u = expm(1j * np.pi * 0.5 * paulis["z"])
    assert np.linalg.norm(u @ paulis["x"] @ u.conj().T + paulis["x"]) <= 1e-12
    rep = core.verify_jordan_automorphism(herm2, paulis["z"],
                                          [np.pi, 0.3, 1.7])
    assert rep.passed


def test_automorphism_unit_generator(herm2, paulis):
    rep = core.verify_jordan_automorphism(herm2, paulis["I"], [0.0, 1.0, 2.5])
    assert rep.passed


def test_automorphism_many_generators(herm2):
    rng = np.random.default_rng(5)
    for k in range(10):
        a = herm2.random_element(rng)
        ts = rng.normal(size=5)
        rep = core.verify_jordan_automorphism(herm2, a, ts, rng_seed=k)
        assert rep.passed


def test_automorphism_requires_membership(herm2):
    with pytest.raises(MembershipError):
        core.verify_jordan_automorphism(
            core.ljb_algebra(ms.span(AMB2, [np.eye(2, dtype=complex)],
                                     hermitian=True)),
            np.diag([1.0, -1.0]).astype(complex), [0.1])


def test_complexify_full(herm2):
    a = core.complexify(herm2)
    assert a.dim_complex == 4
    assert a.space.dim == 2 * herm2.dim
    h = a.hermitian_part()
    assert ms.subspaces_equal(h, herm2.carrier)[0]


def test_complexify_diagonal():
    amb = ms.AmbientSpace(2)
    gens = [unit_matrix(0, 0, 2), unit_matrix(1, 1, 2)]
    alg = core.ljb_algebra(ms.span(amb, gens, hermitian=True))
    a = core.complexify(alg)
    assert a.dim_complex == 2
    assert a.member(np.diag([1j, 2.0]))[0]
    assert not a.member(unit_matrix(0, 1, 2))[0]


def test_complexify_abelian_span(paulis):
    alg = core.ljb_algebra(ms.span(AMB2, [paulis["I"], paulis["x"]],
                                   hermitian=True))
    a = core.complexify(alg)
    assert a.dim_complex == 2


def test_complexify_rejects_non_closed(paulis):
    bad = core.ljb_algebra(ms.span(AMB2, [paulis["x"], paulis["z"]],
                                   hermitian=True))
    with pytest.raises(ClosureError):
        core.complexify(bad)


def test_cstar_identity_random(herm2):
    a = core.complexify(herm2)
    rng = np.random.default_rng(6)
    for _ in range(10):
        x = a.random_element(rng)
        lhs = a.norm(a.product(a.involution(x), x))
        assert abs(lhs - a.norm(x) ** 2) <= 1e-10 * (1 + a.norm(x) ** 2)


def test_operator_norm_matches_svd():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.isclose(core.operator_norm(x), np.linalg.svd(x, compute_uv=False)[0])


def test_find_jordan_unit(paulis):
    e11 = unit_matrix(0, 0, 2)
    s = ms.span(AMB2, [e11], hermitian=True)
    e = core.find_jordan_unit(s)
    assert e is not None
    assert np.allclose(e, e11)
    assert core.find_jordan_unit(ms.span(AMB2, [paulis["x"]],
                                         hermitian=True)) is None

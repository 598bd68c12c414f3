import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steerkit.antilinear import (AntilinearOp, adjoint, antiunitarity_residual, apply, check_similarity,
                                 factorization_residuals, from_state, hs_norm_sq, polar_factorize)
from steerkit.errors import DimensionMismatch, InconsistentInput
from steerkit.sampling import random_state, random_unit
from steerkit.state import make_state, product_state, reduced_density, schmidt

BELL = make_state([[1, 0], [0, 1]])


def partial_scalar_product(coeffs, psi):
    """<psi|_1 |Phi>_12, component by component."""
    d1, d2 = coeffs.shape
    return np.array([sum(np.conj(psi[k]) * coeffs[k, n] for k in range(d1)) for n in range(d2)])


def test_bell_basis_extraction():
    np.testing.assert_allclose(apply(from_state(BELL), [1, 0]), [2 ** -0.5, 0])


def test_product_state_factorizes(rng):
    chi, phi = random_unit(rng, 3), random_unit(rng, 2)
    a = from_state(product_state(chi, phi))
    psi = random_unit(rng, 3)
    np.testing.assert_allclose(apply(a, psi), np.vdot(psi, chi) * phi, atol=1e-14)


def test_from_state_matches_partial_scalar_product(rng):
    s = random_state(rng, 3, 4)
    psi = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert np.max(np.abs(apply(from_state(s), psi) - partial_scalar_product(s.coeffs, psi))) < 1e-12


def test_apply_basics(rng):
    m = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    a = AntilinearOp(m)
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    np.testing.assert_array_equal(apply(a, np.zeros(2)), np.zeros(3))
    np.testing.assert_allclose(apply(a, 1j * psi), -1j * apply(a, psi), atol=1e-14)
    assert np.max(np.abs(a(psi) - m @ np.conj(psi))) < 1e-14
    with pytest.raises(DimensionMismatch):
        apply(a, np.zeros(3))


def test_adjoint_involution_and_real_symmetric(rng):
    m = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    a = AntilinearOp(m)
    np.testing.assert_array_equal(adjoint(adjoint(a)).matrix, m)
    d = np.diag([0.2, 1.5])
    np.testing.assert_array_equal(adjoint(AntilinearOp(d)).matrix, d)


def test_adjoint_pairing_identity(rng):
    a = AntilinearOp(rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3)))
    a_dag = adjoint(a)
    for _ in range(20):
        psi = rng.normal(size=3) + 1j * rng.normal(size=3)
        phi = rng.normal(size=4) + 1j * rng.normal(size=4)
        lhs = np.vdot(apply(a, psi), phi)
        rhs = np.conj(np.vdot(psi, apply(a_dag, phi)))
        assert abs(lhs - rhs) < 1e-12


def test_hs_norm(rng):
    assert hs_norm_sq(AntilinearOp(np.zeros((2, 3)))) == 0
    assert hs_norm_sq(from_state(random_state(rng, 3, 5))) == pytest.approx(1.0, abs=1e-12)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    expected = sum(abs(m[i, j]) ** 2 for i in range(3) for j in range(3))
    assert abs(hs_norm_sq(AntilinearOp(m)) - expected) < 1e-14 * expected
    assert hs_norm_sq(adjoint(AntilinearOp(m))) == pytest.approx(hs_norm_sq(AntilinearOp(m)))


def test_adjoint_products_give_reduced_densities(rng):
    s = random_state(rng, 3, 4)
    a = from_state(s)
    assert np.max(np.abs(a.compose(adjoint(a)) - reduced_density(s, 2).matrix)) < 1e-14
    assert np.max(np.abs(adjoint(a).compose(a) - reduced_density(s, 1).matrix)) < 1e-14


def test_polar_bell():
    polar = polar_factorize(from_state(BELL), BELL)
    np.testing.assert_allclose(polar.sqrt_rho1, np.eye(2) / np.sqrt(2), atol=1e-15)
    # U maps each basis vector to its partner and conjugates coefficients
    u = polar.correlation
    np.testing.assert_allclose(u([1j, 0]), [-1j, 0], atol=1e-15)
    np.testing.assert_allclose(u([0, 1]), [0, 1], atol=1e-15)


def test_polar_product_state():
    chi, phi = np.array([1, 1j]) / np.sqrt(2), np.array([0, 0, 1.0])
    s = product_state(chi, phi)
    polar = polar_factorize(from_state(s), s)
    np.testing.assert_allclose(polar.q1, np.outer(chi, chi.conj()), atol=1e-15)
    image = polar.correlation(chi)
    assert abs(abs(np.vdot(phi, image)) - 1) < 1e-14
    np.testing.assert_allclose(image, phi, atol=1e-14)


def test_polar_random_residuals(rng):
    s = random_state(rng, 4, 5)
    a = from_state(s)
    polar = polar_factorize(a, s)
    res = factorization_residuals(a, polar)
    assert res["polar_right"] < 1e-10 and res["polar_left"] < 1e-10
    assert check_similarity(polar, reduced_density(s, 1), reduced_density(s, 2)) < 1e-10
    assert antiunitarity_residual(polar) < 1e-10
    for q in (polar.q1, polar.q2):
        assert np.max(np.abs(q @ q - q)) < 1e-10 and np.max(np.abs(q - q.conj().T)) < 1e-10


def test_polar_inconsistent_input(rng):
    s = random_state(rng, 2, 3)
    with pytest.raises(InconsistentInput):
        polar_factorize(AntilinearOp(np.zeros((3, 2))), s)
    with pytest.raises(InconsistentInput):
        polar_factorize(AntilinearOp(np.zeros((2, 3))), s)


@pytest.mark.parametrize("state", [BELL, product_state([1, 0], [0, 1])], ids=["bell", "product"])
def test_similarity_exact_cases(state):
    polar = polar_factorize(from_state(state), state)
    assert check_similarity(polar, reduced_density(state, 1), reduced_density(state, 2)) < 1e-12


def test_similarity_random_square(rng):
    s = random_state(rng, 4, 4)
    polar = polar_factorize(from_state(s), s)
    assert check_similarity(polar, reduced_density(s, 1), reduced_density(s, 2)) < 1e-10


def test_similarity_dimension_mismatch(rng):
    s = random_state(rng, 2, 3)
    polar = polar_factorize(from_state(s), s)
    with pytest.raises(DimensionMismatch):
        check_similarity(polar, reduced_density(s, 2), reduced_density(s, 1))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), d1=st.integers(1, 6), d2=st.integers(1, 6), data=st.data())
def test_antilinear_invariants(seed, d1, d2, data):
    rng = np.random.default_rng(seed)
    rank = data.draw(st.integers(1, min(d1, d2)))
    s = random_state(rng, d1, d2, rank=rank)
    a = from_state(s)
    polar = polar_factorize(a, s)
    psi, chi = random_unit(rng, d1), random_unit(rng, d1)
    alpha, beta = rng.normal(size=2) + 1j * rng.normal(size=2)
    lhs = apply(a, alpha * psi + beta * chi)
    rhs = np.conj(alpha) * apply(a, psi) + np.conj(beta) * apply(a, chi)
    assert np.max(np.abs(lhs - rhs)) < 1e-12
    # A = A Q1
    assert np.max(np.abs(a.matrix - a.after(polar.q1).matrix)) < 1e-10
    # A and Q1 have the same null space, with the Schmidt coefficients as bounds
    sd = schmidt(s)
    norm_a, norm_q = np.linalg.norm(apply(a, psi)), np.linalg.norm(polar.q1 @ psi)
    assert norm_a <= sd.coefficients[0] * norm_q + 1e-10
    assert norm_a >= sd.coefficients[-1] * norm_q - 1e-10
    # antiunitarity on random support vectors
    x = polar.q1 @ (rng.normal(size=d1) + 1j * rng.normal(size=d1))
    y = polar.q1 @ (rng.normal(size=d1) + 1j * rng.normal(size=d1))
    assert abs(np.vdot(polar.correlation(x), polar.correlation(y)) - np.vdot(y, x)) < 1e-10 * (1 + np.linalg.norm(x) * np.linalg.norm(y))
    res = factorization_residuals(a, polar)
    assert max(res.values()) < 1e-10
    assert antiunitarity_residual(polar) < 1e-10
    assert check_similarity(polar, reduced_density(s, 1), reduced_density(s, 2)) < 1e-10

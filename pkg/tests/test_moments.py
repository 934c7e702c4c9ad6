import math

import numpy as np
import pytest

from conftest import random_gauss_poly, trapezoid_integrate

from ncphase import (
    GaussPoly,
    ModelParams,
    MomentTable,
    PhaseVariables,
    derive,
    integrate,
    marginalize,
    reduce,
    wigner_state,
)

V2 = PhaseVariables(2, hbar=1.0)
V4 = PhaseVariables(4, hbar=1.0)


def test_ground_state_normalization():
    for mu, nu in [(0.0, 0.0), (0.3, 0.1), (1.0, 0.0), (0.5, -0.4)]:
        state = wigner_state(0, 0, ModelParams(mu=mu, nu=nu))
        assert integrate(state.function) == pytest.approx(1.0, abs=1e-12)


def test_unit_variance_second_moment():
    f = GaussPoly(V2, 1.0 / math.pi, -np.eye(2), {(2, 0): 1.0})
    assert integrate(f) == pytest.approx(0.5, rel=1e-13)


def test_entropy_integrand_value():
    # the quadratic weighting the reduced log: its expectation equals 1
    # (frozen from the dense-quadrature oracle below)
    params = ModelParams(mu=1.0, nu=0.0)
    dq = derive(params)
    reduced = reduce(wigner_state(0, 0, params), 1).function
    root = math.sqrt(1.0 + dq.delta**2)
    quad = GaussPoly(V2, 1.0, np.zeros((2, 2)), {
        (2, 0): root * params.mass * params.omega / params.hbar
                / (1.0 + dq.delta**2 + dq.delta * dq.eta),
        (0, 2): root / (params.hbar * params.mass * params.omega)
                / (1.0 + dq.delta**2 - dq.delta * dq.eta),
    })
    product = reduced.pointwise_mul(quad)
    exact = integrate(product)
    oracle = trapezoid_integrate(product, sigmas=8.0, nodes=201)
    assert exact == pytest.approx(oracle, rel=1e-7)
    assert exact == pytest.approx(1.0, rel=1e-12)


def test_moment_table_basics():
    table = MomentTable(np.diag([2.0, 3.0]))
    assert table.moment((0, 0)) == 1.0
    assert table.moment((1, 0)) == 0.0
    assert table.moment((2, 0)) == pytest.approx(2.0)
    assert table.moment((2, 2)) == pytest.approx(6.0)
    assert table.moment((4, 0)) == pytest.approx(3 * 2.0**2)


def test_moment_degree_cap():
    table = MomentTable(np.eye(2))
    with pytest.raises(ValueError):
        table.moment((50, 0))


def test_non_negative_definite_rejected():
    f = GaussPoly(V2, 1.0, np.diag([-1.0, 1.0]), {(0, 0): 1.0})
    with pytest.raises(ValueError):
        integrate(f)


def test_linearity(rng):
    f = random_gauss_poly(rng, 2)
    g = GaussPoly(V2, 1.0, f.exponent, {(1, 1): 0.7, (0, 0): -0.2})
    a, b = 1.7, -0.9
    combo = f.scaled(a) + g.scaled(b)
    assert integrate(combo) == pytest.approx(
        a * integrate(f) + b * integrate(g), rel=1e-12)


def test_marginalize_product_state():
    f = GaussPoly.gaussian(V4, 1.0 / math.pi**2, -np.eye(4))
    out = marginalize(f, keep=1)
    assert out.variables.dimension == 2
    assert out.prefactor * out.poly[(0, 0)] == pytest.approx(1.0 / math.pi,
                                                             rel=1e-13)
    assert np.allclose(out.exponent, -np.eye(2), atol=1e-14)


@pytest.mark.parametrize("keep", [1, 2])
def test_marginal_matches_closed_form(keep, rng):
    # exact Schur-complement marginal versus the closed-form reduced Gaussian
    for _ in range(10):
        mu = rng.uniform(-1.5, 1.5)
        nu = rng.uniform(-0.6, 0.6)
        if not -1.0 < mu * nu < 1.0:
            continue
        params = ModelParams(mu=mu, nu=nu)
        state = wigner_state(0, 0, params)
        closed = reduce(state, keep).function
        marg = marginalize(state.function, keep=keep)
        pts = rng.normal(scale=1.5, size=(200, 2))
        got = marg.value(pts)
        want = closed.value(pts)
        assert np.abs(got - want).max() <= 1e-10 * np.abs(want).max()


def test_fubini(rng):
    for _ in range(5):
        f = random_gauss_poly(rng, 4)
        direct = integrate(f)
        via_marginal = integrate(marginalize(f, keep=1))
        assert via_marginal == pytest.approx(direct, rel=1e-12)


def test_against_dense_quadrature_2d(rng):
    for _ in range(10):
        f = random_gauss_poly(rng, 2, max_degree=4)
        assert integrate(f) == pytest.approx(
            trapezoid_integrate(f, sigmas=8.0, nodes=201), rel=1e-7)


def test_against_dense_quadrature_4d(rng):
    for _ in range(3):
        f = random_gauss_poly(rng, 4, max_degree=4)
        assert integrate(f) == pytest.approx(
            trapezoid_integrate(f, sigmas=8.0, nodes=41), rel=1e-7)


def test_marginalize_requires_four_variables():
    f = GaussPoly.gaussian(V2, 1.0, -np.eye(2))
    with pytest.raises(ValueError):
        marginalize(f, keep=1)

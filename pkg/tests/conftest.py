"""Shared test fixtures and independent numerical oracles."""

import math

import numpy as np
import pytest

from ncphase import GaussPoly, ModelParams, PhaseVariables, derive


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def params_for_lambda(lam: float, hbar=1.0, mass=1.0, omega=1.0) -> ModelParams:
    """A valid parameter point whose purity parameter equals lam.

    Solves delta^2 and theta jointly; lam = 1 maps to the undeformed point.
    """
    if lam == 1.0:
        return ModelParams(hbar=hbar, mass=mass, omega=omega)
    if not math.sqrt(3.0) / 3.0 < lam < 1.0:
        raise ValueError("lam must lie in (sqrt(3)/3, 1]")
    d_min = (1.0 - lam**2) / (3.0 * lam**2 - 1.0)
    dd = 4.0 * d_min
    theta = (1.0 + 2.0 * dd - (1.0 + dd) / lam**2) / dd
    delta = math.sqrt(dd)
    eta = math.sqrt(theta + dd)
    mu = hbar * (eta + delta) / (mass * omega)
    nu = hbar * mass * omega * (eta - delta)
    params = ModelParams(hbar=hbar, mass=mass, omega=omega, mu=mu, nu=nu)
    assert abs(derive(params).lam - lam) < 1e-9, "helper self-check"
    return params


def trapezoid_integrate(func: GaussPoly, sigmas: float = 8.0,
                        nodes: int = 201) -> float:
    """Dense trapezoid quadrature over [-sigmas, +sigmas] marginal widths.

    Deliberately independent of the moment-formula route; test-suite only.
    """
    d = func.variables.dimension
    cov = -0.5 * np.linalg.inv(func.exponent)
    widths = np.sqrt(np.diag(cov))
    axes = [np.linspace(-sigmas * w, sigmas * w, nodes) for w in widths]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    vals = np.real(func.value(pts)).reshape([nodes] * d)
    for axis in reversed(range(d)):
        vals = np.trapezoid(vals, axes[axis], axis=axis)
    return float(vals)


def random_gauss_poly(rng, dimension: int = 2, max_degree: int = 4,
                      hbar: float = 1.0) -> GaussPoly:
    """A random normalizable GaussPoly with a bounded-degree polynomial part."""
    variables = PhaseVariables(dimension, hbar=hbar)
    a = rng.normal(size=(dimension, dimension))
    exponent = -(a.T @ a + 0.4 * np.eye(dimension))
    poly = {}
    n_terms = int(rng.integers(1, 6))
    for _ in range(n_terms):
        while True:
            mono = tuple(int(rng.integers(0, max_degree + 1))
                         for _ in range(dimension))
            if sum(mono) <= max_degree:
                break
        poly[mono] = float(rng.normal())
    poly[(0,) * dimension] = poly.get((0,) * dimension, 0.0) + 2.0
    return GaussPoly(variables, float(rng.uniform(0.5, 2.0)), exponent, poly)


def random_symplectic(rng, n_pairs: int = 2) -> np.ndarray:
    """Random canonical symplectic matrix (block ordering: positions, momenta)."""
    n = n_pairs
    eye = np.eye(n)
    c = rng.normal(size=(n, n), scale=0.5)
    c = 0.5 * (c + c.T)
    d = rng.normal(size=(n, n), scale=0.5)
    d = 0.5 * (d + d.T)
    a = np.eye(n) + rng.normal(size=(n, n), scale=0.3)
    shear_low = np.block([[eye, np.zeros((n, n))], [c, eye]])
    shear_up = np.block([[eye, d], [np.zeros((n, n)), eye]])
    scale = np.block([[a, np.zeros((n, n))],
                      [np.zeros((n, n)), np.linalg.inv(a).T]])
    return shear_low @ scale @ shear_up

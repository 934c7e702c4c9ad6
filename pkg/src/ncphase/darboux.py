"""Linear map between canonical and deformed phase-space coordinates.

A scaled Bopp shift realizes the deformed commutators exactly:

    x_i = kappa y_i - (mu / 2 hbar kappa) eps_ij q_j
    p_i = kappa q_i + (nu / 2 hbar kappa) eps_ij y_j

with kappa^2 = (1 + sqrt(1 - mu nu / hbar^2)) / 2. The naive unscaled shift
misses the x-p commutator at order mu*nu; the kappa scaling restores it and
gives det M = 1 - mu nu / hbar^2 exactly. Only the determinant (the minimal
cell deformation) is used downstream; composing with any canonical symplectic
matrix yields an equally valid map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import ModelParams


@dataclass(frozen=True)
class DarbouxMap:
    """Matrix M acting as (x1, x2, p1, p2)^T = M (y1, y2, q1, q2)^T."""

    matrix: np.ndarray


def omega_canonical(hbar: float) -> np.ndarray:
    """Canonical commutator matrix over (y1, y2, q1, q2), divided by i."""
    return hbar * np.array(
        [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ]
    )


def omega_deformed(params: ModelParams) -> np.ndarray:
    """Deformed commutator matrix over (x1, x2, p1, p2), divided by i."""
    h, mu, nu = params.hbar, params.mu, params.nu
    return np.array(
        [
            [0.0, mu, h, 0.0],
            [-mu, 0.0, 0.0, h],
            [-h, 0.0, 0.0, nu],
            [0.0, -h, -nu, 0.0],
        ]
    )


def build_map(params: ModelParams) -> DarbouxMap:
    """Concrete solution of M Omega0 M^T = Omega_deformed with |M| = 1 - mu nu/hbar^2."""
    h, mu, nu = params.hbar, params.mu, params.nu
    if mu * nu >= h**2:
        raise ValueError("mu*nu must stay below hbar^2 (singular minimal cell)")
    kappa = math.sqrt((1.0 + math.sqrt(1.0 - mu * nu / h**2)) / 2.0)
    beta = mu / (2.0 * h * kappa)
    sigma = nu / (2.0 * h * kappa)
    matrix = np.array(
        [
            [kappa, 0.0, 0.0, -beta],
            [0.0, kappa, beta, 0.0],
            [0.0, sigma, kappa, 0.0],
            [-sigma, 0.0, 0.0, kappa],
        ]
    )
    return DarbouxMap(matrix)


def cell_size(params: ModelParams) -> float:
    """Volume of the minimal phase-space cell, 4 pi^2 (hbar^2 - mu nu)."""
    h = params.hbar
    if params.mu * params.nu >= h**2:
        raise ValueError("mu*nu must stay below hbar^2 (singular minimal cell)")
    return 4.0 * math.pi**2 * (h**2 - params.mu * params.nu)

"""Deformation quantization and entanglement entropy of oscillators on a
noncommutative phase space."""

from .params import (
    LAMBDA_MIN,
    DerivedQuantities,
    ModelParams,
    derive,
    lambda_from_theta,
    lambda_from_uv,
    load_params,
)
from .starcalc import (
    GaussPoly,
    PhaseVariables,
    QuadraticForm,
    gaussian_star,
    k_constant,
    star_exp,
    star_log_gaussian,
    star_power,
    star_product_poly_left,
    star_product_poly_right,
)
from .moments import MomentTable, integrate, marginalize
from .wigner import (
    ReducedState,
    WignerState,
    energy_level,
    genvalue_residual,
    hamiltonians_pm,
    oscillator_hamiltonian,
    reduce,
    wigner_state,
)
from .entropy import (
    BetaGamma,
    EntropyResult,
    beta_gamma,
    e1_nu_zero,
    e1_nu_zero_supremum,
    minimal_cell,
    renyi_entanglement,
    renyi_numeric,
    renyi_supremum,
    renyi_total,
    tsallis_entanglement,
    tsallis_numeric,
    von_neumann_entanglement,
    von_neumann_numeric,
    von_neumann_supremum,
)
from .darboux import DarbouxMap, build_map, cell_size, omega_canonical, omega_deformed

__version__ = "0.1.0"

__all__ = [
    "LAMBDA_MIN",
    "DerivedQuantities",
    "ModelParams",
    "derive",
    "lambda_from_theta",
    "lambda_from_uv",
    "load_params",
    "GaussPoly",
    "PhaseVariables",
    "QuadraticForm",
    "gaussian_star",
    "k_constant",
    "star_exp",
    "star_log_gaussian",
    "star_power",
    "star_product_poly_left",
    "star_product_poly_right",
    "MomentTable",
    "integrate",
    "marginalize",
    "ReducedState",
    "WignerState",
    "energy_level",
    "genvalue_residual",
    "hamiltonians_pm",
    "oscillator_hamiltonian",
    "reduce",
    "wigner_state",
    "BetaGamma",
    "EntropyResult",
    "beta_gamma",
    "e1_nu_zero",
    "e1_nu_zero_supremum",
    "minimal_cell",
    "renyi_entanglement",
    "renyi_numeric",
    "renyi_supremum",
    "renyi_total",
    "tsallis_entanglement",
    "tsallis_numeric",
    "von_neumann_entanglement",
    "von_neumann_numeric",
    "von_neumann_supremum",
    "DarbouxMap",
    "build_map",
    "cell_size",
    "omega_canonical",
    "omega_deformed",
]

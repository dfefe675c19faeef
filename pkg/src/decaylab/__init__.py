"""Self-similar Kummer weights and radial damped-wave / degenerate-heat solvers."""

from .grid import InitialData, ModelParams, RadialGrid, build_grid, parse_initial_data
from .special import KummerArgs, ProfileParams, gamma, kummer_m, kummer_u, varphi, varphi_derivative
from .weights import WeightSpec, phi_weight, psi

__version__ = "0.1.0"

__all__ = [
    "InitialData",
    "KummerArgs",
    "ModelParams",
    "ProfileParams",
    "RadialGrid",
    "WeightSpec",
    "build_grid",
    "gamma",
    "kummer_m",
    "kummer_u",
    "parse_initial_data",
    "phi_weight",
    "psi",
    "varphi",
    "varphi_derivative",
]

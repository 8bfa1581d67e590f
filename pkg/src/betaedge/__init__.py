"""Exact finite-N soft-edge densities of Gaussian and Laguerre
beta-ensembles (beta even), via Selberg-integral differential-difference
recurrences, with oracles and convergence diagnostics."""

from .ensembles import EnsembleSpec, Kind
from .normalization import DEFAULT_PRECISION_BITS, DensityModel, DensityTable, density
from .recurrence import run_full_recurrence
from .scaling import ScalingCase, ScalingMap, build_scaling, scaled_density

__version__ = "0.1.0"

__all__ = [
    "EnsembleSpec",
    "Kind",
    "DensityModel",
    "DensityTable",
    "density",
    "run_full_recurrence",
    "ScalingCase",
    "ScalingMap",
    "build_scaling",
    "scaled_density",
    "DEFAULT_PRECISION_BITS",
    "__version__",
]

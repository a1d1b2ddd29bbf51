"""Spectral method-of-lines solver for two-sided space-fractional advection-diffusion."""

from fracmol.odeint import TolSettings
from fracmol.problems import ProblemConfig, builtin, builtin_config, load_config
from fracmol.solver import ProblemSpec, error_metrics, evaluate, semidiscretize, solve

__all__ = [
    "ProblemConfig",
    "ProblemSpec",
    "TolSettings",
    "builtin",
    "builtin_config",
    "error_metrics",
    "evaluate",
    "load_config",
    "semidiscretize",
    "solve",
]
__version__ = "0.1.0"

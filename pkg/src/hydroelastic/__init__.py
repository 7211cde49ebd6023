"""Pseudospectral solver and certification harness for periodic hydroelastic travelling waves."""

from .energy import IllustrativeEnergy, SplittingEnergy, check_hypotheses, admissible_c2_interval
from .lagrangian import WaveState, j0, inner_chi_solve, grad_w_reduced
from .optimizer import SolveConfig, SolveResult, maximize, continuation_sweep
from .residuals import certify
from .spectral import Field

__all__ = [
    "Field", "IllustrativeEnergy", "SplittingEnergy", "check_hypotheses", "admissible_c2_interval",
    "WaveState", "j0", "inner_chi_solve", "grad_w_reduced", "SolveConfig", "SolveResult",
    "maximize", "continuation_sweep", "certify",
]

__version__ = "0.1.0"

"""Forward and inverse source problems for a time-fractional diffusion
equation with the non-local condition ``u(0) = u(T)``."""

from .errors import (
    ConfigError,
    DegenerateError,
    DomainError,
    EmptyCandidates,
    NonOrthogonalData,
    ShapeError,
)
from .forward import ForwardSolution, SourceProfile, residual_check, solve_forward
from .fraccalc import TimeGrid
from .inverse import classify_modes, lower_bound_scan, pick_t0, solve_inverse
from .mlf import ml, ml_classical, ml_deficit, mittag_leffler
from .spectral import SpectralOperator, dirichlet_laplacian_1d, project, synthesize

__version__ = "0.1.0"

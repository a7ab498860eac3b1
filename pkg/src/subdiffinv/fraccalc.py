"""Caputo fractional derivatives: the power rule and the L1 scheme."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t_m = m T / M`` on ``[0, T]``."""

    T: float
    M: int

    def __post_init__(self) -> None:
        if not (self.T > 0 and math.isfinite(self.T)):
            raise DomainError(f"T must be positive, got {self.T}")
        if int(self.M) != self.M or self.M < 2:
            raise DomainError(f"M must be an integer >= 2, got {self.M}")

    @property
    def h(self) -> float:
        return self.T / self.M

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.M + 1)


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function at every node of a :class:`TimeGrid`.

    ``values[0]`` may be ``nan`` for derivatives, which are undefined at ``t=0``.
    """

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.M + 1,):
            raise DomainError(
                f"expected {self.grid.M + 1} samples, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    def __add__(self, other: GridFunction) -> GridFunction:
        return GridFunction(self.grid, self.values + other.values)

    def __rmul__(self, a: float) -> GridFunction:
        return GridFunction(self.grid, a * self.values)


def caputo_power(p: float, rho: float, t) -> np.ndarray | float:
    """Caputo derivative of order ``rho`` of ``t**p``.

    Returns ``Gamma(p + 1) / Gamma(p + 1 - rho) * t**(p - rho)``.
    """
    if not p > 0:
        raise DomainError(f"power must be positive, got {p}")
    if not 0 < rho <= 1:
        raise DomainError(f"rho must lie in (0, 1], got {rho}")
    ta = np.asarray(t, dtype=float)
    if np.any(ta < 0):
        raise DomainError("t must be non-negative")
    c = math.gamma(p + 1.0) / math.gamma(p + 1.0 - rho)
    with np.errstate(divide="ignore"):
        out = c * ta ** (p - rho)
    return float(out) if np.ndim(t) == 0 else out


def l1_weights(n: int, rho: float) -> np.ndarray:
    """``(j + 1)**(1 - rho) - j**(1 - rho)`` for ``j = 0, ..., n - 1``."""
    j = np.arange(n, dtype=float)
    return (j + 1.0) ** (1.0 - rho) - j ** (1.0 - rho)


def caputo_l1(h: GridFunction, rho: float) -> GridFunction:
    """L1 approximation of the Caputo derivative at the nodes ``t_1 .. t_M``.

    The function is taken piecewise linear between nodes and the convolution
    integral is done exactly, which gives order ``2 - rho`` for smooth data.
    For ``rho = 1`` second order finite differences are used instead. The
    derivative at ``t_0`` is undefined and returned as ``nan``.
    """
    if not 0 < rho <= 1:
        raise DomainError(f"rho must lie in (0, 1], got {rho}")
    grid = h.grid
    u = h.values
    out = np.full(grid.M + 1, np.nan)
    if rho == 1.0:
        out[1:] = np.gradient(u, grid.h, edge_order=2)[1:]
        return GridFunction(grid, out)

    du = np.diff(u)
    w = l1_weights(grid.M, rho)
    # D[n] = sum_{j<n} w_j (u_{n-j} - u_{n-j-1}); increments sum exactly to zero
    # for constants, so they are annihilated without roundoff
    out[1:] = np.convolve(w, du)[: grid.M]
    out[1:] *= grid.h ** (-rho) / math.gamma(2.0 - rho)
    return GridFunction(grid, out)

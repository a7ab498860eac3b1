r"""Forward problem with the non-local time condition ``u(0) = u(T)``.

Mode by mode the solution is

.. math::

    u_k(t) = f_k \Big[ b_k(t) + \frac{b_k(T)}{1 - E_\rho(-\lambda_k T^\rho)}
             E_\rho(-\lambda_k t^\rho) \Big],
    \qquad
    b_k(t) = \int_0^t (t-s)^{\rho-1} E_{\rho,\rho}(-\lambda_k (t-s)^\rho) g(s)\, ds.

The convolution ``b_k`` is computed by product integration: ``g`` is taken
piecewise linear between its samples and integrated exactly against the
kernel through its first two antiderivatives

.. math::

    K_1(\sigma) = \sigma^\rho E_{\rho,\rho+1}(-\lambda\sigma^\rho)
                = (1 - E_\rho(-\lambda\sigma^\rho)) / \lambda, \qquad
    K_2(\sigma) = \sigma^{\rho+1} E_{\rho,\rho+2}(-\lambda\sigma^\rho),

so the weakly singular kernel is never sampled pointwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .errors import DegenerateError, DomainError, ShapeError
from .fraccalc import GridFunction, TimeGrid, caputo_l1
from .mlf import mittag_leffler, ml_deficit
from .spectral import SpectralOperator, synthesize

DEGENERATE_FLOOR = 1e-300


@dataclass(frozen=True)
class SourceProfile:
    """Samples of the scalar time factor ``g`` on a time grid.

    ``smoothness`` is ``"C1"`` when derivative samples accompany the values.
    """

    grid: TimeGrid
    values: np.ndarray
    smoothness: Literal["C0", "C1"] = "C0"
    derivative: np.ndarray | None = None
    name: str = "samples"

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.M + 1,):
            raise ShapeError(f"g needs {self.grid.M + 1} samples, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DomainError("g samples must be finite")
        object.__setattr__(self, "values", values)
        if self.smoothness == "C1":
            if self.derivative is None:
                raise DomainError("C1 profile requires derivative samples")
            d = np.asarray(self.derivative, dtype=float)
            if d.shape != values.shape or not np.all(np.isfinite(d)):
                raise ShapeError("derivative samples must match values and be finite")
            object.__setattr__(self, "derivative", d)
        elif self.smoothness != "C0":
            raise DomainError(f"unknown smoothness {self.smoothness!r}")

    @classmethod
    def from_function(
        cls,
        fn: Callable[[np.ndarray], np.ndarray],
        grid: TimeGrid,
        derivative: Callable[[np.ndarray], np.ndarray] | None = None,
        name: str = "function",
    ) -> SourceProfile:
        t = grid.nodes
        if derivative is None:
            return cls(grid, fn(t), "C0", None, name)
        return cls(grid, fn(t), "C1", derivative(t), name)

    def __call__(self, t) -> np.ndarray:
        """Piecewise linear interpolant of the samples."""
        return np.interp(t, self.grid.nodes, self.values)

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / self.grid.h


# {{{ kernel antiderivatives


def kernel_k1(lam, rho: float, s) -> np.ndarray:
    """First antiderivative of ``s**(rho-1) E_{rho,rho}(-lam s**rho)``."""
    lam = np.asarray(lam, dtype=float)
    s = np.asarray(s, dtype=float)
    return ml_deficit(rho, lam * s**rho) / lam


def kernel_k2(lam, rho: float, s) -> np.ndarray:
    """Second antiderivative, ``s**(rho+1) E_{rho,rho+2}(-lam s**rho)``."""
    lam = np.asarray(lam, dtype=float)
    s = np.asarray(s, dtype=float)
    return s ** (rho + 1.0) * mittag_leffler(rho, rho + 2.0, lam * s**rho)


def _check(lam, rho: float) -> None:
    if np.any(np.asarray(lam) <= 0):
        raise DomainError("eigenvalues must be positive")
    if not 0 < rho <= 1:
        raise DomainError(f"rho must lie in (0, 1], got {rho}")


# }}}


def b_coeff(lam: float, rho: float, t: float, g: SourceProfile) -> float:
    """Convolution ``b(t)`` of ``g`` with the relaxation kernel of eigenvalue ``lam``.

    ``t`` may be any point of ``[0, T]``; for constant ``g`` the result is
    ``g (1 - E_rho(-lam t**rho)) / lam`` up to roundoff.
    """
    _check(lam, rho)
    T = g.grid.T
    if not 0.0 <= t <= T:
        raise DomainError(f"t={t} lies outside [0, {T}]")
    if t == 0.0:
        return 0.0
    nodes = g.grid.nodes
    # pieces [t_{m-1}, t_m] of the interpolant that start before t
    m = np.arange(1, g.grid.M + 1)
    m = m[nodes[m - 1] < t]
    hi = t - nodes[m - 1]
    lo = np.maximum(t - nodes[m], 0.0)
    k2 = kernel_k2(lam, rho, np.concatenate([hi, lo]))
    k2_hi, k2_lo = k2[: m.size], k2[m.size :]
    slope = g.slopes[m - 1]
    tail = math.fsum(slope * (k2_hi - k2_lo))
    return float(g.values[0] * kernel_k1(lam, rho, t) + tail)


def b_on_grid(lams, rho: float, g: SourceProfile) -> np.ndarray:
    """``b_k(t_m)`` for every eigenvalue and every node, shape ``(N, M + 1)``."""
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    _check(lams, rho)
    s = g.grid.nodes
    x = lams[:, None] * s[None, :] ** rho
    k1 = ml_deficit(rho, x) / lams[:, None]
    k2 = s[None, :] ** (rho + 1.0) * mittag_leffler(rho, rho + 2.0, x)
    dk2 = np.diff(k2, axis=1)
    slope = g.slopes
    M = g.grid.M
    out = g.values[0] * k1
    for i in range(lams.size):
        out[i, 1:] += np.convolve(dk2[i], slope)[:M]
    return out


@dataclass(frozen=True)
class ForwardSolution:
    """Mode trajectories ``u_k(t_m)`` of the non-local problem.

    Attributes
    ----------
    u : (N, M + 1) array
        Coefficient trajectories on the time grid.
    b_T, deficit_T : (N,) arrays
        ``b_k(T)`` and ``1 - E_rho(-lambda_k T**rho)``, reused by :meth:`at`.
    """

    op: SpectralOperator
    grid: TimeGrid
    rho: float
    f: np.ndarray
    g: SourceProfile
    u: np.ndarray
    b_T: np.ndarray | None = field(default=None, repr=False)
    deficit_T: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_trajectories(
        cls, op: SpectralOperator, rho: float, f, g: SourceProfile, u
    ) -> ForwardSolution:
        """Wrap externally supplied trajectories, e.g. a manufactured solution."""
        u = np.atleast_2d(np.asarray(u, dtype=float))
        if u.shape != (op.N, g.grid.M + 1):
            raise ShapeError(f"trajectories must have shape {(op.N, g.grid.M + 1)}, got {u.shape}")
        return cls(op, g.grid, rho, np.asarray(f, dtype=float), g, u)

    def at(self, t: float) -> np.ndarray:
        """Coefficients ``u_k(t)`` at an arbitrary ``t`` in ``[0, T]``.

        Solver output is re-evaluated from the representation formula; wrapped
        trajectories are interpolated linearly.
        """
        if self.b_T is None:
            return np.array([np.interp(t, self.grid.nodes, uk) for uk in self.u])
        lam = self.op.eigenvalues
        b_t = np.array([b_coeff(l, self.rho, t, self.g) for l in lam])
        e_t = 1.0 - ml_deficit(self.rho, lam * t**self.rho)
        return self.f * (b_t + self.b_T * e_t / self.deficit_T)

    def physical(self) -> np.ndarray:
        """Samples ``u(x_i, t_m)`` with shape ``(M + 1, P + 1)``."""
        return synthesize(self.op, self.u.T)

    @property
    def nonlocal_defect(self) -> float:
        return float(np.max(np.abs(self.u[:, 0] - self.u[:, -1])))


def solve_forward(
    op: SpectralOperator, f, g: SourceProfile, rho: float, grid: TimeGrid | None = None
) -> ForwardSolution:
    """Solve ``D^rho u + A u = f g(t)``, ``u(0) = u(T)``, in coefficient space."""
    grid = g.grid if grid is None else grid
    if grid != g.grid:
        raise ShapeError("source profile must be sampled on the solution grid")
    f = np.asarray(f, dtype=float)
    if f.shape != (op.N,):
        raise ShapeError(f"expected {op.N} source coefficients, got {f.shape}")
    lam = op.eigenvalues
    _check(lam, rho)

    b = b_on_grid(lam, rho, g)
    deficit = ml_deficit(rho, lam[:, None] * grid.nodes[None, :] ** rho)
    deficit_T = deficit[:, -1]
    if np.any(deficit_T < DEGENERATE_FLOOR):
        raise DegenerateError("1 - E_rho(-lambda T^rho) underflowed")
    b_T = b[:, -1]
    # E = 1 - deficit keeps u_k = f_k / lambda_k exact for constant g
    u = f[:, None] * (b + (b_T / deficit_T)[:, None] * (1.0 - deficit))
    return ForwardSolution(op, grid, rho, f, g, u, b_T, deficit_T)


@dataclass(frozen=True)
class ResidualReport:
    pde_residual: float
    nonlocal_defect: float
    per_mode: np.ndarray
    t_min: float


def residual_check(
    sol: ForwardSolution, f=None, g: SourceProfile | None = None, rho: float | None = None,
    t_min: float = 0.0,
) -> ResidualReport:
    """Check the equation with the L1 Caputo oracle at interior nodes.

    The residual is ``max |D^rho u_k + lambda_k u_k - f_k g|`` over modes and
    over nodes ``t_m > max(0, t_min)``.
    """
    f = sol.f if f is None else np.asarray(f, dtype=float)
    g = sol.g if g is None else g
    rho = sol.rho if rho is None else rho
    lam = sol.op.eigenvalues
    t = sol.grid.nodes
    keep = (t > 0) & (t >= t_min)
    per_mode = np.empty(sol.op.N)
    for k in range(sol.op.N):
        d = caputo_l1(GridFunction(sol.grid, sol.u[k]), rho).values
        r = d + lam[k] * sol.u[k] - f[k] * g.values
        per_mode[k] = np.max(np.abs(r[keep]))
    return ResidualReport(float(per_mode.max()), sol.nonlocal_defect, per_mode, t_min)

"""Eigensystem representation of the elliptic operator.

The operator only enters through its eigenvalues and sampled orthonormal
eigenfunctions; nothing is ever assembled as a matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, ShapeError

ORTHONORMALITY_TOL = 1e-8


def trapezoid_weights(L: float, P: int) -> np.ndarray:
    w = np.full(P + 1, L / P)
    w[[0, -1]] *= 0.5
    return w


@dataclass(frozen=True)
class SpectralOperator:
    """Truncated eigensystem ``(lambda_k, v_k)``, ``k = 1 .. N``, on ``[0, L]``.

    Attributes
    ----------
    eigenvalues : (N,) array
        Positive and non-decreasing.
    eigenfunctions : (N, P + 1) array
        ``v_k`` sampled on the uniform grid ``x_i = i L / P``.
    weights : (P + 1,) array
        Quadrature weights of the discrete L2 inner product.
    """

    L: float
    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        lam = np.asarray(self.eigenvalues, dtype=float)
        vk = np.atleast_2d(np.asarray(self.eigenfunctions, dtype=float))
        w = np.asarray(self.weights, dtype=float)
        if lam.ndim != 1 or lam.size < 1:
            raise ShapeError("eigenvalues must be a non-empty vector")
        if vk.shape[0] != lam.size or vk.shape[1] != w.size:
            raise ShapeError(
                f"eigenfunctions of shape {vk.shape} do not match "
                f"{lam.size} eigenvalues on {w.size} points"
            )
        if not np.all(np.isfinite(lam)) or lam[0] <= 0:
            raise DomainError("eigenvalues must be finite and positive")
        if np.any(np.diff(lam) < 0):
            raise DomainError("eigenvalues must be non-decreasing")
        gram = (vk * w) @ vk.T
        dev = np.max(np.abs(gram - np.eye(lam.size)))
        if dev > ORTHONORMALITY_TOL:
            raise DomainError(f"eigenfunctions are not orthonormal (deviation {dev:.2e})")
        for name, arr in (("eigenvalues", lam), ("eigenfunctions", vk), ("weights", w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def N(self) -> int:
        return self.eigenvalues.size

    @property
    def P(self) -> int:
        return self.weights.size - 1

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.P + 1)

    def truncate(self, N: int) -> SpectralOperator:
        return SpectralOperator(self.L, self.eigenvalues[:N], self.eigenfunctions[:N], self.weights)

    @classmethod
    def from_json(cls, path: str | Path) -> SpectralOperator:
        """Read ``{"L": ..., "lambda": [...], "eigenfunction_grid": [[...], ...]}``."""
        data = json.loads(Path(path).read_text())
        try:
            L = float(data["L"])
            lam = data["lambda"]
            grid = np.asarray(data["eigenfunction_grid"], dtype=float)
        except KeyError as exc:
            raise ShapeError(f"operator file lacks field {exc}") from None
        grid = np.atleast_2d(grid)
        return cls(L, np.asarray(lam, dtype=float), grid, trapezoid_weights(L, grid.shape[1] - 1))

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "lambda": self.eigenvalues.tolist(),
            "eigenfunction_grid": self.eigenfunctions.tolist(),
        }


def dirichlet_laplacian_1d(N: int, P: int) -> SpectralOperator:
    """``-d^2/dx^2`` on ``(0, pi)`` with Dirichlet ends.

    ``lambda_k = k**2`` and ``v_k = sqrt(2 / pi) sin(k x)`` sampled on
    ``P + 1`` points; ``P >= 8 N`` is required.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if P < 8 * N:
        raise DomainError(f"grid undersampled: need P >= 8N = {8 * N}, got P = {P}")
    x = np.linspace(0.0, math.pi, P + 1)
    k = np.arange(1, N + 1, dtype=float)
    v = math.sqrt(2.0 / math.pi) * np.sin(np.outer(k, x))
    # sin(k pi) is not exactly zero in floating point
    v[:, [0, -1]] = 0.0
    return SpectralOperator(math.pi, k**2, v, trapezoid_weights(math.pi, P))


def project(op: SpectralOperator, h) -> np.ndarray:
    """Fourier coefficients ``(h, v_k)`` of physical samples ``h``."""
    h = np.asarray(h, dtype=float)
    if h.shape[-1] != op.P + 1:
        raise ShapeError(f"samples have {h.shape[-1]} points, operator grid has {op.P + 1}")
    return (h * op.weights) @ op.eigenfunctions.T


def synthesize(op: SpectralOperator, c) -> np.ndarray:
    """Physical samples of ``sum_k c_k v_k``; ``c`` may carry leading batch axes."""
    c = np.asarray(c, dtype=float)
    if c.shape[-1] != op.N:
        raise ShapeError(f"expected {op.N} coefficients, got {c.shape[-1]}")
    return c @ op.eigenfunctions

"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ShapeError(ValueError):
    """Array shapes or grids of two inputs do not match."""


class DegenerateError(ArithmeticError):
    """A quantity that must stay away from zero underflowed."""


class EmptyCandidates(ValueError):
    """No observation times were offered to the selector."""


class ConfigError(ValueError):
    """A run configuration violates one of its invariants."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class NonOrthogonalData(ValueError):
    """Measured data has a non-zero component on a degenerate mode.

    The inverse problem is solvable only if the data coefficient of every
    degenerate mode vanishes; ``k`` and ``psi_k`` identify the first offender.
    """

    def __init__(self, k: int, psi_k: float, tol: float):
        super().__init__(
            f"mode k={k} is degenerate but psi_k={psi_k:.3e} exceeds tolerance {tol:.3e}"
        )
        self.k = k
        self.psi_k = psi_k
        self.tol = tol

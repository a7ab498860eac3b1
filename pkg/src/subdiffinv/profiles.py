"""Built-in time profiles ``g(t)``, generated analytically with derivatives.

The manufactured profile of the non-uniqueness example is ``g = D^rho omega + omega`` with
``omega(t) = (t - T/2)**2``, which makes ``u = omega(t) v_1(x)``, ``f = v_1``
an exact solution for the first Dirichlet mode (``lambda_1 = 1``).
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import ConfigError
from .fraccalc import TimeGrid, caputo_power
from .forward import SourceProfile


def omega(t, T: float = 1.0):
    return (np.asarray(t, dtype=float) - T / 2) ** 2


def example1_g(t, rho: float, T: float = 1.0):
    """``D^rho omega + omega`` for ``omega = (t - T/2)**2``."""
    t = np.asarray(t, dtype=float)
    # omega = t^2 - T t + T^2/4; the constant is annihilated by D^rho
    return caputo_power(2.0, rho, t) - T * caputo_power(1.0, rho, t) + omega(t, T)


def example1_g_printed(t, rho: float):
    """``t^(2-rho)/G(3-rho) - t^(1-rho)/G(2-rho) + (t - 1/2)^2`` as printed.

    This literal form carries half the Caputo derivative of ``t**2``; it is the
    one whose endpoint values ``1/4`` and ``(16 + 3 sqrt(pi) - 24)/(12 sqrt(pi))``
    (for ``rho = 1/2``) are quoted alongside the example.
    """
    t = np.asarray(t, dtype=float)
    return (
        t ** (2.0 - rho) / math.gamma(3.0 - rho)
        - t ** (1.0 - rho) / math.gamma(2.0 - rho)
        + (t - 0.5) ** 2
    )


def _const(t):
    return np.ones_like(np.asarray(t, dtype=float))


def _zero(t):
    return np.zeros_like(np.asarray(t, dtype=float))


_SMOOTH: dict[str, tuple[Callable, Callable]] = {
    "const": (_const, _zero),
    "2+sin(2pi t)": (
        lambda t: 2.0 + np.sin(2 * np.pi * np.asarray(t, dtype=float)),
        lambda t: 2 * np.pi * np.cos(2 * np.pi * np.asarray(t, dtype=float)),
    ),
    "1+t": (lambda t: 1.0 + np.asarray(t, dtype=float), _const),
    "t-0.3": (lambda t: np.asarray(t, dtype=float) - 0.3, _const),
}

SIGN_DEFINITE = ("const", "2+sin(2pi t)", "1+t")
BUILTIN_NAMES = tuple(_SMOOTH) + ("example1",)


def builtin_function(name: str, rho: float | None = None) -> Callable:
    if name == "example1":
        if rho is None:
            raise ConfigError("g", "example1 profile needs rho")
        return lambda t: example1_g(t, rho)
    if name not in _SMOOTH:
        raise ConfigError("g", f"unknown builtin profile {name!r}; choose from {BUILTIN_NAMES}")
    return _SMOOTH[name][0]


def builtin_profile(name: str, grid: TimeGrid, rho: float | None = None) -> SourceProfile:
    """Sample a named profile on ``grid``.

    Smooth profiles carry derivative samples (``C1``); ``example1`` has a
    ``t**(1 - rho)`` term and is only continuous.
    """
    if name == "example1":
        if grid.T != 1.0:
            raise ConfigError("T", "example1 is defined for T = 1")
        return SourceProfile.from_function(builtin_function(name, rho), grid, name=name)
    fn, dfn = _SMOOTH.get(name, (None, None))
    if fn is None:
        builtin_function(name)
    return SourceProfile.from_function(fn, grid, dfn, name=name)

r"""Two-parameter Mittag-Leffler function on the negative real axis.

Evaluates

.. math::

    E_{\rho,\mu}(-x) = \sum_{k=0}^\infty \frac{(-x)^k}{\Gamma(\rho k + \mu)},
    \qquad 0 < \rho \le 1,\ \mu > 0,\ x \ge 0,

by switching between three regimes:

* ``series``: the Taylor series in double precision for :math:`x \le 1`, where
  every term is bounded and cancellation is harmless;
* ``midrange``: for :math:`1 < x < x_A(\rho)` the series is summed in extended
  precision with :mod:`mpmath` at Chebyshev nodes of a few geometric
  sub-intervals; the resulting interpolants are cached per :math:`(\rho, \mu)`
  so vectorised evaluation on large grids stays cheap;
* ``asymptotic``: the algebraic expansion
  :math:`\sum_{j\ge 1} (-1)^{j+1} x^{-j} / \Gamma(\mu - \rho j)` truncated near
  its smallest term for :math:`x \ge x_A(\rho)`.

The switch point satisfies :math:`x_A^{1/\rho} = 36`, which puts the optimal
truncation error of the asymptotic series near :math:`e^{-36}` and keeps the
largest Taylor term of the mid-range below :math:`e^{36}`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Literal

import mpmath
import numpy as np
from numpy.polynomial import Chebyshev
from scipy.special import gammaln, rgamma

from .errors import DomainError

Regime = Literal["series", "midrange", "asymptotic"]

TARGET_ABS_ERROR = 1e-10
X_CAP = 1e6
SERIES_X_MAX = 1.0
# x**(1/rho) at which the asymptotic expansion takes over
ASYMPTOTIC_SCALE = 36.0

_CHEB_DEGREE = 28
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class MLQuery:
    """Evaluation request for :math:`E_{\\rho,\\mu}(-x)`."""

    rho: float
    mu: float
    x: float

    def __post_init__(self) -> None:
        _check_params(self.rho, self.mu)
        _check_x(np.asarray(self.x, dtype=float))


@dataclass(frozen=True)
class MLValue:
    value: float
    regime: Regime
    est_abs_error: float


def _check_params(rho: float, mu: float) -> None:
    if not (0.0 < rho <= 1.0) or not math.isfinite(rho):
        raise DomainError(f"rho must lie in (0, 1], got {rho}")
    if not (mu > 0.0) or not math.isfinite(mu):
        raise DomainError(f"mu must be positive, got {mu}")


def _check_x(x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)):
        raise DomainError("x must be finite")
    if np.any(x < 0.0):
        raise DomainError("x must be non-negative (argument is -x)")
    if np.any(x > X_CAP):
        raise DomainError(f"x must not exceed {X_CAP:g}")


def asymptotic_threshold(rho: float) -> float:
    """Smallest ``x`` handled by the asymptotic expansion."""
    return ASYMPTOTIC_SCALE**rho


# {{{ extended precision series


def mp_series(rho: float, mu: float, x: float, dps: int | None = None) -> mpmath.mpf:
    """Sum the Taylor series of :math:`E_{\\rho,\\mu}(-x)` with mpmath.

    The working precision is raised by the number of digits the largest term
    can cancel, so the result is accurate to roughly ``10**-30``.
    """
    if dps is None:
        # log10 of the largest term is about x**(1/rho) / ln(10)
        dps = 40 + int(math.ceil(x ** (1.0 / rho) / math.log(10.0)))
    with mpmath.workdps(dps):
        r = mpmath.mpf(rho)
        m = mpmath.mpf(mu)
        z = -mpmath.mpf(x)
        tol = mpmath.mpf(10) ** (-35)
        total = mpmath.mpf(0)
        zk = mpmath.mpf(1)
        prev = mpmath.inf
        k = 0
        while True:
            term = zk * mpmath.rgamma(r * k + m)
            total += term
            mag = abs(term)
            if k > 8 and mag < tol and mag <= prev:
                break
            prev = mag
            zk *= z
            k += 1
        return +total


def mp_series_many(rho: float, mu: float, xs) -> np.ndarray:
    """:func:`mp_series` at several points sharing one set of coefficients.

    The ``1/Gamma(rho k + mu)`` are the expensive part and do not depend on
    ``x``, so they are computed once at the precision the largest point needs.
    """
    xs = [float(x) for x in xs]
    x_max = max(xs)
    dps = 40 + int(math.ceil(x_max ** (1.0 / rho) / math.log(10.0)))
    with mpmath.workdps(dps):
        r, m = mpmath.mpf(rho), mpmath.mpf(mu)
        tol = mpmath.mpf(10) ** (-35)
        zs = [-mpmath.mpf(x) for x in xs]
        totals = [mpmath.mpf(0)] * len(xs)
        powers = [mpmath.mpf(1)] * len(xs)
        zmax = mpmath.mpf(x_max)
        pmax = mpmath.mpf(1)
        prev = mpmath.inf
        k = 0
        while True:
            c = mpmath.rgamma(r * k + m)
            for i, z in enumerate(zs):
                totals[i] += powers[i] * c
                powers[i] *= z
            # terms at the largest point bound those at every other point
            mag = abs(pmax * c)
            if k > 8 and mag < tol and mag <= prev:
                break
            prev = mag
            pmax *= zmax
            k += 1
        return np.array([float(t) for t in totals])


def _midrange_pieces(rho: float) -> list[tuple[float, float]]:
    hi = asymptotic_threshold(rho)
    edges = [SERIES_X_MAX]
    while edges[-1] * 2.0 < hi:
        edges.append(edges[-1] * 2.0)
    edges.append(hi)
    return list(zip(edges[:-1], edges[1:]))


@functools.lru_cache(maxsize=256)
def _midrange_interpolants(rho: float, mu: float) -> tuple[tuple[Chebyshev, float], ...]:
    out = []
    for a, b in _midrange_pieces(rho):
        cheb = Chebyshev.interpolate(
            lambda xs: mp_series_many(rho, mu, xs),
            _CHEB_DEGREE,
            domain=[a, b],
        )
        # trailing coefficients bound the interpolation error
        tail = float(np.sum(np.abs(cheb.coef[-4:])))
        out.append((cheb, tail + 64 * _EPS))
    return tuple(out)


# }}}


# {{{ regimes


def _series(rho: float, mu: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # x <= 1, so |term_k| <= 1/Gamma(rho k + mu); stop once that is negligible
    k_max = 1
    while gammaln(rho * k_max + mu) < 45.0 or rho * k_max + mu < 2.0:
        k_max += 1
    k = np.arange(k_max + 1, dtype=float)
    lg = gammaln(rho * k + mu)
    # x = 0 gives 0 * -inf in the k = 0 column, overwritten below
    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.log(x)
        expo = k[None, :] * logx[:, None] - lg[None, :]
    expo[:, 0] = -lg[0]
    terms = np.exp(expo)
    terms[:, 1::2] *= -1.0
    values = np.sum(terms, axis=1)
    err = 4.0 * k_max * _EPS * np.sum(np.abs(terms), axis=1) + np.exp(-45.0)
    return values, err


def _midrange(rho: float, mu: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    values = np.empty_like(x)
    err = np.empty_like(x)
    pieces = _midrange_pieces(rho)
    interps = _midrange_interpolants(rho, mu)
    for i, ((a, b), (cheb, tail)) in enumerate(zip(pieces, interps)):
        last = i == len(pieces) - 1
        mask = (x >= a) & ((x <= b) if last else (x < b))
        if np.any(mask):
            values[mask] = cheb(x[mask])
            err[mask] = tail
    return values, err


@functools.lru_cache(maxsize=256)
def _asymptotic_coefficients(rho: float, mu: float) -> np.ndarray:
    """``(-1)**(j+1) / Gamma(mu - rho j)`` for ``j = 1 .. n_terms + 2``."""
    n_terms = int(math.floor(ASYMPTOTIC_SCALE / rho))
    j = np.arange(1, n_terms + 3, dtype=float)
    # 1/Gamma vanishes at the poles, which rgamma already returns as 0
    return np.where(j % 2 == 1, 1.0, -1.0) * rgamma(mu - rho * j)


def _horner(coef: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``sum_j coef[j-1] y**j``."""
    acc = np.zeros_like(y)
    for c in coef[::-1]:
        acc = (acc + c) * y
    return acc


def _asymptotic(rho: float, mu: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    coef = _asymptotic_coefficients(rho, mu)
    n_terms = coef.size - 2
    y = 1.0 / x
    values = _horner(coef[:n_terms], y)
    # first two omitted terms, a bound on the hidden exponentially small part
    # and roundoff of the summation
    omitted = np.abs(coef[n_terms]) * y ** (n_terms + 1) + np.abs(coef[n_terms + 1]) * y ** (n_terms + 2)
    err = (
        omitted
        + np.exp(-np.minimum(x ** (1.0 / rho), 700.0)) * (1.0 + x ** ((1.0 - mu) / rho))
        + 4.0 * n_terms * _EPS * _horner(np.abs(coef[:n_terms]), y)
    )
    return values, err


# }}}


def _evaluate(rho: float, mu: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return values, error estimates and regime codes (0, 1, 2) for ``x``."""
    values = np.empty_like(x)
    err = np.empty_like(x)
    code = np.empty(x.shape, dtype=np.int8)
    x_a = asymptotic_threshold(rho)
    masks = (x <= SERIES_X_MAX, (x > SERIES_X_MAX) & (x < x_a), x >= x_a)
    for c, (mask, fn) in enumerate(zip(masks, (_series, _midrange, _asymptotic))):
        if not np.any(mask):
            continue
        if rho == 1.0 and mu == 1.0:
            # the algebraic expansion of exp(-x) is identically zero
            v = np.exp(-x[mask])
            e = 4.0 * _EPS * v
        else:
            v, e = fn(rho, mu, x[mask])
        values[mask] = v
        err[mask] = e
        code[mask] = c
    return values, err, code


def mittag_leffler(rho: float, mu: float, x) -> np.ndarray:
    """Vectorised :math:`E_{\\rho,\\mu}(-x)` for arrays of ``x >= 0``."""
    _check_params(rho, mu)
    xa = np.asarray(x, dtype=float)
    _check_x(xa)
    values, _, _ = _evaluate(float(rho), float(mu), xa.reshape(-1))
    return values.reshape(xa.shape)


_REGIMES: tuple[Regime, ...] = ("series", "midrange", "asymptotic")


def ml(q: MLQuery) -> MLValue:
    """Evaluate a single query with its regime and an error estimate."""
    values, err, code = _evaluate(float(q.rho), float(q.mu), np.array([float(q.x)]))
    return MLValue(float(values[0]), _REGIMES[int(code[0])], float(err[0]))


def ml_classical(rho: float, x) -> np.ndarray | float:
    """:math:`E_\\rho(-x) = E_{\\rho,1}(-x)`."""
    out = mittag_leffler(rho, 1.0, x)
    return float(out) if np.ndim(x) == 0 else out


def ml_deficit(rho: float, x) -> np.ndarray | float:
    """:math:`1 - E_\\rho(-x)` without cancellation for small ``x``.

    Uses :math:`1 - E_\\rho(-x) = x E_{\\rho,\\rho+1}(-x)`.
    """
    xa = np.asarray(x, dtype=float)
    out = xa * mittag_leffler(rho, rho + 1.0, xa)
    return float(out) if np.ndim(x) == 0 else out

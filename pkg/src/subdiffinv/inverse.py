r"""Inverse source problem: recover ``f`` from ``u(t_0) = psi``.

Each mode decouples into ``f_k Delta_k = psi_k (1 - E_rho(-lambda_k T^rho))`` with

.. math::

    \Delta_k = (1 - E_\rho(-\lambda_k T^\rho))\, b_k(t_0)
             + E_\rho(-\lambda_k t_0^\rho)\, b_k(T).

Modes where ``lambda_k |Delta_k|`` is numerically zero form the degenerate
set; their data must vanish and their source coefficients are free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

import numpy as np

from .errors import DomainError, EmptyCandidates, NonOrthogonalData, ShapeError
from .forward import ForwardSolution, SourceProfile, b_coeff, solve_forward
from .mlf import ml_deficit
from .spectral import SpectralOperator, dirichlet_laplacian_1d

DEFAULT_TAU = 1e-6
# scaled values below GRAY_ZONE * threshold are accepted but flagged
GRAY_ZONE = 10.0
ORTHO_REL_TOL = 1e-6

Verdict = Literal["Unique", "NonUniqueFamily"]
Basis = Literal["theorem", "lemma", "empirical (outside lemma hypotheses)"]


@dataclass(frozen=True)
class DeltaRecord:
    k: int
    lambda_k: float
    b_t0: float
    b_T: float
    one_minus_E_T: float
    E_t0: float
    delta: float
    scaled: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def _check_times(t0: float, T: float, g: SourceProfile) -> None:
    if not 0.0 < t0 < T:
        raise DomainError(f"t0 must lie in (0, T) = (0, {T}), got {t0}")
    if not math.isclose(T, g.grid.T, rel_tol=1e-12):
        raise DomainError(f"g is sampled on [0, {g.grid.T}], not on [0, {T}]")


def delta(lam: float, rho: float, t0: float, T: float, g: SourceProfile, k: int = 0) -> DeltaRecord:
    """Determinant ``Delta`` of mode ``k`` with eigenvalue ``lam``."""
    _check_times(t0, T, g)
    b_t0 = b_coeff(lam, rho, t0, g)
    b_T = b_coeff(lam, rho, T, g)
    omt = float(ml_deficit(rho, lam * T**rho))
    e_t0 = 1.0 - float(ml_deficit(rho, lam * t0**rho))
    d = omt * b_t0 + e_t0 * b_T
    return DeltaRecord(k, float(lam), b_t0, b_T, omt, e_t0, d, float(lam) * abs(d))


def changes_sign(g: SourceProfile) -> bool:
    """True unless every sample of ``g`` is strictly of one sign."""
    return not (np.all(g.values > 0) or np.all(g.values < 0))


@dataclass(frozen=True)
class ModePartition:
    """Split of mode indices (1-based) into regular and degenerate sets."""

    K_rho: tuple[int, ...]
    K0_rho: tuple[int, ...]
    threshold: float
    records: tuple[DeltaRecord, ...] = field(repr=False)
    near_degenerate: tuple[int, ...] = ()


def degeneracy_threshold(g: SourceProfile, rho: float, T: float, tau: float) -> float:
    return tau * g.sup_norm * max(1.0, T**rho)


def classify_modes(
    op: SpectralOperator, g: SourceProfile, rho: float, t0: float, T: float,
    tau: float = DEFAULT_TAU,
) -> ModePartition:
    """Assign mode ``k`` to the degenerate set iff ``lambda_k |Delta_k| <= threshold``."""
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    records = tuple(
        delta(lam, rho, t0, T, g, k) for k, lam in enumerate(op.eigenvalues, start=1)
    )
    thr = degeneracy_threshold(g, rho, T, tau)
    K0 = tuple(r.k for r in records if r.scaled <= thr)
    K = tuple(r.k for r in records if r.scaled > thr)
    gray = tuple(r.k for r in records if thr < r.scaled < GRAY_ZONE * thr)
    return ModePartition(K, K0, thr, records, gray)


@dataclass(frozen=True)
class InverseResult:
    """Reconstructed source and state.

    ``f`` is the minimum-norm member of the solution family unless free values
    were supplied; ``free_modes`` lists the coefficients that may be chosen
    arbitrarily.
    """

    f: np.ndarray
    u: ForwardSolution
    partition: ModePartition
    verdict: Verdict
    free_modes: tuple[int, ...]
    amplification: np.ndarray
    psi: np.ndarray
    t0: float
    basis: Basis

    @property
    def amplification_growth(self) -> float:
        """Least-squares slope of ``log amplification`` against ``log lambda``."""
        lam = self.u.op.eigenvalues
        ok = np.isfinite(self.amplification) & (self.amplification > 0)
        if np.count_nonzero(ok) < 2 or np.ptp(np.log(lam[ok])) == 0:
            return float("nan")
        return float(np.polyfit(np.log(lam[ok]), np.log(self.amplification[ok]), 1)[0])

    def data_mismatch(self) -> float:
        """``max |u_k(t0) - psi_k|`` over regular modes."""
        idx = np.array(self.partition.K_rho, dtype=int) - 1
        if idx.size == 0:
            return 0.0
        return float(np.max(np.abs(self.u.at(self.t0)[idx] - self.psi[idx])))

    def to_json(self) -> dict:
        return {
            "f": self.f.tolist(),
            "verdict": self.verdict,
            "basis": self.basis,
            "K0": list(self.partition.K0_rho),
            "near_degenerate": list(self.partition.near_degenerate),
            "threshold": self.partition.threshold,
            "partition_table": [r.as_dict() for r in self.partition.records],
            "amplification": [None if not np.isfinite(a) else float(a) for a in self.amplification],
        }


def hypotheses_basis(g: SourceProfile, rho: float, t0: float, T: float) -> Basis:
    """Which uniqueness result covers the setting, if any."""
    if not changes_sign(g):
        return "theorem"
    if rho == 1.0 and g.smoothness == "C1":
        gt0, gT = float(g(t0)), float(g.values[-1])
        if gT != 0 and gt0 * gT > 0:
            return "lemma"
    return "empirical (outside lemma hypotheses)"


def solve_inverse(
    op: SpectralOperator, g: SourceProfile, rho: float, t0: float, T: float, psi,
    free_values: Mapping[int, float] | None = None, tau: float = DEFAULT_TAU,
    ortho_tol: float | None = None,
) -> InverseResult:
    """Recover ``f`` (and ``u``) from the coefficients ``psi`` of ``u(t0)``.

    Raises
    ------
    NonOrthogonalData
        If a degenerate mode carries data above ``ortho_tol``
        (default ``1e-6 * ||psi||``); no solution exists then.
    """
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (op.N,):
        raise ShapeError(f"expected {op.N} data coefficients, got {psi.shape}")
    part = classify_modes(op, g, rho, t0, T, tau)
    if ortho_tol is None:
        ortho_tol = ORTHO_REL_TOL * float(np.linalg.norm(psi))
    for k in part.K0_rho:
        if abs(psi[k - 1]) > ortho_tol:
            raise NonOrthogonalData(k, float(psi[k - 1]), ortho_tol)
    free_values = dict(free_values or {})
    unknown = set(free_values) - set(part.K0_rho)
    if unknown:
        raise DomainError(f"free values given for non-degenerate modes {sorted(unknown)}")

    f = np.zeros(op.N)
    for r in part.records:
        i = r.k - 1
        if r.k in part.K_rho:
            f[i] = psi[i] * r.one_minus_E_T / r.delta
        else:
            f[i] = float(free_values.get(r.k, 0.0))

    with np.errstate(divide="ignore", invalid="ignore"):
        amp = np.where(psi != 0, np.abs(f) / np.abs(psi), np.nan)
    u = solve_forward(op, f, g, rho)
    verdict: Verdict = "Unique" if not part.K0_rho else "NonUniqueFamily"
    return InverseResult(
        f, u, part, verdict, part.K0_rho, amp, psi, t0, hypotheses_basis(g, rho, t0, T)
    )


@dataclass(frozen=True)
class ScanResult:
    k: np.ndarray
    lam: np.ndarray
    scaled: np.ndarray
    sign_definite: bool

    @property
    def min(self) -> float:
        return float(self.scaled.min())

    @property
    def argmin(self) -> int:
        return int(self.k[np.argmin(self.scaled)])

    def tail_min(self, k0: int) -> float:
        """``min_{k >= k0} lambda_k |Delta_k|``."""
        return float(self.scaled[self.k >= k0].min())

    @property
    def constant(self) -> float | None:
        """Empirical ``C`` in ``|Delta_k| >= C / lambda_k`` for sign-definite ``g``."""
        return self.min if self.sign_definite else None


def lower_bound_scan(op: SpectralOperator, g: SourceProfile, rho: float, t0: float, T: float) -> ScanResult:
    """Tabulate ``lambda_k |Delta_k|`` over all modes of ``op``."""
    recs = [delta(lam, rho, t0, T, g, k) for k, lam in enumerate(op.eigenvalues, start=1)]
    res = ScanResult(
        np.array([r.k for r in recs]),
        np.array([r.lambda_k for r in recs]),
        np.array([r.scaled for r in recs]),
        not changes_sign(g),
    )
    if res.sign_definite and not res.min > 0:
        raise ArithmeticError(f"scan minimum {res.min} is not positive for sign-definite g")
    return res


@dataclass(frozen=True)
class T0Candidate:
    t0: float
    scan_min: float
    sign_ok: bool
    degenerate: tuple[int, ...]

    @property
    def acceptable(self) -> bool:
        return self.sign_ok and not self.degenerate


def sign_criterion(g: SourceProfile, rho: float, t0: float) -> bool:
    """Sufficient condition for a finite degenerate set at ``t0``.

    Sign-definite ``g`` always passes; otherwise ``g(t0) g(T) > 0`` for
    ``rho = 1`` and ``g(0) != 0`` for ``rho < 1``.
    """
    if not changes_sign(g):
        return True
    if rho == 1.0:
        return float(g(t0)) * float(g.values[-1]) > 0
    return float(g.values[0]) != 0


def pick_t0(
    g: SourceProfile, rho: float, T: float, candidates: Sequence[float],
    op: SpectralOperator | None = None, tau: float = DEFAULT_TAU,
) -> list[T0Candidate]:
    """Rank observation times, acceptable ones first, by scan minimum."""
    if len(candidates) == 0:
        raise EmptyCandidates("no candidate observation times given")
    op = dirichlet_laplacian_1d(16, 128) if op is None else op
    out = []
    for t0 in candidates:
        part = classify_modes(op, g, rho, float(t0), T, tau)
        scan_min = min(r.scaled for r in part.records)
        out.append(T0Candidate(float(t0), scan_min, sign_criterion(g, rho, float(t0)), part.K0_rho))
    return sorted(out, key=lambda c: (not c.acceptable, -c.scan_min))

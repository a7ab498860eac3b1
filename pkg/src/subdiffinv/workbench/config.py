"""Run configuration and the tolerance block used by every scenario."""

from __future__ import annotations

import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from ..errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class Tolerances:
    """Every pass/fail threshold in one place."""

    ml_abs: float = 1e-10
    tau: float = 1e-6
    ortho_rel: float = 1e-6
    nonlocal_defect: float = 1e-8
    steady_state: float = 1e-8
    example1_g: float = 1e-10
    example1_delta: float = 1e-5
    example1_other_modes: float = 0.01
    example1_residual: float = 5e-3
    example1_u: float = 5e-4
    roundtrip: float = 1e-5
    constant_scan: float = 1e-8
    amplification: float = 1e-8
    reconstruction: float = 1e-6


@dataclass(frozen=True)
class RunConfig:
    """Parameters shared by the CLI subcommands.

    ``operator`` is ``"dirichlet1d"`` or a path to an operator JSON file;
    ``g`` is a builtin profile name or a path to a samples file.
    """

    rho: float = 0.5
    T: float = 1.0
    t0: float = 0.5
    M: int = 2048
    N: int = 16
    P: int = 128
    operator: str = "dirichlet1d"
    g: str = "const"
    seed: int = 0
    out: str | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not (isinstance(self.rho, (int, float)) and 0 < self.rho <= 1):
            raise ConfigError("rho", f"must lie in (0, 1], got {self.rho!r}")
        if not (isinstance(self.T, (int, float)) and self.T > 0 and math.isfinite(self.T)):
            raise ConfigError("T", f"must be positive, got {self.T!r}")
        if not (isinstance(self.t0, (int, float)) and 0 < self.t0 < self.T):
            raise ConfigError("t0", f"must lie in (0, T) = (0, {self.T}), got {self.t0!r}")
        if not (isinstance(self.M, int) and self.M >= 256):
            raise ConfigError("M", f"must be an integer >= 256, got {self.M!r}")
        if not (isinstance(self.N, int) and self.N >= 1):
            raise ConfigError("N", f"must be an integer >= 1, got {self.N!r}")
        if not (isinstance(self.P, int) and self.P >= 8 * self.N):
            raise ConfigError("P", f"must be an integer >= 8N = {8 * self.N}, got {self.P!r}")
        for f in fields(self.tolerances):
            v = getattr(self.tolerances, f.name)
            if not (isinstance(v, (int, float)) and v > 0):
                raise ConfigError(f"tolerances.{f.name}", f"must be positive, got {v!r}")

    def with_overrides(self, **overrides: Any) -> RunConfig:
        overrides = {k: v for k, v in overrides.items() if v is not None}
        tol = overrides.pop("tolerances", None)
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown configuration field")
        cfg = replace(self, **overrides)
        if tol:
            cfg = replace(cfg, tolerances=_tolerances(tol, cfg.tolerances))
        return cfg

    def as_dict(self) -> dict:
        return asdict(self)


def _tolerances(data: dict, base: Tolerances) -> Tolerances:
    known = {f.name for f in fields(Tolerances)}
    bad = set(data) - known
    if bad:
        raise ConfigError(f"tolerances.{sorted(bad)[0]}", "unknown tolerance")
    return replace(base, **data)


def load_config(path: str | Path | None = None, **overrides: Any) -> RunConfig:
    """Read a TOML or JSON file (optional) and apply flag overrides on top."""
    data: dict[str, Any] = {}
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigError("config", f"cannot read {p}: {exc}") from None
        try:
            data = json.loads(text) if p.suffix == ".json" else tomllib.loads(text)
        except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError("config", f"cannot parse {p}: {exc}") from None
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig().with_overrides(**data)
    except TypeError as exc:
        raise ConfigError("config", str(exc)) from None

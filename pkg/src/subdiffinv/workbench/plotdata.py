"""Deterministic CSV/JSON dumps for external plotting tools."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..forward import ForwardSolution
from ..inverse import ScanResult
from .scenarios import ScenarioReport


def _write_csv(path: Path, comment: list[str], header: list[str], rows: np.ndarray) -> Path:
    lines = [f"# {c}" for c in comment]
    lines.append(",".join(header))
    lines += [",".join(f"{v:.17g}" for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def solution_csv(sol: ForwardSolution, path: str | Path) -> Path:
    """Rows ``t, u(x_0, t), ..., u(x_P, t)``."""
    x = sol.op.x
    rows = np.column_stack([sol.grid.nodes, sol.physical()])
    comment = [
        f"forward solution rho={sol.rho:.17g} T={sol.grid.T:.17g} M={sol.grid.M} N={sol.op.N} P={sol.op.P}",
        "column t is time; column u@x=<x> is the state at that spatial point",
    ]
    header = ["t"] + [f"u@x={xi:.17g}" for xi in x]
    return _write_csv(Path(path), comment, header, rows)


def scan_csv(scan: ScanResult, path: str | Path) -> Path:
    """Rows ``k, lambda_k, lambda_k |Delta_k|``."""
    rows = np.column_stack([scan.k, scan.lam, scan.scaled])
    comment = [
        f"lower-bound scan sign_definite={scan.sign_definite} min={scan.min:.17g} argmin={scan.argmin}",
        "columns: mode index, eigenvalue, eigenvalue times |Delta|",
    ]
    return _write_csv(Path(path), comment, ["k", "lambda", "scaled"], rows)


def report_json(report: ScenarioReport, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True, allow_nan=True) + "\n")
    return path


def emit_plotdata(obj, path: str | Path) -> Path:
    """Dispatch on the object type and write the matching file."""
    if isinstance(obj, ForwardSolution):
        return solution_csv(obj, path)
    if isinstance(obj, ScanResult):
        return scan_csv(obj, path)
    if isinstance(obj, ScenarioReport):
        return report_json(obj, path)
    raise TypeError(f"no plot format for {type(obj).__name__}")

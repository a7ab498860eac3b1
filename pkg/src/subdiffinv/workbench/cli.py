"""Command line entry point.

Exit codes: 0 success, 1 a scenario check failed, 2 configuration error.
``inverse`` instead reports 0 Unique, 10 NonUniqueFamily, 20 NonOrthogonalData.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from ..errors import ConfigError, DomainError, NonOrthogonalData, ShapeError
from ..forward import ForwardSolution, SourceProfile, residual_check, solve_forward
from ..fraccalc import TimeGrid
from ..inverse import lower_bound_scan, pick_t0, solve_inverse
from ..mlf import MLQuery, ml
from ..profiles import BUILTIN_NAMES, builtin_profile
from ..spectral import SpectralOperator, dirichlet_laplacian_1d, project
from .config import RunConfig, load_config
from .plotdata import emit_plotdata
from .scenarios import ScenarioReport, scenario_example1, scenario_lemma_suite, scenario_roundtrip

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
EXIT_NONUNIQUE, EXIT_NONORTHOGONAL = 10, 20


# {{{ input files


def build_operator(cfg: RunConfig) -> SpectralOperator:
    if cfg.operator == "dirichlet1d":
        return dirichlet_laplacian_1d(cfg.N, cfg.P)
    path = Path(cfg.operator)
    if not path.is_file():
        raise ConfigError("operator", f"expected 'dirichlet1d' or an operator JSON file, got {cfg.operator!r}")
    return SpectralOperator.from_json(path).truncate(cfg.N)


def build_profile(cfg: RunConfig) -> SourceProfile:
    """Builtin name sampled on ``M`` steps, or a ``{"values", "derivative"?}`` file."""
    if cfg.g in BUILTIN_NAMES:
        return builtin_profile(cfg.g, TimeGrid(cfg.T, cfg.M), cfg.rho)
    path = Path(cfg.g)
    if not path.is_file():
        raise ConfigError("g", f"expected one of {BUILTIN_NAMES} or a samples file, got {cfg.g!r}")
    data = _read_json(path, "g")
    values = np.asarray(data["values"] if isinstance(data, dict) else data, dtype=float)
    grid = TimeGrid(cfg.T, values.size - 1)
    deriv = data.get("derivative") if isinstance(data, dict) else None
    if deriv is None:
        return SourceProfile(grid, values, "C0", name=path.name)
    return SourceProfile(grid, values, "C1", np.asarray(deriv, dtype=float), name=path.name)


def _read_json(path: Path, field: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(field, f"cannot read {path}: {exc}") from None


def read_coefficients(path: str, op: SpectralOperator, field: str) -> np.ndarray:
    """Coefficients from ``{"coefficients"}``, ``{"samples"}`` (projected) or a bare list."""
    data = _read_json(Path(path), field)
    if isinstance(data, dict) and "samples" in data:
        c = project(op, np.asarray(data["samples"], dtype=float))
    else:
        c = np.asarray(data["coefficients"] if isinstance(data, dict) else data, dtype=float)
    if c.shape != (op.N,):
        raise ConfigError(field, f"expected {op.N} coefficients, got shape {c.shape}")
    return c


def parse_free(text: str | None) -> dict[int, float]:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        k, _, v = item.partition("=")
        try:
            out[int(k)] = float(v)
        except ValueError:
            raise ConfigError("free", f"expected k=value pairs, got {item!r}") from None
    return out


# }}}


def _dump(obj: Any, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def solution_json(sol: ForwardSolution) -> dict:
    return {
        "grid": {"T": sol.grid.T, "M": sol.grid.M},
        "rho": sol.rho,
        "f": sol.f.tolist(),
        "modes": [
            {"k": k, "lambda": float(lam), "u": sol.u[k - 1].tolist()}
            for k, lam in enumerate(sol.op.eigenvalues, start=1)
        ],
    }


def _report(rep: ScenarioReport, args) -> int:
    print(rep.summary())
    if args.json_out:
        emit_plotdata(rep, args.json_out)
    return EXIT_OK if rep.passed else EXIT_FAIL


# {{{ subcommands


def cmd_ml_eval(args, cfg: RunConfig) -> int:
    v = ml(MLQuery(cfg.rho, args.mu, args.x))
    if args.json:
        _dump({"value": v.value, "regime": v.regime, "est_abs_error": v.est_abs_error}, None)
    else:
        print(f"{v.value:.17g}  regime={v.regime}  est_abs_error={v.est_abs_error:.3g}")
    return EXIT_OK


def cmd_forward(args, cfg: RunConfig) -> int:
    op = build_operator(cfg)
    g = build_profile(cfg)
    f = read_coefficients(args.f, op, "f")
    sol = solve_forward(op, f, g, cfg.rho)
    _dump(solution_json(sol), cfg.out)
    if args.csv:
        emit_plotdata(sol, args.csv)
    res = residual_check(sol)
    print(f"pde_residual={res.pde_residual:.3e} nonlocal_defect={res.nonlocal_defect:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_inverse(args, cfg: RunConfig) -> int:
    op = build_operator(cfg)
    g = build_profile(cfg)
    psi = read_coefficients(args.psi, op, "psi")
    try:
        res = solve_inverse(op, g, cfg.rho, cfg.t0, cfg.T, psi, parse_free(args.free), tau=cfg.tolerances.tau)
    except NonOrthogonalData as exc:
        _dump({"error": "NonOrthogonalData", "k": exc.k, "psi_k": exc.psi_k, "tol": exc.tol}, cfg.out)
        return EXIT_NONORTHOGONAL
    _dump(res.to_json(), cfg.out)
    return EXIT_OK if res.verdict == "Unique" else EXIT_NONUNIQUE


def cmd_verify(args, cfg: RunConfig) -> int:
    rhos = tuple(args.rhos) if args.rhos else (0.25, 0.5, 0.75, 1.0)
    return _report(scenario_lemma_suite(rhos, seed=cfg.seed, tol=cfg.tolerances), args)


def cmd_example1(args, cfg: RunConfig) -> int:
    rep = scenario_example1(cfg.rho, M=args.M_fine, N=min(cfg.N, 8), P=8 * min(cfg.N, 8), tol=cfg.tolerances)
    return _report(rep, args)


def cmd_roundtrip(args, cfg: RunConfig) -> int:
    Ms = tuple(args.Ms) if args.Ms else (512, 1024, 2048, 4096)
    g = cfg.g if cfg.g in BUILTIN_NAMES else "2+sin(2pi t)"
    rep = scenario_roundtrip(g, cfg.rho, N=cfg.N, P=cfg.P, Ms=Ms, t0=cfg.t0, T=cfg.T, seed=cfg.seed,
                             tol=cfg.tolerances)
    return _report(rep, args)


def cmd_pick_t0(args, cfg: RunConfig) -> int:
    g = build_profile(cfg)
    op = build_operator(cfg)
    ranked = pick_t0(g, cfg.rho, cfg.T, args.candidates, op=op, tau=cfg.tolerances.tau)
    rows = [
        {"t0": c.t0, "scan_min": c.scan_min, "sign_ok": c.sign_ok, "degenerate": list(c.degenerate),
         "acceptable": c.acceptable}
        for c in ranked
    ]
    _dump({"ranking": rows}, cfg.out)
    if args.csv:
        emit_plotdata(lower_bound_scan(op, g, cfg.rho, ranked[0].t0, cfg.T), args.csv)
    return EXIT_OK


# }}}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML or JSON run configuration")
    common.add_argument("--seed", type=int)
    common.add_argument("--rho", type=float)
    common.add_argument("--T", type=float)
    common.add_argument("--t0", type=float)
    common.add_argument("--M", type=int)
    common.add_argument("--N", type=int)
    common.add_argument("--P", type=int)
    common.add_argument("--operator", help="'dirichlet1d' or an operator JSON file")
    common.add_argument("--g", help=f"builtin profile {BUILTIN_NAMES} or a samples JSON file")
    common.add_argument("--out", help="output JSON path (default stdout)")

    p = argparse.ArgumentParser(prog="subdiffinv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ml-eval", parents=[common], help="evaluate E_{rho,mu}(-x)")
    s.add_argument("--mu", type=float, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_ml_eval)

    s = sub.add_parser("forward", parents=[common], help="solve the forward problem")
    s.add_argument("--f", required=True, help="source coefficients JSON")
    s.add_argument("--csv", help="also write u(x, t) as CSV")
    s.set_defaults(func=cmd_forward)

    s = sub.add_parser("inverse", parents=[common], help="recover f from u(t0)")
    s.add_argument("--psi", required=True, help="data coefficients or samples JSON")
    s.add_argument("--free", help="free values on degenerate modes, k=v,...")
    s.set_defaults(func=cmd_inverse)

    s = sub.add_parser("verify", parents=[common], help="run the lemma verification suite")
    s.add_argument("--rhos", type=float, nargs="*")
    s.add_argument("--json-out", dest="json_out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("example1", parents=[common], help="reproduce the non-uniqueness example")
    s.add_argument("--M-fine", dest="M_fine", type=int, default=4096)
    s.add_argument("--json-out", dest="json_out")
    s.set_defaults(func=cmd_example1)

    s = sub.add_parser("roundtrip", parents=[common], help="forward -> data -> inverse recovery study")
    s.add_argument("--Ms", type=int, nargs="*")
    s.add_argument("--json-out", dest="json_out")
    s.set_defaults(func=cmd_roundtrip)

    s = sub.add_parser("pick-t0", parents=[common], help="rank candidate observation times")
    s.add_argument("--candidates", type=float, nargs="+", required=True)
    s.add_argument("--csv", help="write the scan of the best candidate as CSV")
    s.set_defaults(func=cmd_pick_t0)
    return p


_OVERRIDES = ("seed", "rho", "T", "t0", "M", "N", "P", "operator", "g", "out")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, **{k: getattr(args, k) for k in _OVERRIDES})
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, ShapeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Scan candidate observation times for a sign-changing profile.

    python scripts/observation_time.py --g t-0.3 --rho 1
"""

import argparse
from pathlib import Path

import numpy as np

from subdiffinv.fraccalc import TimeGrid
from subdiffinv.inverse import lower_bound_scan, pick_t0
from subdiffinv.profiles import builtin_profile
from subdiffinv.spectral import dirichlet_laplacian_1d
from subdiffinv.workbench.plotdata import emit_plotdata


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--g", default="t-0.3")
    ap.add_argument("--rho", type=float, default=1.0)
    ap.add_argument("--M", type=int, default=2048)
    ap.add_argument("--N", type=int, default=32)
    ap.add_argument("--out", default="results/observation_time")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    g = builtin_profile(args.g, TimeGrid(1.0, args.M), args.rho)
    op = dirichlet_laplacian_1d(args.N, 8 * args.N)
    ranked = pick_t0(g, args.rho, 1.0, np.round(np.arange(0.05, 1.0, 0.05), 2), op=op)
    print(f"{'t0':>5} {'min lambda|Delta|':>18} {'sign ok':>8} degenerate")
    for c in sorted(ranked, key=lambda c: c.t0):
        print(f"{c.t0:5.2f} {c.scan_min:18.4e} {str(c.sign_ok):>8} {list(c.degenerate)}")
    best = ranked[0]
    print(f"best acceptable t0 = {best.t0}" if best.acceptable else "no acceptable t0")
    emit_plotdata(lower_bound_scan(op, g, args.rho, best.t0, 1.0), out / f"scan_t0_{best.t0:g}.csv")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Recovery error of forward -> u(t0) -> inverse as the time grid is refined.

    python scripts/roundtrip_convergence.py --rhos 0.4 0.7 1.0
"""

import argparse
from pathlib import Path

import numpy as np

from subdiffinv.workbench.plotdata import emit_plotdata
from subdiffinv.workbench.scenarios import scenario_roundtrip


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rhos", type=float, nargs="+", default=[0.4, 0.7, 1.0])
    ap.add_argument("--g", default="2+sin(2pi t)")
    ap.add_argument("--N", type=int, default=16)
    ap.add_argument("--Ms", type=int, nargs="+", default=[512, 1024, 2048, 4096])
    ap.add_argument("--t0", type=float, default=0.37)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/roundtrip")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    ok = True
    print(f"{'rho':>5} " + " ".join(f"{'M=' + str(M):>10}" for M in args.Ms) + "   order")
    for rho in args.rhos:
        rep = scenario_roundtrip(args.g, rho, N=args.N, Ms=tuple(args.Ms), t0=args.t0, seed=args.seed)
        errs = np.array([r["error"] for r in rep.tables["recovery"]])
        order = np.log2(errs[:-1] / errs[1:]).mean() if errs.size > 1 and np.all(errs > 0) else float("nan")
        print(f"{rho:5.2f} " + " ".join(f"{e:10.2e}" for e in errs) + f"   {order:.2f}")
        emit_plotdata(rep, out / f"rho{rho:g}.json")
        ok &= rep.passed
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())

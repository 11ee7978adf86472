#!/usr/bin/env python3
"""Iterations-to-stationarity power-law study.

For each accuracy target, reports the median (over seeded starts) number of
iterations until the gradient norm first drops below it, then fits the slope
of log(iterations) against log(1/eps). A slope near 2 matches the expected
quadratic blow-up of first-order methods on nonconvex landscapes.

Example:
    python scripts/scaling_study.py --problem rosenbrock:d=10 --algo psca \
        --eps-list 1e-1,3e-2,1e-2,3e-3 --seeds 10
"""

import argparse
import sys

from scaopt.cli import scaling_study


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--problem", default="rosenbrock:d=10")
    ap.add_argument("--algo", default="psca", choices=["sca", "psca", "gd", "pgd"])
    ap.add_argument("--eps-list", default="1e-1,3e-2,1e-2,3e-3")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jitter", type=float, default=0.1)
    ap.add_argument("--max-iters", type=int, default=400_000)
    args = ap.parse_args()

    eps_list = [float(tok) for tok in args.eps_list.split(",")]
    res = scaling_study(
        args.problem,
        args.algo,
        eps_list,
        args.seeds,
        base_seed=args.seed,
        jitter=args.jitter,
        max_iters=args.max_iters,
    )
    for eps, med in zip(res.eps, res.median_iters):
        note = "  [excluded: some run hit max_iters]" if eps in res.excluded else ""
        print(f"eps={eps:<8.3g} median iterations = {med:.1f}{note}")
    print(f"slope = {res.slope:.3f} +- {res.slope_half_width:.3f} (95% half-width)")
    return 0


if __name__ == "__main__":
    sys.exit(main())

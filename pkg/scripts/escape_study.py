#!/usr/bin/env python3
"""Seeded saddle-escape study.

Runs the perturbed solver from the exact saddle of the quartic benchmark over
many seeds, certifies every returned point, and prints the escape rate with an
exact binomial confidence interval. Per-run trajectories and reports land in
the output directory.

Example:
    python scripts/escape_study.py --seeds 100 --out-dir runs/escape
"""

import argparse
import sys

from scaopt.cli import ExperimentConfig, sweep_experiment


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--problem", default="saddle_quartic:d=10")
    ap.add_argument("--algo", default="psca", choices=["psca", "pgd"])
    ap.add_argument("--eps", type=float, default=1e-2)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-iters", type=int, default=20_000)
    ap.add_argument("--out-dir", default="runs/escape")
    args = ap.parse_args()

    cfg = ExperimentConfig(
        problem=args.problem,
        algo=args.algo,
        eps=args.eps,
        delta=args.delta,
        seed=args.seed,
        seeds=args.seeds,
        max_iters=args.max_iters,
        out_dir=args.out_dir,
    )
    path, agg = sweep_experiment(cfg)
    lo, hi = agg["binomial_ci_95"]
    print(f"aggregate: {path}")
    print(
        f"escape rate {agg['successes']}/{agg['seeds']} "
        f"(95% CI [{lo:.3f}, {hi:.3f}])"
    )
    by_term: dict[str, int] = {}
    for run in agg["runs"]:
        by_term[run["termination"]] = by_term.get(run["termination"], 0) + 1
    print(f"terminations: {by_term}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Experiment harness: config parsing, seeded runs and sweeps, trajectory/report files.

Every run writes a trajectory CSV with the fixed column order
``t,f,grad_norm,step_norm,err_norm,perturbed,inner_iters,event`` (floats at 17
significant digits, so a rerun with the same config and seed is byte-identical)
and a JSON report echoing the config, termination, certificate, diagnostic
scales, and monitor tallies. Sweeps aggregate per-seed certificates into an
escape rate with an exact binomial confidence interval, and the scaling study
fits the power law of iterations-to-stationarity against the accuracy target.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from scaopt import certify, drivers, problems
from scaopt.numerics import RngStream, sample_uniform_ball
from scaopt.surrogates import SurrogateSpec

__all__ = [
    "ExperimentConfig",
    "ConfigError",
    "ScalingResult",
    "parse_config",
    "validate_config",
    "run_experiment",
    "sweep_experiment",
    "scaling_study",
    "binomial_ci",
    "main",
]

ALGOS = ("sca", "psca", "gd", "pgd")
CSV_HEADER = "t,f,grad_norm,step_norm,err_norm,perturbed,inner_iters,event"
_JITTER_OFFSET = 1 << 32  # keeps start jitter off the run's own stream


class ConfigError(ValueError):
    """Invalid experiment configuration; carries every violation, not just the first."""

    def __init__(self, violations: Sequence[str]):
        super().__init__("; ".join(violations))
        self.violations = tuple(violations)


def _default_out_dir() -> str:
    return os.environ.get("SCAOPT_OUT_DIR", "runs")


@dataclass
class ExperimentConfig:
    problem: str = "saddle_quartic:d=10"
    algo: str = "psca"
    eps: float = 1e-2
    delta: float = 0.1
    c: float = 1.0
    s: float = 0.5
    delta_u: Optional[float] = None
    eta: Optional[float] = None  # sca/gd step; None derives c / L1
    surrogate: str = "proximal_linear"
    strong_convexity: float = 1.0
    inner_tol: Optional[float] = None
    inner_max_iters: int = 10_000
    dense_solve: bool = False
    seed: int = 0
    seeds: Optional[int] = None
    max_iters: int = 50_000
    out_dir: str = field(default_factory=_default_out_dir)
    record_eigen_every: Optional[int] = None
    window_variant: str = "proof"
    x0: Optional[tuple[float, ...]] = None
    jitter: float = 0.0
    label: Optional[str] = None


def validate_config(cfg: ExperimentConfig) -> list[str]:
    """Collect every violated precondition, naming the failing inequality."""
    errs: list[str] = []
    prob = None
    try:
        prob = problems.get_problem(cfg.problem)
    except ValueError as exc:
        errs.append(str(exc))
    if cfg.algo not in ALGOS:
        errs.append(f"unknown algo '{cfg.algo}'; known: {', '.join(ALGOS)}")
    if not 0 < cfg.delta < 1:
        errs.append(f"delta must satisfy 0 < delta < 1 (got {cfg.delta})")
    if not 0 < cfg.c <= 1:
        errs.append(f"c must satisfy 0 < c <= 1 (got {cfg.c})")
    if not 0 < cfg.s < 1:
        errs.append(f"s must satisfy 0 < s < 1 (got {cfg.s})")
    if cfg.eta is not None and not 0 < cfg.eta <= 1:
        errs.append(f"eta must satisfy 0 < eta <= 1 (got {cfg.eta})")
    if cfg.surrogate not in ("proximal_linear", "quadratic_split"):
        errs.append(f"unknown surrogate '{cfg.surrogate}'")
    if cfg.strong_convexity <= 0:
        errs.append(f"strong_convexity must be positive (got {cfg.strong_convexity})")
    if cfg.inner_tol is not None and cfg.inner_tol <= 0:
        errs.append(f"inner_tol must be positive (got {cfg.inner_tol})")
    if cfg.inner_max_iters < 1:
        errs.append("inner_max_iters must be a positive integer")
    if cfg.max_iters < 1:
        errs.append("max_iters must be a positive integer")
    if cfg.seeds is not None and cfg.seeds < 1:
        errs.append("seeds must be a positive integer")
    if cfg.record_eigen_every is not None and cfg.record_eigen_every < 1:
        errs.append("record_eigen_every must be a positive integer")
    if cfg.window_variant not in ("proof", "algorithm"):
        errs.append(f"window_variant must be 'proof' or 'algorithm' (got '{cfg.window_variant}')")
    if cfg.jitter < 0:
        errs.append(f"jitter must be nonnegative (got {cfg.jitter})")
    if prob is None and cfg.eps <= 0:
        errs.append(f"eps must satisfy 0 < eps <= L1^2/L2 (got {cfg.eps})")
    if prob is not None:
        obj = prob.objective
        lip_grad = obj.constants.grad_lipschitz
        lip_hess = obj.constants.hessian_lipschitz
        eps_max = math.inf if lip_hess == 0 else lip_grad**2 / lip_hess
        if not 0 < cfg.eps <= eps_max:
            errs.append(
                f"eps must satisfy 0 < eps <= L1^2/L2 = {eps_max:.6g} (got {cfg.eps})"
            )
        if cfg.algo in ("psca", "pgd"):
            if lip_hess <= 0:
                errs.append(
                    "perturbed algorithms need a positive Hessian-Lipschitz "
                    "declaration (this problem declares 0)"
                )
            if cfg.delta_u is None and obj.f_star is None:
                errs.append(
                    "delta_u is required: the problem declares no optimum value "
                    "and the harness refuses to guess it (pass --delta-u)"
                )
        if cfg.x0 is not None and len(cfg.x0) != obj.dim:
            errs.append(f"x0 has length {len(cfg.x0)}, problem dimension is {obj.dim}")
        if cfg.surrogate == "quadratic_split" and obj.dense_hessian is None:
            errs.append("quadratic_split needs a problem with a dense Hessian")
    return errs


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", default="saddle_quartic:d=10",
                   help="registry spec, e.g. saddle_quartic:d=10")
    p.add_argument("--algo", default="psca", help="sca | psca | gd | pgd")
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--delta-u", type=float, default=None, dest="delta_u")
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--surrogate", default="proximal_linear")
    p.add_argument("--strong-convexity", type=float, default=1.0, dest="strong_convexity")
    p.add_argument("--inner-tol", type=float, default=None, dest="inner_tol")
    p.add_argument("--inner-max-iters", type=int, default=10_000, dest="inner_max_iters")
    p.add_argument("--dense-solve", action="store_true", dest="dense_solve")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=50_000, dest="max_iters")
    p.add_argument("--out-dir", default=None, dest="out_dir")
    p.add_argument("--record-eigen-every", type=int, default=None, dest="record_eigen_every")
    p.add_argument("--window-variant", default="proof", dest="window_variant")
    p.add_argument("--x0", default=None, help="comma-separated start, overrides the canonical one")
    p.add_argument("--jitter", type=float, default=0.0,
                   help="uniform-ball jitter radius applied to the start")
    p.add_argument("--label", default=None, help="basename for the output files")


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    x0 = None
    if args.x0:
        x0 = tuple(float(tok) for tok in args.x0.split(","))
    return ExperimentConfig(
        problem=args.problem,
        algo=args.algo,
        eps=args.eps,
        delta=args.delta,
        c=args.c,
        s=args.s,
        delta_u=args.delta_u,
        eta=args.eta,
        surrogate=args.surrogate,
        strong_convexity=args.strong_convexity,
        inner_tol=args.inner_tol,
        inner_max_iters=args.inner_max_iters,
        dense_solve=args.dense_solve,
        seed=args.seed,
        seeds=getattr(args, "seeds", None),
        max_iters=args.max_iters,
        out_dir=args.out_dir if args.out_dir is not None else _default_out_dir(),
        record_eigen_every=args.record_eigen_every,
        window_variant=args.window_variant,
        x0=x0,
        jitter=args.jitter,
        label=args.label,
    )


def parse_config(argv: Sequence[str]) -> ExperimentConfig:
    """Parse run flags into a validated config; raises ConfigError with all violations."""
    p = argparse.ArgumentParser(prog="scaopt run", add_help=False)
    _add_run_flags(p)
    p.add_argument("--seeds", type=int, default=None)
    cfg = _config_from_args(p.parse_args(list(argv)))
    errs = validate_config(cfg)
    if errs:
        raise ConfigError(errs)
    return cfg


# ---------------------------------------------------------------------------
# file emission


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_trajectory_csv(path: Path, result: drivers.RunResult) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in result.records:
            fh.write(
                f"{rec.t},{_fmt(rec.f)},{_fmt(rec.grad_norm)},{_fmt(rec.step_norm)},"
                f"{_fmt(rec.err_norm)},{int(rec.perturbed)},{rec.inner_iters},"
                f"{result.events.get(rec.t, '')}\n"
            )


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", text)


def _as_jsonable(value):
    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _as_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_as_jsonable(v) for v in value]
    return value


def _resolve_start(cfg: ExperimentConfig, prob: problems.ProblemInstance) -> np.ndarray:
    x0 = np.array(cfg.x0, dtype=float) if cfg.x0 is not None else prob.canonical_start.copy()
    if cfg.jitter > 0:
        jitter_rng = RngStream(cfg.seed).substream(_JITTER_OFFSET)
        x0 = x0 + sample_uniform_ball(prob.objective.dim, cfg.jitter, jitter_rng)
    return x0


def _surrogate_spec(cfg: ExperimentConfig) -> SurrogateSpec:
    return SurrogateSpec(
        kind=cfg.surrogate,
        strong_convexity=cfg.strong_convexity,
        inner_tol=cfg.inner_tol,
        inner_max_iters=cfg.inner_max_iters,
        dense_solve=cfg.dense_solve,
    )


def _effective_delta_u(cfg: ExperimentConfig, obj: problems.Objective, x0) -> float:
    if cfg.delta_u is not None:
        return cfg.delta_u
    return float(obj.value(x0)) - obj.f_star


def _execute(cfg: ExperimentConfig, prob: problems.ProblemInstance, x0: np.ndarray):
    """Dispatch one run; returns (result, params-or-None)."""
    obj = prob.objective
    spec = _surrogate_spec(cfg)
    eta = cfg.eta if cfg.eta is not None else min(1.0, cfg.c / obj.constants.grad_lipschitz)
    keep = cfg.record_eigen_every
    if cfg.algo in ("psca", "pgd"):
        params = drivers.derive_params(
            cfg.eps, cfg.delta, cfg.c, cfg.s,
            _effective_delta_u(cfg, obj, x0),
            obj, cfg.max_iters, cfg.window_variant,
        )
        rng = RngStream(cfg.seed)
        if cfg.algo == "psca":
            return drivers.run_psca(obj, spec, params, x0, rng, keep_iterates_every=keep), params
        return drivers.run_pgd(obj, params, x0, rng, keep_iterates_every=keep), params
    if cfg.algo == "sca":
        return drivers.run_sca(obj, spec, eta, cfg.eps, cfg.max_iters, x0,
                               keep_iterates_every=keep), None
    return drivers.run_gd(obj, eta, cfg.eps, cfg.max_iters, x0,
                          keep_iterates_every=keep), None


def run_experiment(cfg: ExperimentConfig):
    """Run one configured experiment and write its trajectory CSV and JSON report.

    Returns ``(csv_path, report_path)``. Identical config and seed reproduce a
    byte-identical CSV. A driver error still writes a partial report (config
    plus the error) before propagating, so the failure is on disk.
    """
    errs = validate_config(cfg)
    if errs:
        raise ConfigError(errs)
    prob = problems.get_problem(cfg.problem)
    obj = prob.objective
    x0 = _resolve_start(cfg, prob)

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = cfg.label or _slug(f"{cfg.problem}_{cfg.algo}_seed{cfg.seed}")

    started = time.perf_counter()
    try:
        result, params = _execute(cfg, prob, x0)
    except Exception as exc:
        partial = {
            "config": _as_jsonable(dataclasses.asdict(cfg)),
            "problem": prob.name,
            "error": f"{type(exc).__name__}: {exc}",
        }
        with open(out_dir / f"{base}.json", "w", newline="\n") as fh:
            json.dump(partial, fh, indent=2, sort_keys=True, allow_nan=False)
            fh.write("\n")
        raise
    wall_ms = 1000.0 * (time.perf_counter() - started)

    certificate = None
    if result.termination != "left_valid_region":
        certificate = certify.certify_run(obj, result, cfg.eps)

    scales = None
    if params is not None:
        scales = drivers.derive_scales(params, obj, cfg.strong_convexity)

    csv_path = out_dir / f"{base}.csv"
    write_trajectory_csv(csv_path, result)

    if cfg.record_eigen_every and result.iterates:
        with open(out_dir / f"{base}.eigen.csv", "w", newline="\n") as fh:
            fh.write("t,lambda_min\n")
            for t, x in result.iterates:
                lam, _, _ = certify.min_eigenvalue(obj, x)
                fh.write(f"{t},{_fmt(lam)}\n")

    report = {
        "config": _as_jsonable(dataclasses.asdict(cfg)),
        "problem": prob.name,
        "params": _as_jsonable(dataclasses.asdict(params)) if params is not None else None,
        "result": {
            "termination": result.termination,
            "iterations": result.iterations,
            "perturbation_count": result.perturbation_count,
            "seed": result.seed,
            "x_out": _as_jsonable(result.x_out),
            "f_out": result.f_out,
            "final_f": result.final_f,
            "final_grad_norm": result.final_grad_norm,
            "wall_time_ms": wall_ms,
            "monitors": _as_jsonable(dataclasses.asdict(result.monitors)),
        },
        "certificate": _as_jsonable(dataclasses.asdict(certificate)) if certificate else None,
        "scales": _as_jsonable(dataclasses.asdict(scales)) if scales else None,
    }
    report_path = out_dir / f"{base}.json"
    with open(report_path, "w", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    return csv_path, report_path


def binomial_ci(successes: int, trials: int, confidence: float = 0.95):
    """Exact (Clopper-Pearson) two-sided confidence interval for a rate."""
    if not 0 <= successes <= trials or trials < 1:
        raise ValueError("need 0 <= successes <= trials, trials >= 1")
    alpha = 1.0 - confidence
    lo = 0.0 if successes == 0 else float(stats.beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(stats.beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


def sweep_experiment(cfg: ExperimentConfig):
    """Run ``cfg.seeds`` experiments at seeds ``seed, seed+1, ...`` and aggregate.

    A run counts as an escape success when its certificate classification is
    ``eps_sosp``. Writes the per-seed files plus one aggregate JSON containing
    the success rate with an exact binomial confidence interval.
    """
    if not cfg.seeds or cfg.seeds < 1:
        raise ConfigError(["sweep requires --seeds >= 1"])
    errs = validate_config(cfg)
    if errs:
        raise ConfigError(errs)
    per_seed = []
    successes = 0
    for k in range(cfg.seeds):
        sub = dataclasses.replace(cfg, seed=cfg.seed + k, seeds=None, label=None)
        sub.label = _slug(f"{cfg.problem}_{cfg.algo}_seed{sub.seed}")
        csv_path, report_path = run_experiment(sub)
        with open(report_path) as fh:
            report = json.load(fh)
        cert = report["certificate"]
        success = bool(cert and cert["classification"] == "eps_sosp")
        successes += success
        per_seed.append(
            {
                "seed": sub.seed,
                "success": success,
                "classification": cert["classification"] if cert else None,
                "termination": report["result"]["termination"],
                "f_out": report["result"]["f_out"],
                "iterations": report["result"]["iterations"],
                "csv": str(csv_path),
                "report": str(report_path),
            }
        )
    lo, hi = binomial_ci(successes, cfg.seeds)
    aggregate = {
        "config": _as_jsonable(dataclasses.asdict(cfg)),
        "seeds": cfg.seeds,
        "successes": successes,
        "success_rate": successes / cfg.seeds,
        "binomial_ci_95": [lo, hi],
        "runs": per_seed,
    }
    out_dir = Path(cfg.out_dir)
    base = cfg.label or _slug(f"{cfg.problem}_{cfg.algo}")
    path = out_dir / f"{base}_aggregate.json"
    with open(path, "w", newline="\n") as fh:
        json.dump(aggregate, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    return path, aggregate


# ---------------------------------------------------------------------------
# scaling study


@dataclass(frozen=True)
class ScalingResult:
    """Iterations-to-stationarity against the accuracy target, with a power-law fit."""

    eps: tuple[float, ...]
    median_iters: tuple[float, ...]
    per_seed: tuple[tuple[Optional[int], ...], ...]  # per eps, per seed
    excluded: tuple[float, ...]
    slope: float
    slope_half_width: float
    intercept: float


def scaling_study(
    problem,
    algo: str,
    eps_list: Sequence[float],
    seeds: int,
    *,
    base_seed: int = 0,
    jitter: float = 0.1,
    max_iters: int = 400_000,
    surrogate: SurrogateSpec | None = None,
    c: float = 1.0,
    delta: float = 0.1,
    s: float = 0.5,
    delta_u: float | None = None,
    eta: float | None = None,
) -> ScalingResult:
    """Median iterations to reach each gradient target, with a log-log slope fit.

    One run per seed is driven to the strictest target; first-passage times for
    every target are read off its trajectory (valid because the step size does
    not depend on the target, and the perturbed drivers' own thresholds sit far
    below the smallest measured target). A target any seed failed to reach is
    excluded from the fit and reported. ``slope_half_width`` is the 95%
    confidence half-width of the fitted slope.
    """
    eps_arr = [float(e) for e in eps_list]
    if len(eps_arr) < 3:
        raise ValueError("eps_list must contain at least 3 values")
    if any(b >= a for a, b in zip(eps_arr, eps_arr[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    if algo not in ALGOS:
        raise ValueError(f"unknown algo '{algo}'")
    prob = problems.get_problem(problem) if isinstance(problem, str) else problem
    obj = prob.objective
    spec = surrogate or SurrogateSpec()
    eps_min = eps_arr[-1]
    step = eta if eta is not None else min(1.0, c / obj.constants.grad_lipschitz)

    passages: list[list[Optional[int]]] = [[] for _ in eps_arr]
    for k in range(seeds):
        seed = base_seed + k
        x0 = prob.canonical_start.copy()
        if jitter > 0:
            x0 = x0 + sample_uniform_ball(obj.dim, jitter, RngStream(seed).substream(_JITTER_OFFSET))
        if algo == "sca":
            result = drivers.run_sca(obj, spec, step, eps_min, max_iters, x0)
        elif algo == "gd":
            result = drivers.run_gd(obj, step, eps_min, max_iters, x0)
        else:
            du = delta_u if delta_u is not None else float(obj.value(x0)) - obj.f_star
            params = drivers.derive_params(eps_min, delta, c, s, du, obj, max_iters)
            rng = RngStream(seed)
            if algo == "psca":
                result = drivers.run_psca(obj, spec, params, x0, rng, stop_grad_norm=eps_min)
            else:
                result = drivers.run_pgd(obj, params, x0, rng, stop_grad_norm=eps_min)
        for j, eps in enumerate(eps_arr):
            hit = next((rec.t for rec in result.records if rec.grad_norm <= eps), None)
            passages[j].append(hit)

    medians: list[float] = []
    excluded: list[float] = []
    kept: list[tuple[float, float]] = []
    for eps, hits in zip(eps_arr, passages):
        if any(h is None for h in hits):
            excluded.append(eps)
            medians.append(math.nan)
            continue
        med = float(np.median(hits))
        medians.append(med)
        kept.append((eps, med))
    if len(kept) < 3:
        raise RuntimeError(
            f"only {len(kept)} targets were reached by every seed; cannot fit a slope"
        )
    xs = np.log([1.0 / e for e, _ in kept])
    ys = np.log([max(m, 1.0) for _, m in kept])
    fit = stats.linregress(xs, ys)
    half_width = float(fit.stderr * stats.t.ppf(0.975, len(kept) - 2)) if len(kept) > 2 else math.inf
    return ScalingResult(
        eps=tuple(eps_arr),
        median_iters=tuple(medians),
        per_seed=tuple(tuple(h) for h in passages),
        excluded=tuple(excluded),
        slope=float(fit.slope),
        slope_half_width=half_width,
        intercept=float(fit.intercept),
    )


# ---------------------------------------------------------------------------
# entry point


def _cmd_run(args) -> int:
    cfg = _config_from_args(args)
    try:
        csv_path, report_path = run_experiment(cfg)
    except ConfigError as exc:
        for v in exc.violations:
            print(f"config error: {v}", file=sys.stderr)
        return 2
    except (RuntimeError, ValueError) as exc:
        print(f"run failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(csv_path)
    print(report_path)
    return 0


def _cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    try:
        path, aggregate = sweep_experiment(cfg)
    except ConfigError as exc:
        for v in exc.violations:
            print(f"config error: {v}", file=sys.stderr)
        return 2
    print(path)
    print(
        f"escape rate {aggregate['successes']}/{aggregate['seeds']}"
        f" ci95=[{aggregate['binomial_ci_95'][0]:.3f}, {aggregate['binomial_ci_95'][1]:.3f}]"
    )
    return 0


def _cmd_scaling(args) -> int:
    eps_list = [float(tok) for tok in args.eps_list.split(",")]
    spec = SurrogateSpec(
        kind=args.surrogate,
        strong_convexity=args.strong_convexity,
        inner_tol=args.inner_tol,
        inner_max_iters=args.inner_max_iters,
        dense_solve=args.dense_solve,
    )
    try:
        res = scaling_study(
            args.problem, args.algo, eps_list, args.seeds,
            base_seed=args.seed, jitter=args.jitter, max_iters=args.max_iters,
            surrogate=spec, c=args.c, delta=args.delta, s=args.s,
            delta_u=args.delta_u, eta=args.eta,
        )
    except (ValueError, RuntimeError) as exc:
        print(f"scaling error: {exc}", file=sys.stderr)
        return 2
    for eps, med in zip(res.eps, res.median_iters):
        note = " (excluded)" if eps in res.excluded else ""
        print(f"eps={eps:.3g} median_iters={med:.1f}{note}")
    print(f"slope={res.slope:.3f} +- {res.slope_half_width:.3f}")
    out_dir = Path(args.out_dir if args.out_dir is not None else _default_out_dir())
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / _slug(f"scaling_{args.problem}_{args.algo}.json")
    with open(path, "w", newline="\n") as fh:
        json.dump(_as_jsonable(dataclasses.asdict(res)), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(path)
    return 0


def _cmd_validate(args) -> int:
    prob = problems.get_problem(args.problem)
    report = problems.validate_contracts(prob, RngStream(args.seed), args.samples)
    print(json.dumps(_as_jsonable(dataclasses.asdict(report)), indent=2, sort_keys=True))
    return 0 if report.ok else 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="scaopt",
        description="Surrogate-descent experiment harness with saddle escape and certification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="one seeded run -> trajectory CSV + report JSON")
    _add_run_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="seeded sweep -> per-run files + aggregate")
    _add_run_flags(p_sweep)
    p_sweep.add_argument("--seeds", type=int, required=True)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_scale = sub.add_parser("scaling", help="iterations-to-target power-law study")
    _add_run_flags(p_scale)
    p_scale.add_argument("--eps-list", required=True, dest="eps_list",
                         help="comma-separated, strictly decreasing")
    p_scale.add_argument("--seeds", type=int, default=10)
    p_scale.set_defaults(func=_cmd_scaling)

    p_val = sub.add_parser("validate", help="sampled check of declared smoothness constants")
    p_val.add_argument("--problem", required=True)
    p_val.add_argument("--samples", type=int, default=1000)
    p_val.add_argument("--seed", type=int, default=0)
    p_val.set_defaults(func=_cmd_validate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())

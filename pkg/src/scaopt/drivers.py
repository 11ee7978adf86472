"""Outer solvers: surrogate descent, its perturbed saddle-escaping variant, and baselines.

The plain driver moves a fraction ``eta`` toward the surrogate minimizer each
iteration and stops at a first-order stationary point. The perturbed variant
additionally injects a uniform-ball perturbation whenever the gradient is small
and enough iterations have passed since the last injection; if the objective
fails to drop by the required threshold within the post-perturbation window,
the pre-perturbation point is returned as the second-order stationary
candidate. Every run records an inexact-gradient view of its steps (the error
vector that rewrites the update as a gradient step) plus per-iteration descent,
optimality, and error-bound monitors.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from scaopt.numerics import NonFiniteError, RngStream, as_vector, sample_uniform_ball
from scaopt.problems import Objective
from scaopt.surrogates import (
    SurrogateSpec,
    build_surrogate,
    minimize_surrogate,
    resolved_inner_tol,
)

__all__ = [
    "HypothesisViolationError",
    "RegionExitError",
    "PscaParams",
    "PerturbationState",
    "IterateRecord",
    "MonitorCounts",
    "RunResult",
    "DiagnosticScales",
    "derive_params",
    "derive_scales",
    "gradient_error",
    "descent_check",
    "descent_slack",
    "sca_step",
    "maybe_perturb",
    "check_termination",
    "run_sca",
    "run_psca",
    "run_gd",
    "run_pgd",
]

TERMINATIONS = (
    "returned_xtilde",
    "gradient_below_threshold",
    "max_iters",
    "left_valid_region",
)


class HypothesisViolationError(ValueError):
    """A configuration violates a hypothesis the guarantees depend on."""


class RegionExitError(RuntimeError):
    """An iterate left the region on which the declared constants are valid."""


@dataclass(frozen=True)
class PscaParams:
    """Derived configuration of the perturbed driver.

    ``chi`` is the log factor ``3 max(log(d L1 dU / (c eps^2 delta)), 4)``;
    the step, perturbation radius, thresholds, and window length all follow
    from it (see :func:`derive_params`). Construct through
    :func:`derive_params`, which validates the hypotheses instead of clamping.
    """

    eps: float
    delta: float
    c: float
    s: float
    delta_u: float
    chi: float
    eta: float
    r: float
    g_th: float
    f_th: float
    t_th: int
    max_iters: int

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if not 0 < self.c <= 1:
            raise ValueError("c must lie in (0, 1]")
        if not 0 < self.s < 1:
            raise ValueError("s must lie in (0, 1)")
        if self.eps <= 0 or self.delta_u <= 0:
            raise ValueError("eps and delta_u must be positive")
        if self.chi < 12.0 - 1e-9:
            raise ValueError(f"chi must be >= 12, got {self.chi}")
        if min(self.eta, self.r, self.g_th, self.f_th) <= 0:
            raise ValueError("eta, r, g_th, f_th must be positive")
        if self.t_th < 1 or self.max_iters < 1:
            raise ValueError("t_th and max_iters must be positive integers")


@dataclass(frozen=True)
class PerturbationState:
    """Bookkeeping for the last injection: its iteration, anchor, and value."""

    t_noise: int
    x_tilde: Optional[np.ndarray] = None
    f_tilde: Optional[float] = None


@dataclass(frozen=True, slots=True)
class IterateRecord:
    """One trajectory row.

    ``f``/``grad_norm`` describe the iterate the step starts from (after any
    perturbation injected this iteration); ``step_norm``/``err_norm``/
    ``inner_iters`` describe the step taken from it. Terminal rows carry zero
    step fields.
    """

    t: int
    f: float
    grad_norm: float
    step_norm: float
    err_norm: float
    perturbed: bool
    inner_iters: int


@dataclass
class MonitorCounts:
    """Pass/checked tallies for the per-iteration inequality monitors."""

    descent_checked: int = 0
    descent_passed: int = 0
    optimality_checked: int = 0
    optimality_passed: int = 0
    direction_checked: int = 0
    direction_passed: int = 0
    error_bound_checked: int = 0
    error_bound_passed: int = 0

    def all_passed(self) -> bool:
        return (
            self.descent_passed == self.descent_checked
            and self.optimality_passed == self.optimality_checked
            and self.direction_passed == self.direction_checked
            and self.error_bound_passed == self.error_bound_checked
        )


@dataclass
class RunResult:
    """Full trajectory of a run plus its termination and returned point.

    ``records`` has one row per visited iterate (steps + 1 rows). When the
    perturbed driver returns the pre-perturbation anchor, ``x_out``/``f_out``
    are that anchor, which generally differs from the last trajectory row.
    ``events`` maps row index to a semicolon-separated tag string (perturbation
    rows carry the pre-perturbation objective value so the window decrement is
    auditable from the trajectory alone).
    """

    records: list[IterateRecord]
    termination: str
    x_out: np.ndarray
    f_out: float
    perturbation_count: int
    seed: int
    events: dict[int, str] = field(default_factory=dict)
    perturbation_state: PerturbationState = PerturbationState(t_noise=0)
    monitors: MonitorCounts = field(default_factory=MonitorCounts)
    iterates: Optional[list[tuple[int, np.ndarray]]] = None

    @property
    def iterations(self) -> int:
        return len(self.records) - 1

    @property
    def final_f(self) -> float:
        return self.records[-1].f

    @property
    def final_grad_norm(self) -> float:
        return self.records[-1].grad_norm


@dataclass(frozen=True)
class DiagnosticScales:
    """Landscape scales of the escape analysis, plus the gradient-error bound.

    ``curvature_threshold`` is ``sqrt(L2 eps)`` (the eigenvalue cut for
    second-order stationarity) and ``condition_number`` is ``L1`` over it.
    ``grad_error_bound`` is ``L0 (1 + 1/C)`` when the objective declares a
    value-Lipschitz constant, else None. ``step_rule_residual`` reports how far
    the configured ``c`` sits from the analysis' step-selection rule
    ``16 c^3 L2 D^3 = s f_th`` (diagnostic only; the rule is circular in c).
    """

    curvature_threshold: float
    condition_number: float
    func_decrease_scale: float
    grad_scale: float
    length_scale: float
    time_scale: float
    grad_error_bound: Optional[float] = None
    step_rule_residual: Optional[float] = None


def derive_params(
    eps: float,
    delta: float,
    c: float,
    s: float,
    delta_u: float,
    obj: Objective,
    max_iters: int = 100_000,
    window_variant: str = "proof",
) -> PscaParams:
    """Derive the perturbed driver's configuration from the user inputs.

    All quantities follow the step-1 formulas exactly; violated preconditions
    raise instead of clamping. ``window_variant="proof"`` (default) sets the
    window length to ``ceil((chi/c^2) L1 / sqrt(L2 eps))``; ``"algorithm"``
    multiplies in the extra ``(1 - s)`` factor of the alternative statement.
    """
    lip_grad = obj.constants.grad_lipschitz
    lip_hess = obj.constants.hessian_lipschitz
    if lip_hess <= 0:
        raise ValueError(
            "parameter derivation needs a positive Hessian-Lipschitz declaration"
        )
    if not 0 < c <= 1:
        raise ValueError(f"c must lie in (0, 1], got {c}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not 0 < s < 1:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    if delta_u <= 0:
        raise ValueError(f"delta_u must be positive, got {delta_u}")
    if window_variant not in ("proof", "algorithm"):
        raise ValueError(f"unknown window_variant '{window_variant}'")
    eps_max = lip_grad**2 / lip_hess
    if not 0 < eps <= eps_max:
        raise HypothesisViolationError(
            f"eps must satisfy 0 < eps <= L1^2/L2 = {eps_max:.6g}, got {eps}"
        )

    chi = 3.0 * max(math.log(obj.dim * lip_grad * delta_u / (c * eps**2 * delta)), 4.0)
    eta = c / lip_grad
    g_th = eps * math.sqrt(c) / chi**2
    r = eps * math.sqrt(c) / (lip_grad * chi**2)
    f_th = (c / chi**3) * math.sqrt(eps**3 / lip_hess)
    window = (chi / c**2) * lip_grad / math.sqrt(lip_hess * eps)
    if window_variant == "algorithm":
        window *= 1.0 - s
    t_th = max(1, math.ceil(window))
    return PscaParams(
        eps=eps,
        delta=delta,
        c=c,
        s=s,
        delta_u=delta_u,
        chi=chi,
        eta=eta,
        r=r,
        g_th=g_th,
        f_th=f_th,
        t_th=t_th,
        max_iters=max_iters,
    )


def derive_scales(
    params: PscaParams, obj: Objective, strong_convexity: float
) -> DiagnosticScales:
    """Compute the diagnostic landscape scales for a derived configuration."""
    lip_grad = obj.constants.grad_lipschitz
    lip_hess = obj.constants.hessian_lipschitz
    gamma = math.sqrt(lip_hess * params.eps)
    kappa = lip_grad / gamma
    log_term = math.log(obj.dim * kappa / params.delta)
    func_scale = (params.eta * lip_grad / lip_hess**2) * gamma**3 / log_term**3
    grad_scale = (math.sqrt(params.eta * lip_grad) / lip_hess) * gamma**2 / log_term**2
    length_scale = math.sqrt(params.eta * lip_grad) * (gamma / lip_hess) / log_term
    time_scale = log_term / (params.eta * gamma)

    err_bound = None
    rule_residual = None
    lip_value = obj.constants.value_lipschitz
    if lip_value is not None:
        err_bound = lip_value * (1.0 + 1.0 / strong_convexity)
        rule_residual = (
            params.c**3 * 16.0 * lip_hess * err_bound**3 - params.s * params.f_th
        )
    return DiagnosticScales(
        curvature_threshold=gamma,
        condition_number=kappa,
        func_decrease_scale=func_scale,
        grad_scale=grad_scale,
        length_scale=length_scale,
        time_scale=time_scale,
        grad_error_bound=err_bound,
        step_rule_residual=rule_residual,
    )


def gradient_error(x_t, x_hat, grad) -> np.ndarray:
    """Error vector of the inexact-gradient view of a surrogate step.

    Returns ``e = (x_t - x_hat) - grad``, the unique vector for which
    ``x_{t+1} = x_t - eta (grad + e)`` reproduces the update
    ``x_{t+1} = x_t + eta (x_hat - x_t)`` identically.
    """
    x_t = np.asarray(x_t, dtype=np.float64)
    x_hat = np.asarray(x_hat, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if not x_t.shape == x_hat.shape == grad.shape:
        raise ValueError(
            f"dimension mismatch: {x_t.shape}, {x_hat.shape}, {grad.shape}"
        )
    return (x_t - x_hat) - grad


def descent_check(
    f_t: float,
    f_next: float,
    step_norm: float,
    eta: float,
    strong_convexity: float,
    grad_lipschitz: float,
    slack: float = 0.0,
) -> bool:
    """Single-step descent test ``f_next <= f_t - eta' step_norm^2 + slack``.

    ``eta' = eta C - eta^2 L1 / 2`` is positive only for ``eta < 2C/L1``;
    outside that range the test is vacuous and this raises instead.
    """
    if eta >= 2.0 * strong_convexity / grad_lipschitz:
        raise HypothesisViolationError(
            f"descent factor requires eta < 2C/L1 = "
            f"{2.0 * strong_convexity / grad_lipschitz:.6g}, got {eta}"
        )
    eta_prime = eta * strong_convexity - eta**2 * grad_lipschitz / 2.0
    return f_next <= f_t - eta_prime * step_norm**2 + slack


def descent_slack(spec: SurrogateSpec, rec: IterateRecord, eta: float) -> float:
    """Tolerance for the descent test: float headroom plus inner-solve slack."""
    tol = resolved_inner_tol(spec, rec.grad_norm)
    return 1e-9 * (1.0 + abs(rec.f)) + eta * tol * rec.step_norm


def _advance(obj, spec, surr, x, eta):
    """One update from a prebuilt surrogate; raises if the step leaves the region."""
    x_hat, inner = minimize_surrogate(surr, spec)
    x_next = x + eta * (x_hat - x)
    if not obj.in_region(x_next):
        raise RegionExitError(
            f"iterate left the valid region (norm {np.linalg.norm(x_next, obj.region_norm):.6g}"
            f" > radius {obj.region_radius:.6g})"
        )
    return x_hat, inner, x_next


def sca_step(obj: Objective, spec: SurrogateSpec, x_t, eta: float, t: int = 0):
    """One surrogate-descent update ``x_t + eta (x_hat - x_t)``.

    Returns the next iterate and its :class:`IterateRecord` (including the
    inexact-gradient error norm).
    """
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    x_t = as_vector(x_t, obj.dim)
    surr = build_surrogate(obj, x_t, spec)
    x_hat, inner, x_next = _advance(obj, spec, surr, x_t, eta)
    err = gradient_error(x_t, x_hat, surr.anchor_grad)
    rec = IterateRecord(
        t=t,
        f=surr.anchor_value,
        grad_norm=float(np.linalg.norm(surr.anchor_grad)),
        step_norm=float(np.linalg.norm(x_hat - x_t)),
        err_norm=float(np.linalg.norm(err)),
        perturbed=False,
        inner_iters=inner.iterations,
    )
    return x_next, rec


def maybe_perturb(
    params: PscaParams,
    state: PerturbationState,
    x_t: np.ndarray,
    f_t: float,
    grad_norm: float,
    t: int,
    rng: RngStream,
):
    """Inject a uniform-ball perturbation when the gradient is small and the window allows.

    Fires only when ``grad_norm <= g_th`` and strictly more than ``t_th``
    iterations have passed since the last injection. Stores the anchor and its
    value before moving, so the window test can compare against them. Returns
    ``(x, state, perturbed)``.
    """
    if grad_norm <= params.g_th and t - state.t_noise > params.t_th:
        new_state = PerturbationState(t_noise=t, x_tilde=x_t.copy(), f_tilde=f_t)
        xi = sample_uniform_ball(x_t.size, params.r, rng)
        return x_t + xi, new_state, True
    return x_t, state, False


def check_termination(
    params: PscaParams, state: PerturbationState, x_t, f_t: float, t: int
) -> Optional[np.ndarray]:
    """Window test: return the stored anchor when the decrement was insufficient.

    Exactly ``t_th`` iterations after an injection, if the objective has not
    dropped below the anchor value by more than ``(1 - s) f_th``, the anchor is
    the algorithm's output (an escape that was going to happen has happened by
    now with high probability). Exact floating comparison, no added tolerance.
    """
    if state.x_tilde is None:
        return None
    if t - state.t_noise == params.t_th and f_t - state.f_tilde > -(1.0 - params.s) * params.f_th:
        return state.x_tilde
    return None


def _finalize_monitors(records, counts, spec, eta, strong_convexity, grad_lipschitz):
    """Descent checks between consecutive rows (skipping perturbation jumps)."""
    if eta >= 2.0 * strong_convexity / grad_lipschitz:
        return
    for prev, nxt in zip(records[:-1], records[1:]):
        if nxt.perturbed:
            continue  # nxt.f includes the injected jump, not a pure step
        counts.descent_checked += 1
        counts.descent_passed += descent_check(
            prev.f,
            nxt.f,
            prev.step_norm,
            eta,
            strong_convexity,
            grad_lipschitz,
            descent_slack(spec, prev, eta),
        )


def _step_monitors(counts, surr, x, x_hat, g, gn, step_norm, err_norm, obj, modulus):
    """Optimality, direction-bound, and error-bound monitors for one step."""
    tol = surr.inner_tol
    gap = float((x - x_hat) @ g)
    counts.optimality_checked += 1
    counts.optimality_passed += gap >= modulus * step_norm**2 - (tol * step_norm + 1e-9)
    counts.direction_checked += 1
    counts.direction_passed += step_norm <= gn / modulus + tol / modulus
    lip_value = obj.constants.value_lipschitz
    if lip_value is not None:
        counts.error_bound_checked += 1
        bound = lip_value * (1.0 + 1.0 / modulus) + tol / modulus
        counts.error_bound_passed += err_norm <= bound


def _ensure_finite(f, gn, t):
    if not (math.isfinite(f) and math.isfinite(gn)):
        raise NonFiniteError(f"non-finite objective or gradient at iteration {t}")


def _terminal(records, t, f, gn, perturbed=False):
    records.append(IterateRecord(t, f, gn, 0.0, 0.0, perturbed, 0))


def run_sca(
    obj: Objective,
    spec: SurrogateSpec,
    eta: float,
    g_th: float,
    max_iters: int,
    x0,
    *,
    keep_iterates_every: int | None = None,
) -> RunResult:
    """Surrogate descent until the gradient norm falls to ``g_th``.

    Stops with ``gradient_below_threshold`` at the first iterate whose gradient
    norm is at most ``g_th``; a run that exhausts ``max_iters`` or steps out of
    the valid region terminates with the corresponding tag instead.
    """
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    x = as_vector(x0, obj.dim)
    if not obj.in_region(x):
        raise ValueError("x0 lies outside the objective's valid region")
    modulus = spec.strong_convexity
    lip_grad = obj.constants.grad_lipschitz
    records: list[IterateRecord] = []
    events: dict[int, str] = {}
    counts = MonitorCounts()
    iterates: list[tuple[int, np.ndarray]] | None = (
        [] if keep_iterates_every else None
    )
    termination = "max_iters"
    for t in range(max_iters):
        surr = build_surrogate(obj, x, spec)
        f, g = surr.anchor_value, surr.anchor_grad
        gn = float(np.linalg.norm(g))
        _ensure_finite(f, gn, t)
        if iterates is not None and t % keep_iterates_every == 0:
            iterates.append((t, x.copy()))
        if gn <= g_th:
            termination = "gradient_below_threshold"
            events[t] = "gradient_below_threshold"
            _terminal(records, t, f, gn)
            break
        try:
            x_hat, inner, x_next = _advance(obj, spec, surr, x, eta)
        except RegionExitError as exc:
            termination = "left_valid_region"
            events[t] = f"left_valid_region;{exc}"
            _terminal(records, t, f, gn)
            break
        step_norm = float(np.linalg.norm(x_hat - x))
        err_norm = float(np.linalg.norm(gradient_error(x, x_hat, g)))
        _step_monitors(counts, surr, x, x_hat, g, gn, step_norm, err_norm, obj, modulus)
        records.append(IterateRecord(t, f, gn, step_norm, err_norm, False, inner.iterations))
        x = x_next
    else:
        f = float(obj.value(x))
        gn = float(np.linalg.norm(obj.gradient(x)))
        _terminal(records, max_iters, f, gn)
    _finalize_monitors(records, counts, spec, eta, modulus, lip_grad)
    return RunResult(
        records=records,
        termination=termination,
        x_out=x,
        f_out=float(obj.value(x)),
        perturbation_count=0,
        seed=0,
        events=events,
        monitors=counts,
        iterates=iterates,
    )


def run_psca(
    obj: Objective,
    spec: SurrogateSpec,
    params: PscaParams,
    x0,
    rng: RngStream,
    *,
    keep_iterates_every: int | None = None,
    stop_grad_norm: float | None = None,
) -> RunResult:
    """Perturbed surrogate descent (escapes strict saddles with high probability).

    Each iteration: perturbation check, window termination check, surrogate
    step. Terminates with ``returned_xtilde`` when the window test fires, else
    runs to ``max_iters``. The result is a deterministic function of
    ``(obj, spec, params, x0, rng.seed)``. ``stop_grad_norm`` is an optional
    instrumentation cutoff (first-passage studies); it is off by default and
    does not alter the protocol otherwise.
    """
    modulus = spec.strong_convexity
    lip_grad = obj.constants.grad_lipschitz
    if params.eta >= 2.0 * modulus / lip_grad:
        warnings.warn(
            "eta >= 2C/L1: the descent factor is nonpositive and the descent "
            "monitor is disabled",
            stacklevel=2,
        )
    x = as_vector(x0, obj.dim)
    if not obj.in_region(x):
        raise ValueError("x0 lies outside the objective's valid region")
    state = PerturbationState(t_noise=-params.t_th - 1)
    records: list[IterateRecord] = []
    events: dict[int, str] = {}
    counts = MonitorCounts()
    iterates: list[tuple[int, np.ndarray]] | None = (
        [] if keep_iterates_every else None
    )
    perturbation_count = 0
    termination = "max_iters"
    x_out: np.ndarray | None = None

    for t in range(params.max_iters):
        surr = build_surrogate(obj, x, spec)
        f, g = surr.anchor_value, surr.anchor_grad
        gn = float(np.linalg.norm(g))
        _ensure_finite(f, gn, t)

        x, state, perturbed = maybe_perturb(params, state, x, f, gn, t, rng)
        if perturbed:
            perturbation_count += 1
            events[t] = f"perturbed;f_before={state.f_tilde:.17g}"
            if not obj.in_region(x):
                f = float(obj.value(x))
                gn = float(np.linalg.norm(obj.gradient(x)))
                termination = "left_valid_region"
                events[t] += ";left_valid_region"
                _terminal(records, t, f, gn, perturbed=True)
                break
            surr = build_surrogate(obj, x, spec)
            f, g = surr.anchor_value, surr.anchor_grad
            gn = float(np.linalg.norm(g))

        returned = check_termination(params, state, x, f, t)
        if returned is not None:
            termination = "returned_xtilde"
            x_out = returned
            events[t] = (events[t] + ";" if t in events else "") + "returned_xtilde"
            _terminal(records, t, f, gn, perturbed=perturbed)
            break
        if stop_grad_norm is not None and gn <= stop_grad_norm:
            termination = "gradient_below_threshold"
            events[t] = (events[t] + ";" if t in events else "") + "gradient_below_threshold"
            _terminal(records, t, f, gn, perturbed=perturbed)
            break
        if iterates is not None and t % keep_iterates_every == 0:
            iterates.append((t, x.copy()))

        try:
            x_hat, inner, x_next = _advance(obj, spec, surr, x, params.eta)
        except RegionExitError as exc:
            termination = "left_valid_region"
            events[t] = (events[t] + ";" if t in events else "") + f"left_valid_region;{exc}"
            _terminal(records, t, f, gn, perturbed=perturbed)
            break
        step_norm = float(np.linalg.norm(x_hat - x))
        err_norm = float(np.linalg.norm(gradient_error(x, x_hat, g)))
        _step_monitors(counts, surr, x, x_hat, g, gn, step_norm, err_norm, obj, modulus)
        records.append(
            IterateRecord(t, f, gn, step_norm, err_norm, perturbed, inner.iterations)
        )
        x = x_next
    else:
        f = float(obj.value(x))
        gn = float(np.linalg.norm(obj.gradient(x)))
        _terminal(records, params.max_iters, f, gn)

    if x_out is None:
        x_out = x
        f_out = float(obj.value(x_out))
    else:
        f_out = float(state.f_tilde)
    _finalize_monitors(records, counts, spec, params.eta, modulus, lip_grad)
    return RunResult(
        records=records,
        termination=termination,
        x_out=x_out,
        f_out=f_out,
        perturbation_count=perturbation_count,
        seed=rng.seed,
        events=events,
        perturbation_state=state,
        monitors=counts,
        iterates=iterates,
    )


def run_gd(
    obj: Objective,
    eta: float,
    g_th: float,
    max_iters: int,
    x0,
    *,
    keep_iterates_every: int | None = None,
) -> RunResult:
    """Plain gradient descent baseline with the same stopping rule as :func:`run_sca`."""
    spec = SurrogateSpec(kind="proximal_linear", strong_convexity=1.0, inner_tol=1e-300)
    return _run_gradient_family(
        obj, spec, eta, g_th, max_iters, x0, keep_iterates_every=keep_iterates_every
    )


def _run_gradient_family(obj, spec, eta, g_th, max_iters, x0, *, keep_iterates_every):
    """Gradient descent written as the surrogate update with ``x_hat = x - grad``."""
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    x = as_vector(x0, obj.dim)
    if not obj.in_region(x):
        raise ValueError("x0 lies outside the objective's valid region")
    records: list[IterateRecord] = []
    events: dict[int, str] = {}
    counts = MonitorCounts()
    iterates = [] if keep_iterates_every else None
    termination = "max_iters"
    for t in range(max_iters):
        f = float(obj.value(x))
        g = obj.gradient(x)
        gn = float(np.linalg.norm(g))
        _ensure_finite(f, gn, t)
        if iterates is not None and t % keep_iterates_every == 0:
            iterates.append((t, x.copy()))
        if gn <= g_th:
            termination = "gradient_below_threshold"
            events[t] = "gradient_below_threshold"
            _terminal(records, t, f, gn)
            break
        x_hat = x - g
        x_next = x + eta * (x_hat - x)
        if not obj.in_region(x_next):
            termination = "left_valid_region"
            events[t] = "left_valid_region"
            _terminal(records, t, f, gn)
            break
        err_norm = float(np.linalg.norm(gradient_error(x, x_hat, g)))
        records.append(IterateRecord(t, f, gn, gn, err_norm, False, 0))
        x = x_next
    else:
        f = float(obj.value(x))
        gn = float(np.linalg.norm(obj.gradient(x)))
        _terminal(records, max_iters, f, gn)
    _finalize_monitors(records, counts, spec, eta, 1.0, obj.constants.grad_lipschitz)
    return RunResult(
        records=records,
        termination=termination,
        x_out=x,
        f_out=float(obj.value(x)),
        perturbation_count=0,
        seed=0,
        events=events,
        monitors=counts,
        iterates=iterates,
    )


def run_pgd(
    obj: Objective,
    params: PscaParams,
    x0,
    rng: RngStream,
    *,
    keep_iterates_every: int | None = None,
    stop_grad_norm: float | None = None,
) -> RunResult:
    """Perturbed gradient descent baseline.

    Identical perturbation and window-termination logic to :func:`run_psca`
    with the surrogate minimizer replaced by ``x - grad`` (the proximal model
    with unit modulus), which makes the two coincide step for step in that
    configuration.
    """
    spec = SurrogateSpec(kind="proximal_linear", strong_convexity=1.0, inner_tol=1e-300)
    x = as_vector(x0, obj.dim)
    if not obj.in_region(x):
        raise ValueError("x0 lies outside the objective's valid region")
    state = PerturbationState(t_noise=-params.t_th - 1)
    records: list[IterateRecord] = []
    events: dict[int, str] = {}
    counts = MonitorCounts()
    iterates = [] if keep_iterates_every else None
    perturbation_count = 0
    termination = "max_iters"
    x_out: np.ndarray | None = None

    for t in range(params.max_iters):
        f = float(obj.value(x))
        g = obj.gradient(x)
        gn = float(np.linalg.norm(g))
        _ensure_finite(f, gn, t)

        x, state, perturbed = maybe_perturb(params, state, x, f, gn, t, rng)
        if perturbed:
            perturbation_count += 1
            events[t] = f"perturbed;f_before={state.f_tilde:.17g}"
            if not obj.in_region(x):
                termination = "left_valid_region"
                events[t] += ";left_valid_region"
                _terminal(records, t, f, gn, perturbed=True)
                break
            f = float(obj.value(x))
            g = obj.gradient(x)
            gn = float(np.linalg.norm(g))

        returned = check_termination(params, state, x, f, t)
        if returned is not None:
            termination = "returned_xtilde"
            x_out = returned
            events[t] = (events[t] + ";" if t in events else "") + "returned_xtilde"
            _terminal(records, t, f, gn, perturbed=perturbed)
            break
        if stop_grad_norm is not None and gn <= stop_grad_norm:
            termination = "gradient_below_threshold"
            events[t] = (events[t] + ";" if t in events else "") + "gradient_below_threshold"
            _terminal(records, t, f, gn, perturbed=perturbed)
            break
        if iterates is not None and t % keep_iterates_every == 0:
            iterates.append((t, x.copy()))

        x_hat = x - g
        x_next = x + params.eta * (x_hat - x)
        if not obj.in_region(x_next):
            termination = "left_valid_region"
            events[t] = (events[t] + ";" if t in events else "") + "left_valid_region"
            _terminal(records, t, f, gn, perturbed=perturbed)
            break
        err_norm = float(np.linalg.norm(gradient_error(x, x_hat, g)))
        records.append(IterateRecord(t, f, gn, gn, err_norm, perturbed, 0))
        x = x_next
    else:
        f = float(obj.value(x))
        gn = float(np.linalg.norm(obj.gradient(x)))
        _terminal(records, params.max_iters, f, gn)

    if x_out is None:
        x_out = x
        f_out = float(obj.value(x_out))
    else:
        f_out = float(state.f_tilde)
    _finalize_monitors(records, counts, spec, params.eta, 1.0, obj.constants.grad_lipschitz)
    return RunResult(
        records=records,
        termination=termination,
        x_out=x_out,
        f_out=f_out,
        perturbation_count=perturbation_count,
        seed=rng.seed,
        events=events,
        perturbation_state=state,
        monitors=counts,
        iterates=iterates,
    )

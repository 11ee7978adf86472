"""Stationarity certification: gradient-norm test and minimum Hessian eigenvalue.

A point is classified against the three-way taxonomy: not first-order
stationary (gradient above the target), an approximate second-order stationary
point (small gradient, minimum Hessian eigenvalue above ``-sqrt(L2 eps)``), or
a strict-saddle candidate (small gradient, eigenvalue below the cut). Small
problems with a dense Hessian use an exact symmetric eigendecomposition;
otherwise a shifted power iteration works matrix-free through Hessian-vector
products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from scaopt.numerics import RngStream, as_vector
from scaopt.problems import Objective

__all__ = [
    "Certificate",
    "EigenSolveError",
    "SpectralShiftError",
    "min_eigenvalue",
    "classify",
    "certify_run",
    "DENSE_DIM_LIMIT",
]

DENSE_DIM_LIMIT = 200
_RESTART_SEED = 0x5CA1AB1E


class EigenSolveError(RuntimeError):
    """Power iteration exhausted its budget without certifying convergence."""

    def __init__(self, message: str, lambda_min: float, residual: float):
        super().__init__(message)
        self.lambda_min = lambda_min
        self.residual = residual


class SpectralShiftError(RuntimeError):
    """The shifted operator came out indefinite, diagnosing an understated
    gradient-Lipschitz declaration."""


@dataclass(frozen=True)
class Certificate:
    """Evidence classifying a point.

    ``lambda_min``/``lambda_min_residual``/``method`` are None when the
    gradient test already failed and eigenvalue estimation was skipped.
    ``gamma`` is the curvature threshold ``sqrt(L2 eps)``.
    """

    grad_norm: float
    lambda_min: Optional[float]
    lambda_min_residual: Optional[float]
    eps: float
    gamma: float
    classification: str  # eps_sosp | eps_fosp_strict_saddle | not_fosp
    method: Optional[str]  # dense | matrix_free


def _use_dense(obj: Objective) -> bool:
    return obj.dense_hessian is not None and obj.dim <= DENSE_DIM_LIMIT


def min_eigenvalue(
    obj: Objective,
    x,
    tol: float | None = None,
    max_iters: int = 20_000,
    *,
    method: str = "auto",
    restarts: int = 5,
    seed: int = _RESTART_SEED,
):
    """Estimate the minimum Hessian eigenvalue at ``x``.

    Returns ``(lambda_min, eigenvector, residual)`` with
    ``residual = ||H v - lambda v||``. The dense path (available Hessian and
    dim <= 200) diagonalizes exactly. The matrix-free path runs power iteration
    on the shifted operator ``L1 I - H``, which is PSD whenever the declared
    gradient-Lipschitz constant is honest, so its top eigenvalue is
    ``L1 - lambda_min``. Iteration stops once the Rayleigh quotient stagnates
    within ``tol`` (default ``1e-8 L1``) and the residual certifies the
    estimate; a few random restarts guard against stagnation near eigenvalue
    clusters, and the smallest eigenvalue found wins.
    """
    x = as_vector(x, obj.dim)
    lip_grad = obj.constants.grad_lipschitz
    if tol is None:
        tol = 1e-8 * lip_grad
    if tol <= 0:
        raise ValueError("tol must be positive")
    if method not in ("auto", "dense", "matrix_free"):
        raise ValueError(f"unknown method '{method}'")
    use_dense = _use_dense(obj) if method == "auto" else method == "dense"
    if use_dense and obj.dense_hessian is None:
        raise ValueError("dense method requested but no dense Hessian available")

    if use_dense:
        hess = obj.dense_hessian(x)
        eigvals, eigvecs = np.linalg.eigh(hess)
        lam = float(eigvals[0])
        vec = eigvecs[:, 0]
        residual = float(np.linalg.norm(hess @ vec - lam * vec))
        return lam, vec, residual

    best_lam = math.inf
    best_vec = None
    best_res = math.inf
    for k in range(restarts):
        stream = RngStream(seed).substream(k)
        v = stream.standard_normal(obj.dim)
        v /= np.linalg.norm(v)
        rho_prev = None
        stagnant = 0
        rho = 0.0
        res = math.inf
        for _ in range(max_iters):
            shifted = lip_grad * v - obj.hvp(x, v)
            rho = float(v @ shifted)
            res = float(np.linalg.norm(shifted - rho * v))
            if rho_prev is not None and abs(rho - rho_prev) <= tol:
                stagnant += 1
            else:
                stagnant = 0
            rho_prev = rho
            # stop well under the 100*tol acceptance bar so estimates certify cleanly
            if stagnant >= 5 and res <= 10.0 * tol:
                break
            norm_shifted = float(np.linalg.norm(shifted))
            if norm_shifted == 0.0:
                break  # v is an exact eigenvector of the shift
            v = shifted / norm_shifted
        if rho < -1e-9 * max(1.0, lip_grad):
            raise SpectralShiftError(
                f"shifted operator has negative top eigenvalue ({rho:.3e}); the "
                f"declared gradient-Lipschitz constant {lip_grad:.6g} is understated"
            )
        lam = lip_grad - rho
        if lam < best_lam:
            best_lam, best_vec, best_res = lam, v.copy(), res
    if best_res > 100.0 * tol:
        raise EigenSolveError(
            f"power iteration exhausted {max_iters} iterations with residual "
            f"{best_res:.3e} > {100.0 * tol:.3e}",
            lambda_min=best_lam,
            residual=best_res,
        )
    return best_lam, best_vec, best_res


def classify(obj: Objective, x, eps: float, *, eigen_kwargs: dict | None = None) -> Certificate:
    """Classify a point against the stationarity taxonomy at accuracy ``eps``.

    Skips eigenvalue estimation entirely when the gradient norm already exceeds
    ``eps``. Classification is a pure function of the gradient norm, the
    eigenvalue estimate, ``eps``, and the declared Hessian-Lipschitz constant.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    x = as_vector(x, obj.dim)
    grad_norm = float(np.linalg.norm(obj.gradient(x)))
    gamma = math.sqrt(obj.constants.hessian_lipschitz * eps)
    if grad_norm > eps:
        return Certificate(
            grad_norm=grad_norm,
            lambda_min=None,
            lambda_min_residual=None,
            eps=eps,
            gamma=gamma,
            classification="not_fosp",
            method=None,
        )
    lam, _, residual = min_eigenvalue(obj, x, **(eigen_kwargs or {}))
    return Certificate(
        grad_norm=grad_norm,
        lambda_min=lam,
        lambda_min_residual=residual,
        eps=eps,
        gamma=gamma,
        classification="eps_sosp" if lam >= -gamma else "eps_fosp_strict_saddle",
        method="dense" if _use_dense(obj) else "matrix_free",
    )


def certify_run(obj: Objective, result, eps: float) -> Certificate:
    """Classify the point a run returned."""
    if result.termination == "left_valid_region":
        raise ValueError(
            "cannot certify a run that left the valid region; constants do not "
            "apply at its final point"
        )
    return classify(obj, result.x_out, eps)

"""Euclidean projections onto the cone product D and the l2,1-ball Z.

``D = {(t, W) : ||w^i|| <= t_i for all rows i}`` is a product of second-order
cones and has a closed-form rowwise projection. ``Z = {W : ||W||_{2,1} <= z}``
is projected by finding the root of the piecewise-linear dual function

    omega(lam) = sum_i max(||u^i|| - lam, 0) - z

and shrinking every row of ``U`` by ``lam``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import InvalidInputError, NonFiniteError, as_weight_matrix, row_norms


@dataclass(frozen=True)
class L21Ball:
    z: float

    def __post_init__(self):
        if not (np.isfinite(self.z) and self.z > 0):
            raise InvalidInputError(f"l2,1-ball radius must be positive and finite, got {self.z}")


@dataclass(frozen=True)
class DualRoot:
    lambda_: float
    iterations: int
    residual: float


def project_onto_D(v, U) -> Tuple[np.ndarray, np.ndarray]:
    """Project ``(v, U)`` onto ``D``; returns ``(t, W)``.

    Per row, exactly one branch applies, checked in this order:
    ``||u|| <= v`` keeps the point, ``||u|| <= -v`` maps to the origin, and
    otherwise both parts land on the cone surface at height ``(||u|| + v) / 2``.
    The branches coincide on their boundaries.
    """
    U = as_weight_matrix(U)
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (U.shape[0],):
        raise InvalidInputError(f"v has shape {v.shape}, expected ({U.shape[0]},)")
    if not np.all(np.isfinite(v)):
        raise NonFiniteError("v contains non-finite entries")

    norms = row_norms(U)
    keep = norms <= v
    zero = ~keep & (norms <= -v)
    surface = ~(keep | zero)

    t = np.where(keep, v, 0.0)
    W = np.where(keep[:, None], U, 0.0)
    # surface rows have norms > |v| >= 0, so the division is safe
    height = 0.5 * (norms[surface] + v[surface])
    t[surface] = height
    W[surface] = U[surface] * (height / norms[surface])[:, None]
    return t, W


def omega(lam: float, rho_norms, z: float) -> float:
    """Dual function whose root is the optimal multiplier of the Z projection."""
    return float(np.sum(np.maximum(np.asarray(rho_norms) - lam, 0.0)) - z)


def _exact_root(norms: np.ndarray, z: float, tol: float) -> Tuple[float, int, float]:
    # omega is linear between consecutive sorted norms; with s sorted
    # descending the root sits on the segment where r rows are still active:
    # lam = (s_1 + ... + s_r - z) / r for the largest r with s_r > lam.
    # The condition s_r > lam_r holds exactly on a prefix of r, so counting
    # it gives the last active segment.
    s = np.sort(norms)[::-1]
    lam_r = np.cumsum(s)
    lam_r -= z
    lam_r /= np.arange(1, s.size + 1, dtype=np.float64)
    idx = int(np.count_nonzero(s > lam_r)) - 1
    lam = max(float(lam_r[idx]), 0.0)
    resid = omega(lam, norms, z)
    if abs(resid) > tol * max(1.0, z):
        # a Newton step on the final linear segment removes cumsum rounding;
        # skipped when ||U|| is barely above z and the step would cross zero
        count = np.count_nonzero(norms > lam)
        polished = lam + resid / count if count else lam
        if polished > 0:
            lam = polished
            resid = omega(lam, norms, z)
    return lam, int(idx + 1), resid


def _bisection_root(norms: np.ndarray, z: float, tol: float, max_iter: int = 500) -> Tuple[float, int]:
    lo, hi = 0.0, float(norms.max())
    target = tol * max(1.0, z)
    it = 0
    while it < max_iter:
        it += 1
        lam = 0.5 * (lo + hi)
        w = omega(lam, norms, z)
        if abs(w) <= target or hi - lo <= np.finfo(float).eps * hi:
            break
        if w > 0:
            lo = lam
        else:
            hi = lam
    return lam, it


def find_dual_lambda(rho_norms, z: float, tol: float = 1e-10, method: str = "exact") -> DualRoot:
    """Optimal multiplier for projecting rows with norms ``rho_norms`` onto the ball of radius ``z``.

    Returns exactly 0 when the rows already fit inside the ball. ``method`` is
    ``"exact"`` (sort and solve the active linear segment) or ``"bisection"``
    on ``(0, max norm)``; the residual target is ``tol * max(1, z)``.
    """
    norms = np.asarray(rho_norms, dtype=np.float64)
    if not (z > 0 and np.isfinite(z)):
        raise InvalidInputError(f"radius must be positive and finite, got {z}")
    if not tol > 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    if not np.all(np.isfinite(norms)) or np.any(norms < 0):
        raise InvalidInputError("row norms must be finite and non-negative")
    if norms.size == 0 or np.sum(norms) <= z:
        return DualRoot(0.0, 0, 0.0)

    if method == "exact":
        lam, iters, resid = _exact_root(norms, z, tol)
    elif method == "bisection":
        lam, iters = _bisection_root(norms, z, tol)
        resid = omega(lam, norms, z)
    else:
        raise InvalidInputError(f"unknown root-finding method {method!r}")
    return DualRoot(lam, iters, abs(resid))


def group_soft_threshold(U: np.ndarray, lam: float, norms: np.ndarray = None) -> np.ndarray:
    """Shrink every row of ``U`` towards zero by ``lam`` in Euclidean norm."""
    if norms is None:
        norms = row_norms(U)
    # zero or tiny rows give -inf (nan when lam == 0); fmax maps both to 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        scale = np.fmax(1.0 - lam / norms, 0.0)
    return U * scale[:, None]


def project_onto_Z(U, ball, tol: float = 1e-10, method: str = "exact") -> np.ndarray:
    """Project ``U`` onto the l2,1-ball; ``ball`` is an :class:`L21Ball` or a radius."""
    if not isinstance(ball, L21Ball):
        ball = L21Ball(float(ball))
    U = np.asarray(U, dtype=np.float64)
    norms = row_norms(U)
    root = find_dual_lambda(norms, ball.z, tol, method)
    if root.lambda_ == 0.0:
        return U.copy()
    return group_soft_threshold(U, root.lambda_, norms)

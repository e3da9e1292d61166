"""Accelerated projected gradient for constrained smooth convex problems.

``nesterov_solve`` follows the classic two-sequence scheme: a search point
``s_i = x_i + alpha_i (x_i - x_{i-1})`` is pushed through a projected
gradient step whose step size ``1 / gamma`` is found by doubling ``gamma``
until the quadratic model at ``s_i`` upper-bounds the objective.
``gamma`` never decreases between iterations.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np


class SolverError(RuntimeError):
    pass


class LineSearchError(SolverError):
    """The step-size search exceeded its doubling budget."""


class DivergenceError(SolverError):
    """The objective became non-finite."""


@dataclass(frozen=True)
class ConstrainedProblem:
    """``min g(x)`` over a closed convex set given by its Euclidean projection.

    ``value_and_grad`` may be supplied to share work between the objective and
    gradient; otherwise it is assembled from the two callables.
    """

    objective: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    project: Callable[[np.ndarray], np.ndarray]
    shape: Tuple[int, ...]
    value_and_grad: Optional[Callable[[np.ndarray], Tuple[float, np.ndarray]]] = None

    def evaluate(self, x):
        if self.value_and_grad is not None:
            return self.value_and_grad(x)
        return self.objective(x), self.gradient(x)


@dataclass(frozen=True)
class SolverConfig:
    L0: float = 1.0
    max_iterations: int = 1000
    rel_gap_tol: float = 1e-4
    max_linesearch_doublings: int = 60
    # stop as soon as the objective is <= this value (benchmark protocol)
    target_objective: Optional[float] = None

    def __post_init__(self):
        if not self.L0 > 0:
            raise ValueError(f"L0 must be positive, got {self.L0}")
        if not self.rel_gap_tol > 0:
            raise ValueError(f"rel_gap_tol must be positive, got {self.rel_gap_tol}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.max_linesearch_doublings < 0:
            raise ValueError("max_linesearch_doublings must be non-negative")


class TraceRecord(NamedTuple):
    iteration: int
    objective: float
    gamma: float
    linesearch_trials: int
    elapsed_seconds: float


@dataclass
class SolveResult:
    solution: np.ndarray
    final_objective: float
    trace: List[TraceRecord] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0

    @property
    def objectives(self) -> np.ndarray:
        return np.array([r.objective for r in self.trace])

    @property
    def gammas(self) -> np.ndarray:
        return np.array([r.gamma for r in self.trace])


class LineStep(NamedTuple):
    gamma: float
    x_next: np.ndarray
    trials: int
    objective: float


def model_value(gamma, x, y, g_x, grad_x) -> float:
    """Tangent plane of g at ``x`` plus ``gamma / 2 * ||y - x||^2``, evaluated at ``y``."""
    d = np.asarray(y) - np.asarray(x)
    return float(g_x + np.vdot(grad_x, d) + 0.5 * gamma * np.vdot(d, d))


def momentum_sequence(count: int) -> np.ndarray:
    """``theta_{-1}, theta_0, ..., theta_{count-2}`` with theta_{-1} = 0, theta_0 = 1."""
    thetas = [0.0, 1.0]
    while len(thetas) < count:
        thetas.append(0.5 * (1.0 + math.sqrt(1.0 + 4.0 * thetas[-1] ** 2)))
    return np.array(thetas[:count])


def _accepts(g_next, g_s, grad_s, d, gamma) -> bool:
    # g(x+) <= g(s) + <g'(s), d> + gamma/2 ||d||^2, compared as a difference
    # so that an exact quadratic with gamma = L is not rejected by rounding
    lhs = g_next - g_s - float(np.vdot(grad_s, d))
    rhs = 0.5 * gamma * float(np.vdot(d, d))
    return lhs <= rhs + 1e-12 * max(abs(g_next), abs(g_s))


def line_search(problem: ConstrainedProblem, s, gamma_prev, cfg: SolverConfig,
                g_s=None, grad_s=None) -> LineStep:
    """Double ``gamma`` from ``gamma_prev`` until the projected step is acceptable."""
    if not gamma_prev > 0:
        raise ValueError(f"gamma_prev must be positive, got {gamma_prev}")
    if g_s is None or grad_s is None:
        g_s, grad_s = problem.evaluate(s)
    for j in range(cfg.max_linesearch_doublings + 1):
        gamma = gamma_prev * 2.0 ** j
        x_next = problem.project(s - grad_s / gamma)
        g_next = problem.objective(x_next)
        if not math.isfinite(g_next):
            raise DivergenceError(f"objective is {g_next} at a trial point")
        if _accepts(g_next, g_s, grad_s, x_next - s, gamma):
            return LineStep(gamma, x_next, j + 1, g_next)
    raise LineSearchError(
        f"no acceptable step after {cfg.max_linesearch_doublings} doublings "
        f"(gamma reached {gamma:.3g}); check the gradient and the data"
    )


def _solve(problem, x0, cfg, momentum):
    x0 = np.array(x0, dtype=np.float64)
    if x0.shape != tuple(problem.shape):
        raise ValueError(f"x0 has shape {x0.shape}, problem expects {tuple(problem.shape)}")
    if not np.all(np.isfinite(x0)):
        raise ValueError("x0 contains non-finite entries")

    start = time.perf_counter()
    x_prev = x0
    x = x0.copy()
    g_x = problem.objective(x)
    if not math.isfinite(g_x):
        raise DivergenceError(f"objective is {g_x} at the starting point")
    theta_2, theta_1 = 0.0, 1.0  # theta_{i-2}, theta_{i-1}
    gamma = cfg.L0
    trace = []
    converged = False

    for i in range(1, cfg.max_iterations + 1):
        alpha = (theta_2 - 1.0) / theta_1 if momentum else 0.0
        s = x + alpha * (x - x_prev)
        g_s, grad_s = problem.evaluate(s)
        if not math.isfinite(g_s):
            raise DivergenceError(f"objective is {g_s} at search point {i}")
        step = line_search(problem, s, gamma, cfg, g_s, grad_s)
        gamma = step.gamma
        theta_2, theta_1 = theta_1, 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * theta_1 ** 2))

        trace.append(TraceRecord(i, step.objective, gamma, step.trials,
                                 time.perf_counter() - start))
        gap = abs(step.objective - g_x) / max(1.0, abs(g_x))
        x_prev, x, g_x = x, step.x_next, step.objective
        if cfg.target_objective is not None:
            if g_x <= cfg.target_objective:
                converged = True
                break
        elif gap <= cfg.rel_gap_tol:
            converged = True
            break

    return SolveResult(solution=x, final_objective=g_x, trace=trace,
                       converged=converged, iterations=len(trace))


def nesterov_solve(problem: ConstrainedProblem, x0, cfg: SolverConfig = SolverConfig()) -> SolveResult:
    """Accelerated projected gradient with doubling line search.

    Stops when the relative change of the objective between consecutive
    iterates drops to ``cfg.rel_gap_tol`` or, if ``cfg.target_objective`` is
    set, as soon as the objective reaches it. The returned solution is always
    a projected iterate.
    """
    return _solve(problem, x0, cfg, momentum=True)


def projected_gradient_solve(problem: ConstrainedProblem, x0, cfg: SolverConfig = SolverConfig()) -> SolveResult:
    """Plain projected gradient descent with the same line search and stopping rules."""
    return _solve(problem, x0, cfg, momentum=False)

"""The two smooth reformulations of l2,1-regularized multi-task learning.

``loss(W) + rho * ||W||_{2,1}`` is solved either as

* ``amtfl1``: ``min loss(W) + rho * sum(t)`` over ``||w^i|| <= t_i``, or
* ``amtfl2``: ``min loss(W)`` over ``||W||_{2,1} <= z``.

Both are handed to the accelerated solver as :class:`ConstrainedProblem`
instances. aMTFL1 points are packed ``(n, k + 1)`` arrays, see
:class:`~l21mtl.core.AugmentedPoint`.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Union

import numpy as np

from .core import AugmentedPoint, InvalidInputError, TaskDataset, l21_norm, row_norms
from .losses import LossFunction, check_labels, least_squares, logistic
from .projections import L21Ball, project_onto_D, project_onto_Z
from .solver import ConstrainedProblem, SolveResult, SolverConfig, nesterov_solve, projected_gradient_solve

# rows with norm below this fraction of the largest row norm count as zero
SELECTION_THRESHOLD = 1e-8


@dataclass(frozen=True)
class Amtfl1Spec:
    loss: LossFunction
    dataset: TaskDataset
    rho: float

    def __post_init__(self):
        if not (np.isfinite(self.rho) and self.rho >= 0):
            raise InvalidInputError(f"rho must be finite and non-negative, got {self.rho}")

    @property
    def param(self) -> float:
        return self.rho

    def with_param(self, value: float) -> "Amtfl1Spec":
        return replace(self, rho=value)


@dataclass(frozen=True)
class Amtfl2Spec:
    loss: LossFunction
    dataset: TaskDataset
    ball: L21Ball

    @property
    def param(self) -> float:
        return self.ball.z

    def with_param(self, value: float) -> "Amtfl2Spec":
        return replace(self, ball=L21Ball(value))


def _bind_loss(loss, d: TaskDataset):
    if loss is logistic:
        check_labels(d)
    return lambda W: loss(W, d)


def build_amtfl1(spec: Amtfl1Spec) -> ConstrainedProblem:
    d, rho = spec.dataset, spec.rho
    f = _bind_loss(spec.loss, d)
    shape = (d.n, d.k + 1)

    def _check(x):
        if x.shape != shape:
            raise InvalidInputError(f"point has shape {x.shape}, expected {shape}")

    def objective(x):
        _check(x)
        return f(x[:, 1:])[0] + rho * float(np.sum(x[:, 0]))

    def value_and_grad(x):
        _check(x)
        value, grad_W = f(x[:, 1:])
        grad = np.empty(shape)
        grad[:, 0] = rho
        grad[:, 1:] = grad_W
        return value + rho * float(np.sum(x[:, 0])), grad

    def project(x):
        t, W = project_onto_D(x[:, 0], x[:, 1:])
        return AugmentedPoint(t, W).pack()

    return ConstrainedProblem(
        objective=objective,
        gradient=lambda x: value_and_grad(x)[1],
        project=project,
        shape=shape,
        value_and_grad=value_and_grad,
    )


def build_amtfl2(spec: Amtfl2Spec, tol: float = 1e-10) -> ConstrainedProblem:
    d, ball = spec.dataset, spec.ball
    f = _bind_loss(spec.loss, d)
    shape = (d.n, d.k)

    def value_and_grad(W):
        if W.shape != shape:
            raise InvalidInputError(f"point has shape {W.shape}, expected {shape}")
        return f(W)

    return ConstrainedProblem(
        objective=lambda W: value_and_grad(W)[0],
        gradient=lambda W: value_and_grad(W)[1],
        project=lambda W: project_onto_Z(W, ball, tol),
        shape=shape,
        value_and_grad=value_and_grad,
    )


def build_problem(spec) -> ConstrainedProblem:
    if isinstance(spec, Amtfl1Spec):
        return build_amtfl1(spec)
    if isinstance(spec, Amtfl2Spec):
        return build_amtfl2(spec)
    raise TypeError(f"unsupported problem spec {type(spec).__name__}")


def initial_point(spec) -> np.ndarray:
    d = spec.dataset
    cols = d.k + 1 if isinstance(spec, Amtfl1Spec) else d.k
    return np.zeros((d.n, cols))


def weights_of(spec, x: np.ndarray) -> np.ndarray:
    """The ``W`` block of a solver point."""
    return x[:, 1:] if isinstance(spec, Amtfl1Spec) else x


def solve(spec, cfg: SolverConfig = SolverConfig(), x0=None, method: str = "nesterov") -> SolveResult:
    """Solve one reformulation from ``x0`` (zero by default)."""
    problem = build_problem(spec)
    if x0 is None:
        x0 = initial_point(spec)
    if method == "nesterov":
        return nesterov_solve(problem, x0, cfg)
    if method == "gradient":
        return projected_gradient_solve(problem, x0, cfg)
    raise InvalidInputError(f"unknown method {method!r}")


def rho_to_z(W) -> float:
    """Ball radius matching a regularized solution: its l2,1-norm.

    Returns 0 for an all-zero solution; such a value cannot be used as a
    ball radius.
    """
    return l21_norm(W)


def rho_max(loss: LossFunction, d: TaskDataset) -> float:
    """Smallest ``rho`` whose solution is ``W = 0``: the largest row norm of the loss gradient at zero."""
    _, grad = loss(np.zeros((d.n, d.k)), d)
    return float(row_norms(grad).max())


def selected_rows(W) -> np.ndarray:
    """Boolean mask of rows (features) that are not numerically zero."""
    norms = row_norms(W)
    top = norms.max() if norms.size else 0.0
    if top == 0.0:
        return np.zeros(norms.shape, dtype=bool)
    return norms > SELECTION_THRESHOLD * top


@dataclass(frozen=True)
class PathPoint:
    param: float
    W: np.ndarray
    objective: float
    iterations: int
    converged: bool
    solution: np.ndarray


@dataclass
class PathResult:
    points: List[PathPoint] = field(default_factory=list)
    mode: str = "cold"

    @property
    def total_iterations(self) -> int:
        return sum(p.iterations for p in self.points)

    @property
    def params(self) -> np.ndarray:
        return np.array([p.param for p in self.points])


def _check_monotone(template, params: Sequence[float]) -> None:
    diffs = np.diff(np.asarray(params, dtype=np.float64))
    if isinstance(template, Amtfl1Spec):
        if np.any(diffs >= 0):
            raise InvalidInputError("rho values must be strictly decreasing")
    elif np.any(diffs <= 0):
        raise InvalidInputError("z values must be strictly increasing")


def solve_path(template: Union[Amtfl1Spec, Amtfl2Spec], params: Sequence[float], warm: bool,
               cfg: SolverConfig = SolverConfig(), method: str = "nesterov") -> PathResult:
    """Solve a sequence of problems along decreasing ``rho`` or increasing ``z``.

    In warm mode each problem starts from the previous solution, which is
    feasible for the next one because the feasible sets are nested. In cold
    mode every problem starts from zero.
    """
    params = [float(p) for p in params]
    if not params:
        raise InvalidInputError("parameter list is empty")
    _check_monotone(template, params)

    result = PathResult(mode="warm" if warm else "cold")
    x_start: Optional[np.ndarray] = None
    for p in params:
        spec = template.with_param(p)
        x0 = x_start if (warm and x_start is not None) else initial_point(spec)
        if isinstance(spec, Amtfl2Spec) and l21_norm(x0) > p * (1 + 1e-8):
            raise AssertionError(f"warm start lies outside the ball of radius {p}")
        res = solve(spec, cfg, x0=x0, method=method)
        W = weights_of(spec, res.solution)
        result.points.append(PathPoint(p, W.copy(), res.final_objective, res.iterations,
                                       res.converged, res.solution))
        x_start = res.solution
    return result

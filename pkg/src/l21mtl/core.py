"""Datasets, weight matrices and l2,1-norm utilities.

A weight matrix is a plain ``(n, k)`` float64 array: row ``i`` holds the
weights of feature ``i`` across all tasks, column ``j`` is the predictor of
task ``j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class NonFiniteError(InvalidInputError):
    pass


class EmptyTaskError(InvalidInputError):
    pass


class DimensionMismatchError(InvalidInputError):
    def __init__(self, message, task=None):
        super().__init__(message)
        self.task = task


def as_weight_matrix(W) -> np.ndarray:
    """Return ``W`` as a finite 2-D float64 array or raise."""
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2:
        raise InvalidInputError(f"weight matrix must be 2-D, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise NonFiniteError("weight matrix contains non-finite entries")
    return W


def row_norms(W) -> np.ndarray:
    """Euclidean norm of every row of ``W``."""
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2:
        raise InvalidInputError(f"weight matrix must be 2-D, got shape {W.shape}")
    norms = _row_norms(W)
    # a row norm is finite iff every entry of the row is
    if not np.all(np.isfinite(norms)):
        raise NonFiniteError("weight matrix contains non-finite entries")
    return norms


def _row_norms(W: np.ndarray) -> np.ndarray:
    norms = np.sqrt(np.einsum("ij,ij->i", W, W))
    # squares under/overflow for tiny or huge rows; rescale those by their max entry
    bad = (norms < 1e-150) | (norms > 1e150)
    if np.any(bad):
        sub = W[bad]
        scale = np.max(np.abs(sub), axis=1)
        scale[scale == 0] = 1.0
        with np.errstate(invalid="ignore"):
            sub = sub / scale[:, None]
            norms[bad] = scale * np.sqrt(np.einsum("ij,ij->i", sub, sub))
    return norms


def l21_norm(W) -> float:
    """Sum of the row norms of ``W``."""
    return float(np.sum(row_norms(W)))


@dataclass(frozen=True)
class TaskDataset:
    """Per-task design matrices ``A_j`` (m_j x n) and targets ``y_j``.

    Use :meth:`from_arrays` to build a validated instance.
    """

    tasks: Tuple[Tuple[np.ndarray, np.ndarray], ...]

    @classmethod
    def from_arrays(cls, As: Sequence, ys: Sequence) -> "TaskDataset":
        if len(As) != len(ys):
            raise DimensionMismatchError(
                f"got {len(As)} design matrices but {len(ys)} target vectors"
            )
        tasks = []
        for A, y in zip(As, ys):
            A = np.array(A, dtype=np.float64)
            y = np.array(y, dtype=np.float64)
            A.setflags(write=False)
            y.setflags(write=False)
            tasks.append((A, y))
        d = cls(tuple(tasks))
        validate_dataset(d)
        return d

    @property
    def k(self) -> int:
        return len(self.tasks)

    @property
    def n(self) -> int:
        return self.tasks[0][0].shape[1]

    @property
    def m(self) -> int:
        return sum(A.shape[0] for A, _ in self.tasks)

    @property
    def task_sizes(self) -> Tuple[int, ...]:
        return tuple(A.shape[0] for A, _ in self.tasks)

    def __iter__(self):
        return iter(self.tasks)


def validate_dataset(d: TaskDataset) -> None:
    """Raise unless every task is a finite ``(A_j, y_j)`` pair over ``n`` shared features.

    Task indices in error messages are 1-based.
    """
    if len(d.tasks) == 0:
        raise EmptyTaskError("dataset has no tasks")
    n = None
    for j, (A, y) in enumerate(d.tasks, start=1):
        if A.ndim != 2:
            raise DimensionMismatchError(f"task {j}: design matrix must be 2-D", task=j)
        if y.ndim != 1:
            raise DimensionMismatchError(f"task {j}: targets must be 1-D", task=j)
        if A.shape[0] == 0:
            raise EmptyTaskError(f"task {j} has no samples")
        if n is None:
            n = A.shape[1]
            if n == 0:
                raise DimensionMismatchError("design matrices have no columns", task=j)
        elif A.shape[1] != n:
            raise DimensionMismatchError(
                f"task {j}: expected {n} feature columns, got {A.shape[1]}", task=j
            )
        if y.shape[0] != A.shape[0]:
            raise DimensionMismatchError(
                f"task {j}: {A.shape[0]} rows in design matrix but {y.shape[0]} targets",
                task=j,
            )
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
            raise NonFiniteError(f"task {j} contains non-finite values")


def check_weight_shape(W: np.ndarray, d: TaskDataset) -> None:
    if W.shape != (d.n, d.k):
        raise InvalidInputError(
            f"weight matrix has shape {W.shape}, dataset needs ({d.n}, {d.k})"
        )


@dataclass(frozen=True)
class AugmentedPoint:
    """A point ``(t, W)`` of the auxiliary-variable reformulation.

    The solver works on flat arrays, so the pair is packed as an ``(n, k + 1)``
    array whose first column is ``t``. Packing keeps Frobenius inner products
    over the full point identical to ``<t, t'> + <W, W'>``.
    """

    t: np.ndarray
    W: np.ndarray

    def pack(self) -> np.ndarray:
        return np.column_stack([self.t, self.W])

    @classmethod
    def unpack(cls, x: np.ndarray) -> "AugmentedPoint":
        return cls(t=x[:, 0], W=x[:, 1:])

    def is_feasible(self, atol: float = 0.0) -> bool:
        return bool(np.all(row_norms(self.W) <= self.t + atol))

"""Smooth convex multi-task losses.

Every loss has the signature ``loss(W, dataset) -> (value, gradient)`` where
``gradient`` has the shape of ``W``. Both losses sum over samples and have no
intercept; append a constant feature column if one is needed.
"""
from __future__ import annotations

from typing import Callable, Tuple

import numpy as np
from scipy.special import expit

from .core import InvalidInputError, TaskDataset, as_weight_matrix, check_weight_shape

LossFunction = Callable[[np.ndarray, TaskDataset], Tuple[float, np.ndarray]]


def least_squares(W, d: TaskDataset) -> Tuple[float, np.ndarray]:
    """Half the summed squared residuals, ``1/2 sum_j ||y_j - A_j w_j||^2``."""
    W = as_weight_matrix(W)
    check_weight_shape(W, d)
    grad = np.empty_like(W)
    value = 0.0
    for j, (A, y) in enumerate(d.tasks):
        r = A @ W[:, j] - y
        value += 0.5 * float(r @ r)
        grad[:, j] = A.T @ r
    return value, grad


def check_labels(d: TaskDataset) -> None:
    for j, (_, y) in enumerate(d.tasks, start=1):
        if not np.all((y == 1.0) | (y == -1.0)):
            raise InvalidInputError(f"task {j}: logistic loss needs labels in {{-1, +1}}")


def logistic(W, d: TaskDataset) -> Tuple[float, np.ndarray]:
    """Binary logistic loss ``sum_j sum_i log(1 + exp(-y_i^j w_j^T a_i^j))``."""
    W = as_weight_matrix(W)
    check_weight_shape(W, d)
    check_labels(d)
    grad = np.empty_like(W)
    value = 0.0
    for j, (A, y) in enumerate(d.tasks):
        margin = y * (A @ W[:, j])
        # log(1 + exp(-margin)) without overflow
        value += float(np.sum(np.logaddexp(0.0, -margin)))
        grad[:, j] = A.T @ (-y * expit(-margin))
    return value, grad


LOSSES = {"least-squares": least_squares, "logistic": logistic}

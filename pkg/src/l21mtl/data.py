"""CSV input/output and synthetic multi-task data.

Dataset CSV layout: a header row, then one sample per row with the task id
(1..k) first, ``n`` feature columns, and the target last. Rows of a task need
not be contiguous. Floats are written with 17 significant digits so that a
write/read round trip is exact.
"""
from __future__ import annotations

import csv
import math
import os
from typing import Iterable, Sequence, Tuple

import numpy as np

from .core import InvalidInputError, TaskDataset, validate_dataset


class DatasetFormatError(InvalidInputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def load_dataset(path) -> TaskDataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetFormatError("file is empty", line=1) from None
        width = len(header)
        if width < 3:
            raise DatasetFormatError(
                f"expected at least 3 columns (task id, >= 1 feature, target), got {width}", line=1
            )
        ids, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != width:
                raise DatasetFormatError(
                    f"expected {width} columns (task id, {width - 2} features, target), got {len(row)}",
                    line=lineno,
                )
            try:
                tid = int(row[0])
                values = [float(c) for c in row[1:]]
            except ValueError as exc:
                raise DatasetFormatError(str(exc), line=lineno) from None
            ids.append(tid)
            rows.append(values)

    if not rows:
        raise DatasetFormatError("no data rows")
    ids = np.array(ids)
    data = np.array(rows, dtype=np.float64)
    present = np.unique(ids)
    k = int(present.max())
    if present.min() < 1 or present.size != k:
        missing = sorted(set(range(1, k + 1)) - set(present.tolist()))
        raise DatasetFormatError(
            f"task ids must be dense 1..k; found {present.tolist()}"
            + (f", missing {missing}" if missing else "")
        )
    As, ys = [], []
    for j in range(1, k + 1):
        block = data[ids == j]
        As.append(block[:, :-1])
        ys.append(block[:, -1])
    return TaskDataset.from_arrays(As, ys)


def save_dataset(d: TaskDataset, path) -> None:
    validate_dataset(d)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["task"] + [f"x{i}" for i in range(1, d.n + 1)] + ["y"])
        for j, (A, y) in enumerate(d.tasks, start=1):
            for a, target in zip(A, y):
                w.writerow([j] + [fmt(v) for v in a] + [fmt(target)])


def write_matrix(W: np.ndarray, path, prefix: str = "col_") -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"{prefix}{j}" for j in range(1, W.shape[1] + 1)])
        for row in W:
            w.writerow([fmt(v) for v in row])


def read_matrix(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_table(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, float) else v for v in row])


def generate_synthetic(n: int, k: int, m_per_task: int, sparsity: float = 0.5,
                       noise_sigma: float = 0.1, seed: int = 0) -> Tuple[TaskDataset, np.ndarray]:
    """Random regression tasks sharing a row-sparse ground truth.

    ``ceil(sparsity * n)`` randomly chosen rows of the true weight matrix are
    zero for every task. Design matrices and nonzero weights are standard
    normal; targets get Gaussian noise with standard deviation ``noise_sigma``.
    """
    if n < 1 or k < 1 or m_per_task < 1:
        raise InvalidInputError("n, k and m_per_task must all be positive")
    if not 0.0 <= sparsity <= 1.0:
        raise InvalidInputError(f"sparsity must lie in [0, 1], got {sparsity}")
    if not noise_sigma >= 0:
        raise InvalidInputError(f"noise_sigma must be non-negative, got {noise_sigma}")

    rng = np.random.default_rng(seed)
    W = rng.standard_normal((n, k))
    n_zero = math.ceil(sparsity * n)
    W[rng.permutation(n)[:n_zero]] = 0.0
    As, ys = [], []
    for j in range(k):
        A = rng.standard_normal((m_per_task, n))
        y = A @ W[:, j] + noise_sigma * rng.standard_normal(m_per_task)
        As.append(A)
        ys.append(y)
    return TaskDataset.from_arrays(As, ys), W


def ensure_dir(path) -> str:
    os.makedirs(path, exist_ok=True)
    return path

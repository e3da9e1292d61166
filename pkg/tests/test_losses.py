import math

import numpy as np
import pytest

from l21mtl import InvalidInputError, TaskDataset, least_squares, logistic
from conftest import random_dataset
from oracles import central_difference


def test_least_squares_at_zero(rng):
    d = random_dataset(rng, 3, 2)
    value, grad = least_squares(np.zeros((3, 2)), d)
    assert value == pytest.approx(0.5 * sum(y @ y for _, y in d))
    for j, (A, y) in enumerate(d):
        np.testing.assert_allclose(grad[:, j], -A.T @ y)


def test_least_squares_interpolating(rng):
    Y = rng.standard_normal((4, 2))
    d = TaskDataset.from_arrays([np.eye(4), np.eye(4)], [Y[:, 0], Y[:, 1]])
    value, grad = least_squares(Y, d)
    assert value == 0.0
    np.testing.assert_array_equal(grad, 0.0)


def test_least_squares_finite_difference_example(rng):
    d = TaskDataset.from_arrays([rng.standard_normal((4, 3)) for _ in range(2)],
                                [rng.standard_normal(4) for _ in range(2)])
    W = rng.standard_normal((3, 2))
    fd = central_difference(lambda X: least_squares(X, d)[0], W, h=1e-5)
    _, grad = least_squares(W, d)
    assert np.max(np.abs(grad - fd) / np.maximum(1.0, np.abs(fd))) <= 1e-6


def test_least_squares_shape_mismatch(rng):
    d = random_dataset(rng, 3, 2)
    with pytest.raises(InvalidInputError):
        least_squares(np.zeros((3, 3)), d)


def test_logistic_at_zero(rng):
    d = random_dataset(rng, 3, 3, labels=True)
    value, _ = logistic(np.zeros((3, 3)), d)
    assert value == pytest.approx(d.m * math.log(2), rel=1e-14)


def test_logistic_separable_limit():
    d = TaskDataset.from_arrays([np.array([[1.0, -2.0]])], [np.array([1.0])])
    direction = np.array([[1.0], [-1.0]])  # margin 3 per unit
    values = [logistic(s * direction, d)[0] for s in [0, 1, 10, 100, 1e3, 1e6]]
    assert all(a > b for a, b in zip(values[:4], values[1:4]))
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert values[-1] == 0.0
    assert np.all(np.isfinite(logistic(-1e6 * direction, d)[1]))


def test_logistic_finite_difference(rng):
    d = random_dataset(rng, 4, 2, labels=True)
    W = rng.standard_normal((4, 2))
    fd = central_difference(lambda X: logistic(X, d)[0], W)
    _, grad = logistic(W, d)
    assert np.max(np.abs(grad - fd) / np.maximum(1.0, np.abs(fd))) <= 1e-6


def test_logistic_rejects_bad_labels(rng):
    d = random_dataset(rng, 3, 2)
    with pytest.raises(InvalidInputError, match="labels"):
        logistic(np.zeros((3, 2)), d)


@pytest.mark.parametrize("loss,labels", [(least_squares, False), (logistic, True)])
def test_convexity_probe(rng, loss, labels):
    for _ in range(50):
        d = random_dataset(rng, 4, 3, labels=labels)
        W1, W2 = rng.standard_normal((2, 4, 3))
        th = rng.uniform(0, 1)
        lhs = loss(th * W1 + (1 - th) * W2, d)[0]
        rhs = th * loss(W1, d)[0] + (1 - th) * loss(W2, d)[0]
        assert lhs <= rhs + 1e-10 * max(1.0, abs(rhs))


def test_least_squares_task_permutation(rng):
    d = random_dataset(rng, 3, 4)
    W = rng.standard_normal((3, 4))
    perm = [2, 0, 3, 1]
    dp = TaskDataset.from_arrays([d.tasks[j][0] for j in perm], [d.tasks[j][1] for j in perm])
    v, g = least_squares(W, d)
    vp, gp = least_squares(W[:, perm], dp)
    assert vp == pytest.approx(v, rel=1e-14)
    np.testing.assert_allclose(gp, g[:, perm], rtol=1e-14)

import numpy as np
import pytest

from l21mtl import TaskDataset

ACCEPTANCE_LINES = []


def random_dataset(rng, n, k, m_lo=1, m_hi=8, labels=False):
    As, ys = [], []
    for _ in range(k):
        m = int(rng.integers(m_lo, m_hi + 1))
        A = rng.standard_normal((m, n))
        y = rng.choice([-1.0, 1.0], size=m) if labels else rng.standard_normal(m)
        As.append(A)
        ys.append(y)
    return TaskDataset.from_arrays(As, ys)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import functools
import math

import numpy as np
import pytest

from cambrian import construct, family_descriptor

R2 = math.sqrt(2) / 2
C3_FIXTURE_ROOTS = [[1.0, 0.0, 0.0], [0.0, R2, -R2], [-R2, 0.0, R2]]

# label -> (family, rank, m)
GROUPS = {
    "A2": ("A", 2, None),
    "A3": ("A", 3, None),
    "B3": ("B", 3, None),
    "D4": ("D", 4, None),
    "H3": ("H3", 3, None),
    "I2(5)": ("I2", 2, 5),
    "I2(7)": ("I2", 2, 7),
}


@functools.lru_cache(maxsize=None)
def built(label):
    if label == "C3fixture":
        return construct(family_descriptor("B", 3, custom=C3_FIXTURE_ROOTS))
    if label == "A1":
        return construct(family_descriptor("A", 1))
    f, n, m = GROUPS[label]
    return construct(family_descriptor(f, n, m))


@pytest.fixture(params=list(GROUPS))
def group(request):
    return built(request.param)


@pytest.fixture
def c3():
    return built("C3fixture")


@pytest.fixture
def a2():
    return built("A2")


def close(a, b, tol=1e-9):
    return np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)).max() <= tol

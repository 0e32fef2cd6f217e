import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cambrian.errors import DegenerateCone, SingularMatrix
from cambrian.geomkernel import (
    Membership,
    in_simplicial_cone,
    invert,
    matrix_key,
    nonneg_combination,
    rank_tol,
)

C3 = np.array([[0.0, 0.0, -1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
R2 = np.sqrt(2) / 2


def test_rank_examples():
    I = np.eye(3)
    assert rank_tol(I - I) == 0
    tau = np.array([1.0, 2.0, 2.0]) / 3
    assert rank_tol(np.outer(tau, tau) * 2) == 1
    # exact oracle: I - c is nonsingular since det(I - c) != 0
    assert sp.Matrix(sp.eye(3) - sp.Matrix(C3.astype(int))).det() == 2
    assert rank_tol(I - C3) == 3


def test_invert_examples():
    assert np.allclose(invert(np.eye(3)), np.eye(3))
    assert np.allclose(invert(2 * np.eye(3)), 0.5 * np.eye(3))
    M = np.eye(3) - C3
    inv = invert(M)
    assert np.abs(M @ inv - np.eye(3)).max() < 1e-12
    exact = (sp.eye(3) - sp.Matrix(C3.astype(int))).inv()
    assert np.allclose(inv, np.array(exact, dtype=float))


def test_invert_singular():
    with pytest.raises(SingularMatrix):
        invert(np.diag([1.0, 1.0, 0.0]))


def test_nonneg_combination_examples():
    g1, g2 = np.array([1.0, 0.0, 0.0]), np.array([0.3, 1.0, 0.0])
    assert nonneg_combination(g1 + g2, [g1, g2])
    assert not nonneg_combination(-g1, [g1])
    a1, a2, a3 = np.array([1.0, 0, 0]), R2 * np.array([0, 1.0, -1]), R2 * np.array([-1.0, 0, 1])
    target = R2 * np.array([1.0, 1.0, 0.0])
    coef = np.linalg.solve(np.column_stack([a1, a2, a3]), target)
    assert coef.min() > 0
    assert nonneg_combination(target, [a1, a2, a3])


def test_cone_membership_examples():
    rays = np.array([[1.0, 0, 0], [1.0, 1, 0], [0.0, 1, 1]])
    assert in_simplicial_cone(rays.sum(axis=0), rays) is Membership.INTERIOR
    assert in_simplicial_cone(-rays.sum(axis=0), rays) is Membership.OUTSIDE
    assert in_simplicial_cone(rays[0], rays) is Membership.BOUNDARY


def test_degenerate_cone():
    with pytest.raises(DegenerateCone):
        in_simplicial_cone([1.0, 0, 0], [[1.0, 0, 0], [2.0, 0, 0], [0, 0, 1.0]])


def test_matrix_key_grid():
    A = np.eye(2)
    assert matrix_key(A) == matrix_key(A + 1e-9)
    assert matrix_key(A) != matrix_key(A + 1e-3)


def _orthogonal(seed, n=3):
    q, r = np.linalg.qr(np.random.default_rng(seed).standard_normal((n, n)))
    return q * np.sign(np.diag(r))


@given(st.integers(0, 10_000))
def test_dimension_count(seed):
    w = _orthogonal(seed)
    A = np.eye(3) - w
    _, sv, Vt = np.linalg.svd(A)
    fixed = Vt[np.sum(sv > 1e-8):]
    assert rank_tol(A) + rank_tol(fixed.T @ fixed) == 3


well_conditioned = arrays(np.float64, (3, 3), elements=st.floats(-0.5, 0.5)).map(lambda M: M + 3 * np.eye(3))


@given(well_conditioned)
def test_invert_involution(M):
    assert np.abs(invert(invert(M)) - M).max() <= 1e-7


@settings(max_examples=50)
@given(well_conditioned, arrays(np.float64, 3, elements=st.floats(-2, 2)))
def test_interior_implies_nonneg(rays, x):
    if in_simplicial_cone(x, rays) is Membership.INTERIOR:
        assert nonneg_combination(x, list(rays))

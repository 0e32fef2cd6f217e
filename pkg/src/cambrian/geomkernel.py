"""Tolerant real linear algebra shared by the rest of the package.

Vectors and matrices are plain ``numpy`` float64 arrays. Every comparison goes
through one of three absolute tolerances bundled in :class:`Tolerances`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import nnls

from .errors import DegenerateCone, SingularMatrix

TOL_EQ = 1e-9
TOL_RANK = 1e-8
TOL_CONE = 1e-7
KEY_GRID = 1e-6


@dataclass(frozen=True)
class Tolerances:
    eq: float = TOL_EQ
    rank: float = TOL_RANK
    cone: float = TOL_CONE


DEFAULT_TOL = Tolerances()


class Membership(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def as_vec(v) -> np.ndarray:
    return np.asarray(v, dtype=float).reshape(-1)


def rank_tol(M, tol: float = TOL_RANK) -> int:
    """Number of singular values of ``M`` above ``tol``."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0
    return int(np.sum(np.linalg.svd(M, compute_uv=False) > tol))


def invert(M, tol: float = TOL_RANK) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    sv = np.linalg.svd(M, compute_uv=False)
    if sv.size == 0 or sv.min() <= tol:
        raise SingularMatrix(f"smallest singular value {sv.min() if sv.size else 0.0:.3e} <= {tol:g}")
    return np.linalg.inv(M)


def is_orthogonal(M, tol: float = TOL_EQ) -> bool:
    M = np.asarray(M, dtype=float)
    return bool(np.abs(M @ M.T - np.eye(M.shape[0])).max() <= tol)


def nonneg_combination(v, gens: Sequence, tol: float = TOL_CONE) -> bool:
    """True iff ``v`` is a nonnegative combination of ``gens`` (solved by NNLS).

    With no generators only the zero vector qualifies.
    """
    v = as_vec(v)
    if len(gens) == 0:
        return bool(np.linalg.norm(v) < tol)
    A = np.column_stack([as_vec(g) for g in gens])
    coef, residual = nnls(A, v)
    return bool(residual < tol and coef.min() >= -tol)


def cone_coefficients(x, rays) -> np.ndarray:
    """Coefficients of ``x`` in the basis given by the rows of ``rays``."""
    R = np.asarray(rays, dtype=float)
    return np.linalg.solve(R.T, as_vec(x))


def classify_coefficients(coef, tol: float = TOL_CONE) -> Membership:
    coef = np.asarray(coef)
    if np.all(coef > tol):
        return Membership.INTERIOR
    if np.any(coef < -tol):
        return Membership.OUTSIDE
    return Membership.BOUNDARY


def in_simplicial_cone(x, rays, tol: Tolerances = DEFAULT_TOL) -> Membership:
    R = np.asarray(rays, dtype=float)
    n = R.shape[1]
    if R.shape[0] != n or rank_tol(R, tol.rank) != n:
        raise DegenerateCone("rays do not form a basis")
    return classify_coefficients(cone_coefficients(x, R), tol.cone)


def matrix_key(M, grid: float = KEY_GRID) -> bytes:
    """Canonical hashable key: entries rounded to a ``grid`` lattice."""
    r = np.rint(np.asarray(M, dtype=float) / grid).astype(np.int64)
    return r.tobytes()


def unit(v) -> np.ndarray:
    v = as_vec(v)
    return v / np.linalg.norm(v)

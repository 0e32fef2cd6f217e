"""Reflection length, absolute order and the noncrossing partitions below c.

Roots attached to an :class:`NcpElement` (parabolic roots, simple systems) are
recorded as rho positions in ``1 .. nh/2``, i.e. by where the positive root sits
in the rho order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import NotInNCP, SimpleSystemSizeMismatch
from .geomkernel import DEFAULT_TOL, Tolerances, matrix_key, nonneg_combination, rank_tol
from .rho import RhoOrder
from .rootsystem import GroupElement, RootSystem, enumerate_group


def refl_length(w: GroupElement | np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    M = w.matrix if isinstance(w, GroupElement) else np.asarray(w, dtype=float)
    return rank_tol(np.eye(M.shape[0]) - M, tol.rank)


def abs_leq(u, w, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``u <= w`` in absolute order: l(u) + l(u^-1 w) == l(w)."""
    U = u.matrix if isinstance(u, GroupElement) else np.asarray(u, dtype=float)
    Wm = w.matrix if isinstance(w, GroupElement) else np.asarray(w, dtype=float)
    return refl_length(U, tol) + refl_length(U.T @ Wm, tol) == refl_length(Wm, tol)


@dataclass(eq=False)
class NcpElement:
    index: int
    element: GroupElement
    moved_space_basis: np.ndarray  # rows, orthonormal
    parabolic_roots: tuple  # rho positions, increasing
    simple_system: tuple  # rho positions, increasing
    kreweras_id: int = -1

    @property
    def length(self) -> int:
        return self.element.length

    @property
    def matrix(self) -> np.ndarray:
        return self.element.matrix

    @property
    def key(self) -> bytes:
        return self.element.key


def moved_space_basis(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (rows) of the image of ``I - M``."""
    A = np.eye(M.shape[0]) - M
    U, sv, _ = np.linalg.svd(A)
    k = int(np.sum(sv > tol.rank))
    return U[:, :k].T.copy()


def parabolic_positive_roots(rho: RhoOrder, w) -> tuple:
    """Positions of the positive roots tau with R(tau) <= w, increasing."""
    rs = rho.rs
    M = w.matrix if isinstance(w, (GroupElement, NcpElement)) else np.asarray(w)
    lw = refl_length(M, rs.tol)
    out = []
    for p in range(1, rho.num_positive + 1):
        R = rho.reflection(p)
        if 1 + refl_length(R @ M, rs.tol) == lw:
            out.append(p)
    return tuple(out)


def simple_system(rho: RhoOrder, roots: Sequence[int], length: Optional[int] = None) -> tuple:
    """Indecomposable members of ``roots`` (rho positions), in increasing rho order."""
    tol = rho.rs.tol
    vecs = {p: rho[p] for p in roots}
    out = []
    for p in roots:
        others = [vecs[q] for q in roots if q != p]
        if not nonneg_combination(vecs[p], others, tol.cone):
            out.append(p)
    if length is not None and len(out) != length:
        raise SimpleSystemSizeMismatch(
            f"simple system has {len(out)} roots but the element has length {length}"
        )
    return tuple(out)


class NcpLattice:
    """The elements of W below the Coxeter element, in canonical order.

    Order is by reflection length, then by rounded-matrix key, so the identity
    is element 0 and ``c`` is the last element.
    """

    def __init__(self, rho: RhoOrder, elements: list[NcpElement]):
        self.rho = rho
        self.rs = rho.rs
        self.elements = elements
        self._by_key = {e.key: e for e in elements}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[NcpElement]:
        return iter(self.elements)

    def __getitem__(self, i: int) -> NcpElement:
        return self.elements[i]

    @property
    def identity(self) -> NcpElement:
        return self.elements[0]

    @property
    def coxeter(self) -> NcpElement:
        return self.elements[-1]

    def find(self, M) -> NcpElement:
        M = M.matrix if isinstance(M, (GroupElement, NcpElement)) else np.asarray(M)
        try:
            return self._by_key[matrix_key(M)]
        except KeyError:
            raise NotInNCP("element is not below c in absolute order") from None

    def contains(self, M) -> bool:
        M = M.matrix if isinstance(M, (GroupElement, NcpElement)) else np.asarray(M)
        return matrix_key(M) in self._by_key

    def kreweras(self, w: NcpElement) -> NcpElement:
        return self.elements[w.kreweras_id]


def kreweras(lattice: NcpLattice, w: NcpElement) -> NcpElement:
    return lattice.kreweras(w)


def make_ncp_element(rho: RhoOrder, M, index: int = -1) -> NcpElement:
    rs = rho.rs
    g = rs.element(M)
    par = parabolic_positive_roots(rho, g)
    return NcpElement(
        index=index,
        element=g,
        moved_space_basis=moved_space_basis(g.matrix, rs.tol),
        parabolic_roots=par,
        simple_system=simple_system(rho, par, g.length),
    )


def enumerate_ncp(rho: RhoOrder, group: Optional[list[GroupElement]] = None) -> NcpLattice:
    rs = rho.rs
    if group is None:
        group = enumerate_group(rs)
    n = rs.n
    members = [g for g in group if g.length + refl_length(g.matrix.T @ rs.c, rs.tol) == n]
    members.sort(key=lambda g: (g.length, g.key))
    elements = [make_ncp_element(rho, g.matrix, i) for i, g in enumerate(members)]
    lattice = NcpLattice(rho, elements)
    for e in elements:
        e.kreweras_id = lattice.find(rs.c @ e.matrix.T).index
    return lattice

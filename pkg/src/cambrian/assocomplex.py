"""The complexes EX(c) and AX(c), vertex types, and the facet/NCP bijection.

A simplex is an increasing tuple of rho positions ``t_1 < ... < t_k`` with
``l(R(t_1)...R(t_k) c) == n - k``. AX(c) lives on positions ``1..nh/2+n``, EX(c)
on ``-n+s+1..nh/2+s``, and ``c_plus`` carries one onto the other.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    FacetSizeMismatch,
    IndexOutOfRange,
    MismatchWithDirectAX,
    NotInNCP,
    RoundTripFailure,
)
from .ncplattice import NcpElement, NcpLattice, refl_length
from .rho import RhoOrder, rho_sequence  # noqa: F401  (re-exported)


class Complex(enum.Enum):
    EX = "EX"
    AX = "AX"


@dataclass(eq=False)
class Facet:
    vertices: tuple  # rho positions, increasing
    forward_flags: tuple = ()
    phi_id: int = -1

    @property
    def forward(self) -> tuple:
        return tuple(p for p, f in zip(self.vertices, self.forward_flags) if f)

    @property
    def backward(self) -> tuple:
        return tuple(p for p, f in zip(self.vertices, self.forward_flags) if not f)


def vertex_range(rho: RhoOrder, complex: Complex = Complex.AX) -> range:
    return rho.ax_range if complex is Complex.AX else rho.ex_range


def _product(rho: RhoOrder, positions: Iterable[int]) -> np.ndarray:
    M = np.eye(rho.rs.n)
    for p in positions:
        M = M @ rho.reflection(p)
    return M


def is_simplex(rho: RhoOrder, vertices: Sequence[int], complex: Complex = Complex.AX) -> bool:
    rng = vertex_range(rho, complex)
    for p in vertices:
        if p not in rng:
            raise IndexOutOfRange(f"position {p} outside the {complex.value} vertex range")
    if any(a >= b for a, b in zip(vertices, vertices[1:])):
        return False
    rs = rho.rs
    k = len(vertices)
    return refl_length(_product(rho, vertices) @ rs.c, rs.tol) == rs.n - k


def enumerate_facets(rho: RhoOrder, complex: Complex = Complex.AX) -> list[tuple]:
    """All facets, lexicographic order, by DFS over increasing tuples.

    A prefix failing the length condition is not a simplex, so no extension of
    it can be one either.
    """
    rs = rho.rs
    n, c, tol = rs.n, rs.c, rs.tol
    verts = list(vertex_range(rho, complex))
    out: list[tuple] = []

    def dfs(start: int, chosen: list[int], prefix: np.ndarray) -> None:
        k = len(chosen)
        if k == n:
            out.append(tuple(chosen))
            return
        for j in range(start, len(verts) - (n - k - 1)):
            p = verts[j]
            P = prefix @ rho.reflection(p)
            if refl_length(P @ c, tol) == n - k - 1:
                chosen.append(p)
                dfs(j + 1, chosen, P)
                chosen.pop()

    dfs(0, [], np.eye(n))
    return out


def apply_cplus_complex(rho: RhoOrder, ex_facets: Iterable[Sequence[int]],
                        ax_facets: Optional[Iterable[Sequence[int]]] = None) -> set[tuple]:
    """Image of EX facets under ``c_plus``, as sorted AX position tuples.

    When ``ax_facets`` is given the image must coincide with it as a set.
    """
    cp = rho.rs.c_plus
    image = set()
    for facet in ex_facets:
        image.add(tuple(sorted(rho.position(cp @ rho[p], "AX") for p in facet)))
    if ax_facets is not None and image != set(map(tuple, ax_facets)):
        raise MismatchWithDirectAX("c_plus image of EX(c) differs from the enumerated AX(c)")
    return image


def _sign_filter(lattice: NcpLattice, w: NcpElement, M: np.ndarray) -> tuple:
    rs, rho = lattice.rs, lattice.rho
    out = tuple(p for p in w.parabolic_roots if not rs.is_positive(M @ rho[p]))
    if len(out) != w.length:
        raise FacetSizeMismatch(f"facet of X(w) has {len(out)} vertices, expected {w.length}")
    return out


def x_first_facet(lattice: NcpLattice, w: NcpElement) -> tuple:
    """Positive roots tau in M(w) with w^-1(tau) negative."""
    return _sign_filter(lattice, w, w.matrix.T)


def x_last_facet(lattice: NcpLattice, w: NcpElement) -> tuple:
    """Positive roots tau in M(w) with w(tau) negative."""
    return _sign_filter(lattice, w, w.matrix)


def x_facets_bruteforce(lattice: NcpLattice, w: NcpElement) -> list[tuple]:
    """Facets of X(w): increasing tuples of parabolic roots of size l(w) that are
    EX(c) simplices and whose product R(t_k)...R(t_1) equals w. Lexicographic."""
    rho, rs = lattice.rho, lattice.rs
    out = []
    for t in combinations(w.parabolic_roots, w.length):
        if not is_simplex(rho, t, Complex.EX):
            continue
        if np.abs(_product(rho, reversed(t)) - w.matrix).max() <= rs.tol.eq * 100:
            out.append(t)
    return out


def classify_vertices(rho: RhoOrder, vertices: Sequence[int]) -> tuple:
    """Forward flags: t_i is forward iff v_i^-1(t_i) is negative, v_i = R(t_i)...R(t_1)."""
    rs = rho.rs
    v = np.eye(rs.n)
    flags = []
    for p in vertices:
        v = rho.reflection(p) @ v
        flags.append(not rs.is_positive(v.T @ rho[p]))
    return tuple(flags)


def phi(lattice: NcpLattice, facet: Facet | Sequence[int]) -> NcpElement:
    rho = lattice.rho
    if not isinstance(facet, Facet):
        facet = Facet(tuple(facet), classify_vertices(rho, facet))
    elif not facet.forward_flags:
        facet.forward_flags = classify_vertices(rho, facet.vertices)
    M = _product(rho, reversed(facet.forward))
    try:
        return lattice.find(M)
    except NotInNCP:
        raise NotInNCP(f"phi{facet.vertices} is not below c") from None


def phi_inverse(lattice: NcpLattice, v: NcpElement) -> Facet:
    """Facet made of the first facet of X(v) and c applied to the last facet of X(v^-1 c)."""
    rho, rs = lattice.rho, lattice.rs
    first = x_first_facet(lattice, v)
    complement = lattice.find(v.matrix.T @ rs.c)
    shifted = [rho.position(rs.c @ rho[p], "AX") for p in x_last_facet(lattice, complement)]
    vertices = tuple(sorted(first + tuple(shifted)))
    if len(vertices) != rs.n or not is_simplex(rho, vertices, Complex.AX):
        raise RoundTripFailure(f"phi_inverse({v.index}) = {vertices} is not a facet")
    facet = Facet(vertices, classify_vertices(rho, vertices))
    image = phi(lattice, facet)
    if image.index != v.index:
        raise RoundTripFailure(f"phi(phi_inverse({v.index})) = {image.index}")
    facet.phi_id = v.index
    return facet


def build_facets(lattice: NcpLattice, complex: Complex = Complex.AX) -> list[Facet]:
    """AX facets with vertex types and their images under phi."""
    rho = lattice.rho
    facets = []
    for t in enumerate_facets(rho, complex):
        f = Facet(t, classify_vertices(rho, t))
        f.phi_id = phi(lattice, f).index
        facets.append(f)
    return facets

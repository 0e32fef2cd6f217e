"""The cyclic root sequence rho_i = R_1 R_2 ... R_{i-1}(alpha_i).

Indices are taken modulo ``n`` for the reflections and simple roots; the
sequence has period ``n*h`` and lists every root exactly once per period.
Throughout the package a *position* is an integer ``i`` naming ``rho_i``.
The associahedron window uses positions ``1 .. nh/2 + n``; the extended window
``-n+s+1 .. nh/2 + s`` uses ``rho_{-k} = rho_{nh-k}``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, RhoInconsistent
from .geomkernel import matrix_key
from .rootsystem import RootSystem, reflection_matrix, root_index


@dataclass(frozen=True, eq=False)
class RhoOrder:
    rs: RootSystem
    vectors: np.ndarray  # row p-1 holds rho_p, p = 1..nh
    reflections: np.ndarray  # matching reflection matrices
    root_ids: tuple  # signed root-system index of rho_p
    _position: dict

    @property
    def period(self) -> int:
        return self.vectors.shape[0]

    @property
    def num_positive(self) -> int:
        return self.rs.num_positive

    @property
    def ax_range(self) -> range:
        return range(1, self.num_positive + self.rs.n + 1)

    @property
    def ex_range(self) -> range:
        n, s = self.rs.n, self.rs.s
        return range(-n + s + 1, self.num_positive + s + 1)

    def _wrap(self, p: int) -> int:
        return (p - 1) % self.period

    def __getitem__(self, p: int) -> np.ndarray:
        return self.vectors[self._wrap(p)]

    def reflection(self, p: int) -> np.ndarray:
        return self.reflections[self._wrap(p)]

    def root_id(self, p: int) -> int:
        return self.root_ids[self._wrap(p)]

    def position(self, v, window: str = "AX") -> int:
        """Position of the root ``v`` inside ``window`` ("AX", "EX" or "period")."""
        key = matrix_key(v)
        if key not in self._position:
            # fall back to a tolerant lookup through the root system
            idx = root_index(self.rs, v)
            key = matrix_key(self.rs.root(idx))
            if key not in self._position:
                raise IndexOutOfRange(f"root {v} missing from rho sequence")
        p = self._position[key]
        if window == "period":
            return p
        rng = self.ax_range if window == "AX" else self.ex_range
        for q in (p, p - self.period):
            if q in rng:
                return q
        raise IndexOutOfRange(f"rho_{p} is outside the {window} window")

    def positive_position(self, v) -> int:
        p = self.position(v, "period")
        if p > self.num_positive:
            raise IndexOutOfRange("root is not positive")
        return p


def rho_sequence(rs: RootSystem) -> RhoOrder:
    n, s = rs.n, rs.s
    period = n * rs.h
    refl = [reflection_matrix(a) for a in rs.simple_roots]
    vecs = np.empty((period, n))
    prefix = np.eye(n)
    for p in range(1, period + 1):
        j = (p - 1) % n
        vecs[p - 1] = prefix @ rs.simple_roots[j]
        prefix = prefix @ refl[j]
    ids = tuple(root_index(rs, v) for v in vecs)
    position = {matrix_key(rs.root(i)): p for p, i in enumerate(ids, start=1)}
    rho = RhoOrder(
        rs=rs,
        vectors=vecs,
        reflections=np.array([reflection_matrix(v) for v in vecs]),
        root_ids=ids,
        _position=position,
    )
    _validate(rho)
    return rho


def _validate(rho: RhoOrder) -> None:
    rs = rho.rs
    n, s, N, eq = rs.n, rs.s, rs.num_positive, rs.tol.eq
    ids = rho.root_ids
    if len(set(ids)) != rho.period:
        raise RhoInconsistent("rho sequence repeats a root within one period")
    if sorted(ids[:N]) != list(range(1, N + 1)):
        raise RhoInconsistent("rho_1..rho_{nh/2} are not exactly the positive roots")
    if any(i > 0 for i in ids[N:N + n]):
        raise RhoInconsistent("rho_{nh/2+1}..rho_{nh/2+n} are not all negative")
    for p in range(1, N + 1):
        if np.abs(rs.c @ rho[p] - rho[p + n]).max() > eq:
            raise RhoInconsistent(f"c rho_{p} != rho_{p + n}")
    for i in range(1, n + 1):
        a = rs.simple_roots[i - 1]
        expected = a if i <= s else -(rs.c @ a)
        if np.abs(rho[i] - expected).max() > eq:
            raise RhoInconsistent(f"rho_{i} does not match the bipartite formula")

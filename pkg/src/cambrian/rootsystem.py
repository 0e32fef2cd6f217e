"""Unit-normalized root systems with a bipartite Coxeter element.

Simple roots come from a Cholesky factor of the Gram matrix
``G_ij = -cos(pi / m_ij)`` (or from user coordinates), ordered so the two
colour classes of the Coxeter diagram are contiguous: ``S1 = alpha_1..alpha_s``
first, then ``S2``. Within a class, vectors are pairwise orthogonal.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from .errors import (
    BadCustomRoots,
    GuardExceeded,
    InvalidDescriptor,
    InvariantFailure,
    NotARoot,
    NotUnit,
)
from .geomkernel import DEFAULT_TOL, Tolerances, is_orthogonal, matrix_key, rank_tol

DEFAULT_GUARD = 14400
FAMILIES = ("A", "B", "D", "I2", "H3", "Custom")


@dataclass(frozen=True)
class GroupDescriptor:
    family: str
    rank: int
    m: Optional[int] = None
    custom_simple_roots: Optional[tuple] = None
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.custom_simple_roots is not None:
            roots = tuple(tuple(float(x) for x in r) for r in self.custom_simple_roots)
            object.__setattr__(self, "custom_simple_roots", roots)
        self.validate()

    def validate(self) -> None:
        f, n = self.family, self.rank
        if f not in FAMILIES:
            raise InvalidDescriptor(f"unknown family {f!r}")
        if not isinstance(n, int) or n < 1:
            raise InvalidDescriptor(f"rank must be a positive integer, got {n!r}")
        minimum = {"A": 1, "B": 2, "D": 4}
        if f in minimum and n < minimum[f]:
            raise InvalidDescriptor(f"family {f} needs rank >= {minimum[f]}, got {n}")
        if f == "I2" and (n != 2 or self.m is None or self.m < 3):
            raise InvalidDescriptor("I2 needs rank 2 and m >= 3")
        if f == "H3" and n != 3:
            raise InvalidDescriptor("H3 has rank 3")
        if f == "Custom" and self.custom_simple_roots is None:
            raise InvalidDescriptor("family Custom requires custom simple roots")
        if self.custom_simple_roots is not None:
            roots = self.custom_simple_roots
            if len(roots) != n or any(len(r) != n for r in roots):
                raise InvalidDescriptor(f"custom simple roots must be {n} vectors of length {n}")
        order = self.order()
        if order is not None and order > self.guard:
            raise GuardExceeded(f"|W| = {order} exceeds guard {self.guard}")

    @property
    def label(self) -> str:
        if self.family == "I2":
            return f"I2({self.m})"
        if self.family == "H3":
            return "H3"
        return f"{self.family}{self.rank}"

    def order(self) -> Optional[int]:
        """Group order from the classification, or None when unknown."""
        n = self.rank
        if self.family == "A":
            return math.factorial(n + 1)
        if self.family == "B":
            return 2**n * math.factorial(n)
        if self.family == "D":
            return 2 ** (n - 1) * math.factorial(n)
        if self.family == "I2":
            return 2 * self.m
        if self.family == "H3":
            return 120
        return None

    def coxeter_matrix(self) -> Optional[np.ndarray]:
        """Coxeter matrix in the standard (Bourbaki) node numbering."""
        n = self.rank
        if self.family == "Custom":
            return None
        M = np.full((n, n), 2, dtype=int)
        np.fill_diagonal(M, 1)

        def edge(i, j, m):
            M[i, j] = M[j, i] = m

        if self.family in ("A", "B"):
            for i in range(n - 1):
                edge(i, i + 1, 3)
            if self.family == "B":
                edge(n - 2, n - 1, 4)
        elif self.family == "D":
            for i in range(n - 2):
                edge(i, i + 1, 3)
            edge(n - 3, n - 1, 3)
        elif self.family == "I2":
            edge(0, 1, self.m)
        elif self.family == "H3":
            edge(0, 1, 5)
            edge(1, 2, 3)
        return M


@dataclass(frozen=True, eq=False)
class GroupElement:
    matrix: np.ndarray
    length: int

    @classmethod
    def from_matrix(cls, M, tol: Tolerances = DEFAULT_TOL) -> "GroupElement":
        M = np.asarray(M, dtype=float)
        return cls(M, rank_tol(np.eye(M.shape[0]) - M, tol.rank))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.matrix.T.copy(), self.length)

    def __call__(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)

    @property
    def key(self) -> bytes:
        return matrix_key(self.matrix)


def reflection_matrix(tau) -> np.ndarray:
    tau = np.asarray(tau, dtype=float)
    return np.eye(tau.size) - 2.0 * np.outer(tau, tau)


def reflection(tau, tol: Tolerances = DEFAULT_TOL) -> GroupElement:
    tau = np.asarray(tau, dtype=float)
    if abs(np.linalg.norm(tau) - 1.0) > tol.eq:
        raise NotUnit(f"|tau| = {np.linalg.norm(tau)!r}")
    return GroupElement(reflection_matrix(tau), 1)


def coxeter_matrix_from_gram(G, tol: float = 1e-6) -> np.ndarray:
    n = G.shape[0]
    M = np.ones((n, n), dtype=int)
    for i in range(n):
        for j in range(i + 1, n):
            g = float(np.clip(-G[i, j], -1.0, 1.0))
            if abs(g) <= tol:
                m = 2
            else:
                if g <= 0:
                    raise BadCustomRoots(f"simple roots {i + 1},{j + 1} form an acute angle")
                m = int(round(math.pi / math.acos(g)))
                if m < 3 or abs(-math.cos(math.pi / m) - G[i, j]) > tol:
                    raise BadCustomRoots(
                        f"angle between simple roots {i + 1},{j + 1} is not pi - pi/m"
                    )
            M[i, j] = M[j, i] = m
    return M


def gram_from_coxeter(M) -> np.ndarray:
    return -np.cos(np.pi / np.asarray(M, dtype=float))


def _diagram(M) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(M.shape[0]))
    for i in range(M.shape[0]):
        for j in range(i + 1, M.shape[0]):
            if M[i, j] > 2:
                g.add_edge(i, j, m=int(M[i, j]))
    return g


def bipartite_order(M) -> tuple[list[int], int]:
    """Greedy 2-colouring of the Coxeter diagram from node 0.

    Returns the permutation putting the colour class of node 0 first (ascending
    within each class) and the size ``s`` of that class. Disconnected diagrams
    restart the colouring at the smallest uncoloured node with colour 0.
    """
    g = _diagram(M)
    colour: dict[int, int] = {}
    for start in sorted(g.nodes):
        if start in colour:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in sorted(g.neighbors(u)):
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    raise InvalidDescriptor("Coxeter diagram is not bipartite")
    first = [i for i in sorted(colour) if colour[i] == 0]
    second = [i for i in sorted(colour) if colour[i] == 1]
    return first + second, len(first)


@dataclass(frozen=True, eq=False)
class RootSystem:
    descriptor: GroupDescriptor
    n: int
    s: int
    simple_roots: np.ndarray  # rows alpha_1..alpha_n
    positive_roots: np.ndarray  # rows; root index +k <-> positive_roots[k-1]
    h: int
    c: np.ndarray
    c_plus: np.ndarray
    c_minus: np.ndarray
    coxeter_matrix: np.ndarray
    tol: Tolerances = DEFAULT_TOL
    _dual: np.ndarray = field(default=None, repr=False)

    @property
    def all_roots(self) -> np.ndarray:
        return np.vstack([self.positive_roots, -self.positive_roots])

    @property
    def num_positive(self) -> int:
        return self.positive_roots.shape[0]

    def root(self, index: int) -> np.ndarray:
        if index == 0 or abs(index) > self.num_positive:
            raise NotARoot(f"no root with index {index}")
        v = self.positive_roots[abs(index) - 1]
        return v if index > 0 else -v

    def root_index(self, v) -> int:
        return root_index(self, v)

    @property
    def interior_point(self) -> np.ndarray:
        """The vector with inner product 1 against every simple root."""
        return self._dual.sum(axis=1)

    def simple_coefficients(self, v) -> np.ndarray:
        return np.linalg.solve(self.simple_roots.T, np.asarray(v, dtype=float))

    def is_positive(self, v) -> bool:
        return bool(np.dot(self.interior_point, v) > 0)

    def element(self, M) -> GroupElement:
        return GroupElement.from_matrix(M, self.tol)

    def simple_reflection(self, i: int) -> np.ndarray:
        """Matrix of R_i, 1-based."""
        return reflection_matrix(self.simple_roots[i - 1])


def _custom_roots(desc: GroupDescriptor, tol: Tolerances) -> tuple[np.ndarray, np.ndarray]:
    A = np.asarray(desc.custom_simple_roots, dtype=float)
    norms = np.linalg.norm(A, axis=1)
    if np.abs(norms - 1.0).max() > tol.eq:
        raise BadCustomRoots(f"custom simple roots are not unit length (max dev {np.abs(norms - 1).max():.2e})")
    G = A @ A.T
    M = coxeter_matrix_from_gram(G)
    if np.abs(G - gram_from_coxeter(M)).max() > 1e-6:
        raise BadCustomRoots("custom Gram matrix does not match any Coxeter matrix")
    expected = desc.coxeter_matrix()
    if expected is not None:
        same = nx.is_isomorphic(
            _diagram(M), _diagram(expected), edge_match=lambda a, b: a["m"] == b["m"]
        )
        if not same:
            raise BadCustomRoots(f"custom roots do not realize type {desc.label}")
    if rank_tol(A, tol.rank) != desc.rank:
        raise BadCustomRoots("custom simple roots are linearly dependent")
    return A, M


def _close_roots(simple: np.ndarray, interior: np.ndarray, limit: int) -> np.ndarray:
    """Positive roots in discovery order, closing {+-alpha_i} under simple reflections."""
    refl = [reflection_matrix(a) for a in simple]
    seen: dict[bytes, int] = {}
    found: list[np.ndarray] = []
    queue = deque()
    for a in list(simple) + list(-simple):
        k = matrix_key(a)
        if k not in seen:
            seen[k] = len(found)
            found.append(a)
            queue.append(a)
    while queue:
        v = queue.popleft()
        for R in refl:
            u = R @ v
            k = matrix_key(u)
            if k not in seen:
                seen[k] = len(found)
                found.append(u)
                queue.append(u)
                if len(found) > limit:
                    raise GuardExceeded("root closure does not terminate; group is infinite or too large")
    pos = [v for v in found if np.dot(interior, v) > 0]
    return np.array(pos)


def build_root_system(desc: GroupDescriptor, tol: Tolerances = DEFAULT_TOL) -> RootSystem:
    n = desc.rank
    if desc.custom_simple_roots is not None:
        raw, M = _custom_roots(desc, tol)
        perm, s = bipartite_order(M)
        simple = raw[perm]
        M = M[np.ix_(perm, perm)]
    else:
        M0 = desc.coxeter_matrix()
        perm, s = bipartite_order(M0)
        M = M0[np.ix_(perm, perm)]
        simple = np.linalg.cholesky(gram_from_coxeter(M))
    # columns of ``dual`` form the basis dual to the simple roots
    dual = np.linalg.inv(simple)
    interior = dual.sum(axis=1)
    positive = _close_roots(simple, interior, limit=2 * desc.guard)

    refl = [reflection_matrix(a) for a in simple]
    c_plus = np.eye(n)
    for R in refl[:s]:
        c_plus = c_plus @ R
    c_minus = np.eye(n)
    for R in refl[s:]:
        c_minus = c_minus @ R
    c = np.eye(n)
    for R in refl:
        c = c @ R

    h = _order(c, tol, limit=desc.guard)
    return RootSystem(
        descriptor=desc,
        n=n,
        s=s,
        simple_roots=simple,
        positive_roots=positive,
        h=h,
        c=c,
        c_plus=c_plus,
        c_minus=c_minus,
        coxeter_matrix=M,
        tol=tol,
        _dual=dual,
    )


def _order(M, tol: Tolerances, limit: int) -> int:
    n = M.shape[0]
    P = M.copy()
    for k in range(1, limit + 1):
        if np.abs(P - np.eye(n)).max() <= tol.eq * 10 * k:
            return k
        P = P @ M
    raise GuardExceeded("Coxeter element order exceeds guard")


def coxeter_element(rs: RootSystem) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(c, c_plus, c_minus)`` after checking ``c = c_plus c_minus`` and involutivity."""
    n, eq = rs.n, rs.tol.eq
    I = np.eye(n)
    ok = (
        np.abs(rs.c - rs.c_plus @ rs.c_minus).max() <= eq
        and np.abs(rs.c_plus @ rs.c_plus - I).max() <= eq
        and np.abs(rs.c_minus @ rs.c_minus - I).max() <= eq
        and is_orthogonal(rs.c, eq)
    )
    if not ok:
        raise InvariantFailure("Coxeter element does not factor into the two involutions")
    return rs.c, rs.c_plus, rs.c_minus


def enumerate_group(rs: RootSystem) -> list[GroupElement]:
    """All of W by breadth-first closure over simple reflections.

    Order: BFS layer (Coxeter length), then rounded-matrix key. The identity is
    element 0.
    """
    n = rs.n
    guard = rs.descriptor.guard
    gens = [rs.simple_reflection(i) for i in range(1, n + 1)]
    identity = np.eye(n)
    seen = {matrix_key(identity)}
    layers = [[identity]]
    total = 1
    while layers[-1]:
        nxt: dict[bytes, np.ndarray] = {}
        for w in layers[-1]:
            for R in gens:
                u = w @ R
                k = matrix_key(u)
                if k not in seen and k not in nxt:
                    nxt[k] = u
        total += len(nxt)
        if total > guard:
            raise GuardExceeded(f"|W| exceeds guard {guard}")
        seen.update(nxt)
        layers.append([nxt[k] for k in sorted(nxt)])
    return [rs.element(M) for layer in layers for M in layer]


def root_index(rs: RootSystem, v) -> int:
    """Signed 1-based index of the root equal to ``v`` (negative for -positive)."""
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > rs.tol.eq:
        raise NotARoot("vector is not unit length")
    P = rs.positive_roots
    dplus = np.abs(P - v).max(axis=1)
    dminus = np.abs(P + v).max(axis=1)
    i, j = int(dplus.argmin()), int(dminus.argmin())
    if dplus[i] <= rs.tol.eq:
        return i + 1
    if dminus[j] <= rs.tol.eq:
        return -(j + 1)
    raise NotARoot(f"{v} is not a root")


def load_simple_roots(path) -> list[list[float]]:
    import json

    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise BadCustomRoots("simple-root file must be a JSON array of arrays")
    try:
        return [[float(x) for x in r] for r in data]
    except (TypeError, ValueError) as exc:
        raise BadCustomRoots(f"non-numeric entry in simple-root file: {exc}") from None


def family_descriptor(family: str, rank: Optional[int] = None, m: Optional[int] = None,
                      custom: Optional[Sequence] = None, guard: int = DEFAULT_GUARD) -> GroupDescriptor:
    """Convenience constructor filling in the implied rank for I2 and H3."""
    if family == "I2":
        rank = 2 if rank is None else rank
    elif family == "H3":
        rank = 3 if rank is None else rank
    elif rank is None and custom is not None:
        rank = len(custom)
    if rank is None:
        raise InvalidDescriptor(f"family {family} needs a rank")
    return GroupDescriptor(family, rank, m, tuple(map(tuple, custom)) if custom is not None else None, guard)

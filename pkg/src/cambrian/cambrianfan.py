"""The operator mu = 2(I - c)^-1, the cones F(w), and checks on the resulting fan.

``F(w) = {x : x.delta <= 0 for delta in Pi_w, x.theta >= 0 for theta in Pi_{cw^-1}}``.
Each cone is kept both as n signed normals and as n unit rays; membership
coefficients are taken with respect to the unit rays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .assocomplex import Facet, x_first_facet, x_last_facet
from .errors import ChamberMultiplyAssigned, ChamberUnassigned, DegenerateCone, InvariantFailure
from .geomkernel import classify_coefficients, invert, rank_tol, Membership, unit
from .ncplattice import NcpElement, NcpLattice
from .rho import RhoOrder
from .rootsystem import GroupElement, RootSystem, reflection_matrix


@dataclass(eq=False)
class MuOperator:
    matrix: np.ndarray
    mu_rho: np.ndarray  # row p-1 holds mu(rho_p), p = 1..nh/2+n

    def __call__(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)

    def of_position(self, p: int) -> np.ndarray:
        return self.mu_rho[p - 1]


def build_mu(rho: RhoOrder) -> MuOperator:
    rs = rho.rs
    n, eq = rs.n, rs.tol.eq
    M = 2.0 * invert(np.eye(n) - rs.c, rs.tol.rank)
    images = np.array([M @ rho[p] for p in rho.ax_range])
    mu = MuOperator(M, images)

    dual = images[:n] @ rs.simple_roots.T
    if np.abs(dual - np.eye(n)).max() > eq:
        raise InvariantFailure("mu(rho_1..rho_n) is not dual to the simple roots")
    for p in range(1, len(images) - n + 1):
        if np.abs(rs.c @ images[p - 1] - images[p + n - 1]).max() > eq:
            raise InvariantFailure(f"c mu(rho_{p}) != mu(rho_{p + n})")
    for tau in rs.all_roots:
        m = M @ tau
        if abs(m @ tau - 1.0) > eq or np.abs(reflection_matrix(tau) @ rs.c @ m - m).max() > eq:
            raise InvariantFailure("mu(tau) is not the normalized fixed vector of R(tau)c")
    return mu


@dataclass(eq=False)
class Cone:
    ncp_id: int
    neg_normals: tuple  # rho positions of Pi_w
    pos_normals: tuple  # rho positions of Pi_{cw^-1}
    normals: np.ndarray  # inward normals (rows): -delta..., +theta...
    rays: np.ndarray  # unit rays (rows), ray i opposite wall i
    chamber_ids: list = field(default_factory=list)

    def coefficients(self, X) -> np.ndarray:
        """Coefficients of the columns of ``X`` in the unit-ray basis."""
        return self._ray_inverse @ X

    @property
    def _ray_inverse(self) -> np.ndarray:
        return np.linalg.inv(self.rays.T)

    def membership(self, x, tol: float) -> Membership:
        return classify_coefficients(self.coefficients(np.asarray(x, dtype=float)), tol)


def cone_F(lattice: NcpLattice, w: NcpElement) -> Cone:
    rho, rs = lattice.rho, lattice.rs
    theta = lattice.kreweras(w).simple_system
    delta = w.simple_system
    N = np.array([-rho[p] for p in delta] + [rho[p] for p in theta]).reshape(-1, rs.n)
    if N.shape[0] != rs.n or rank_tol(N, rs.tol.rank) != rs.n:
        raise DegenerateCone(f"F({w.index}) has normals of rank < n")
    # ray j satisfies N_i . r_j = 0 for i != j and N_j . r_j > 0
    rays = np.linalg.inv(N).T
    rays /= np.linalg.norm(rays, axis=1, keepdims=True)
    return Cone(w.index, delta, theta, N, rays)


def rays_F(lattice: NcpLattice, mu: MuOperator, w: NcpElement) -> np.ndarray:
    """Unit rays mu(eps) over the first facet of X(cw^-1) and mu(c eta) over the last facet of X(w)."""
    rs = lattice.rs
    rho = lattice.rho
    eps = x_first_facet(lattice, lattice.kreweras(w))
    eta = x_last_facet(lattice, w)
    vecs = [mu(rho[p]) for p in eps] + [mu(rs.c @ rho[p]) for p in eta]
    return np.array([unit(v) for v in vecs]).reshape(-1, rs.n)


def factorization_check(lattice: NcpLattice, w: NcpElement) -> list[str]:
    """Check the prefix/suffix identities along c = R(theta..) R(delta..).

    With tau the concatenation theta_1..theta_{n-k}, delta_1..delta_k and
    a_i = R(t_1)..R(t_i), b_i = R(t_i)..R(t_n):
    eps_i = -a_i(t_i), eta_i = -b_i^-1(t_i) and c(eta_i) = -eps_i.
    Returns a list of violations (empty when everything holds).
    """
    rho, rs = lattice.rho, lattice.rs
    eq = rs.tol.eq * 100
    taus = [rho[p] for p in lattice.kreweras(w).simple_system] + [rho[p] for p in w.simple_system]
    R = [reflection_matrix(t) for t in taus]
    n = rs.n
    problems = []
    prod = np.eye(n)
    for Ri in R:
        prod = prod @ Ri
    if np.abs(prod - rs.c).max() > eq:
        problems.append(f"w{w.index}: c != R(theta..)R(delta..)")
        return problems
    for i, t in enumerate(taus):
        a_prev = np.eye(n)
        for Rj in R[:i]:
            a_prev = a_prev @ Rj
        b_next = np.eye(n)
        for Rj in reversed(R[i + 1:]):
            b_next = b_next @ Rj
        eps = a_prev @ t
        eta = b_next @ t
        a_i = a_prev @ R[i]
        b_i = R[i]
        for Rj in R[i + 1:]:
            b_i = b_i @ Rj
        if np.abs(eps + a_i @ t).max() > eq:
            problems.append(f"w{w.index}: eps_{i + 1} != -a_i(tau_i)")
        if np.abs(eta + b_i.T @ t).max() > eq:
            problems.append(f"w{w.index}: eta_{i + 1} != -b_i^-1(tau_i)")
        if np.abs(rs.c @ eta + eps).max() > eq:
            problems.append(f"w{w.index}: c(eta_{i + 1}) != -eps_{i + 1}")
    return problems


def same_ray_set(A, B, tol: float) -> bool:
    """Unit-ray sets equal up to order."""
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape:
        return False
    used = set()
    for a in A:
        d = np.abs(B - a).max(axis=1)
        hits = [j for j in np.flatnonzero(d <= tol) if j not in used]
        if not hits:
            return False
        used.add(hits[0])
    return True


class Fan:
    """All cones F(w), indexed like the lattice."""

    def __init__(self, lattice: NcpLattice, mu: Optional[MuOperator] = None):
        self.lattice = lattice
        self.rho = lattice.rho
        self.rs = lattice.rs
        self.mu = mu if mu is not None else build_mu(self.rho)
        self.cones = [cone_F(lattice, w) for w in lattice]

    def __len__(self) -> int:
        return len(self.cones)

    def __iter__(self):
        return iter(self.cones)

    def __getitem__(self, i: int) -> Cone:
        return self.cones[i]


def build_fan(lattice: NcpLattice) -> Fan:
    return Fan(lattice)


def assign_chambers(fan: Fan | Sequence[Cone], group: Sequence[GroupElement],
                    interior_point: Optional[np.ndarray] = None, tol: float = 1e-7) -> list[int]:
    """Cone index containing each chamber u.C, located via u applied to sum(mu(rho_i)).

    Fills ``Cone.chamber_ids`` and returns the table (one cone index per group element).
    """
    cones = list(fan)
    if interior_point is None:
        interior_point = fan.mu.mu_rho[: fan.rs.n].sum(axis=0)
        tol = fan.rs.tol.cone
    for cone in cones:
        cone.chamber_ids = []
    X = np.array([g.matrix @ interior_point for g in group]).T
    inside = np.array([np.all(cone.coefficients(X) > tol, axis=0) for cone in cones])
    table = []
    for u in range(len(group)):
        hits = np.flatnonzero(inside[:, u])
        if len(hits) == 0:
            raise ChamberUnassigned(f"chamber of group element {u} lies in no cone")
        if len(hits) > 1:
            raise ChamberMultiplyAssigned(f"chamber of group element {u} lies in cones {list(hits)}")
        cones[hits[0]].chamber_ids.append(u)
        table.append(int(hits[0]))
    return table


@dataclass
class FanReport:
    samples: int
    non_simplicial: list = field(default_factory=list)
    uncovered: int = 0
    multiply_covered: int = 0
    generic: int = 0
    band: float = 0.0
    angle_sum: Optional[float] = None

    @property
    def passed(self) -> bool:
        return not self.non_simplicial and self.uncovered == 0 and self.multiply_covered == 0


def sample_sphere(n: int, samples: int, seed: int) -> np.ndarray:
    """``samples`` unit vectors (columns) from a counter-based Philox stream."""
    rng = np.random.Generator(np.random.Philox(seed))
    X = rng.standard_normal((n, samples))
    return X / np.linalg.norm(X, axis=0, keepdims=True)


def check_complete_fan(cones: Sequence[Cone], samples: int = 100_000, seed: int = 42,
                       tol_cone: float = 1e-7, tol_rank: float = 1e-8, chunk: int = 20_000) -> FanReport:
    cones = list(cones)
    n = cones[0].rays.shape[1]
    band = 10 * tol_cone
    report = FanReport(samples=samples, band=band)
    for cone in cones:
        if rank_tol(cone.normals, tol_rank) != n:
            report.non_simplicial.append(cone.ncp_id)
    X = sample_sphere(n, samples, seed)
    inverses = np.array([c._ray_inverse for c in cones])
    for start in range(0, samples, chunk):
        block = X[:, start:start + chunk]
        coef = np.einsum("kij,jm->kim", inverses, block)  # cones x n x samples
        covered = np.all(coef >= -tol_cone, axis=1)
        report.uncovered += int(np.sum(~covered.any(axis=0)))
        generic = np.all(np.abs(coef) > band, axis=(0, 1))
        interior = np.all(coef > band, axis=1)
        report.generic += int(generic.sum())
        report.multiply_covered += int(np.sum(generic & (interior.sum(axis=0) != 1)))
    if n == 2:
        report.angle_sum = float(sum(np.arccos(np.clip(c.rays[0] @ c.rays[1], -1, 1)) for c in cones))
    return report


def rank2_angle_sum(cones: Sequence[Cone]) -> float:
    return float(sum(np.arccos(np.clip(c.rays[0] @ c.rays[1], -1.0, 1.0)) for c in cones))


@dataclass
class Report:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def wall_root_check(fan: Fan) -> Report:
    """Every wall normal (the hyperplane through all rays but one) is parallel to a root."""
    rs = fan.rs
    roots = rs.positive_roots
    rep = Report("walls are reflecting hyperplanes")
    n = rs.n
    for cone in fan:
        for j in range(n):
            others = np.delete(cone.rays, j, axis=0)
            if n == 1:
                normal = cone.rays[0]
            else:
                _, _, Vt = np.linalg.svd(others)
                normal = Vt[-1]
            rep.checked += 1
            if np.abs(np.abs(roots @ normal) - 1.0).min() > rs.tol.eq * 100:
                rep.failures.append(f"cone {cone.ncp_id} wall {j}")
                continue
            # the wall must also be the stored normal for that ray
            if abs(abs(normal @ unit(cone.normals[j])) - 1.0) > rs.tol.eq * 100:
                rep.failures.append(f"cone {cone.ncp_id} wall {j} does not match its normal")
    return rep


def cambrian_map(rs: RootSystem, mu: MuOperator) -> np.ndarray:
    """Matrix of x -> (1/2) mu(c_plus x)."""
    return 0.5 * mu.matrix @ rs.c_plus


def cambrian_map_check(fan: Fan, ex_facets: Sequence[Sequence[int]],
                       ax_facets: Optional[Sequence[Facet]] = None) -> Report:
    """The map (1/2) mu o c_plus carries the cones on EX(c) facets onto the cones F(w).

    The EX facet whose c_plus image is the AX facet F with phi(F) = v is sent to
    F(w) for w = v^-1 c. Also checks the basis images -omega_i (i <= s) and
    omega_i (i > s), with omega_i = mu(rho_i)/2.
    """
    rs, rho, lattice = fan.rs, fan.rho, fan.lattice
    rep = Report("cluster fan maps linearly onto F(w)")
    L = cambrian_map(rs, fan.mu)
    tol = rs.tol.cone
    omega = 0.5 * fan.mu.mu_rho[: rs.n]
    for i in range(rs.n):
        expected = -omega[i] if i < rs.s else omega[i]
        rep.checked += 1
        if np.abs(L @ rs.simple_roots[i] - expected).max() > rs.tol.eq:
            rep.failures.append(f"L(alpha_{i + 1}) != {'-' if i < rs.s else ''}omega_{i + 1}")

    phi_of = {}
    if ax_facets is not None:
        phi_of = {f.vertices: f.phi_id for f in ax_facets}
    hit = set()
    for t in ex_facets:
        rep.checked += 1
        image = np.array([unit(L @ rho[p]) for p in t])
        matches = [cone.ncp_id for cone in fan if same_ray_set(image, cone.rays, tol)]
        if len(matches) != 1:
            rep.failures.append(f"EX facet {tuple(t)} matches {len(matches)} cones")
            continue
        hit.add(matches[0])
        if phi_of:
            ax = tuple(sorted(rho.position(rs.c_plus @ rho[p], "AX") for p in t))
            v = lattice[phi_of[ax]]
            w = lattice.find(v.matrix.T @ rs.c)
            if w.index != matches[0]:
                rep.failures.append(f"EX facet {tuple(t)} lands on F({matches[0]}), expected F({w.index})")
    if len(hit) != len(fan) or len(ex_facets) != len(fan):
        rep.failures.append(f"{len(ex_facets)} EX facets hit {len(hit)} of {len(fan)} cones")
    return rep

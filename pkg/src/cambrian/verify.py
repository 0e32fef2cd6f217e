"""Invariant suites run by ``cambrian verify``.

Each suite returns :class:`Check` records; nothing here raises on a failed
property, so one bad invariant does not hide the others.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator

import networkx as nx
import numpy as np

from .assocomplex import (
    Complex,
    apply_cplus_complex,
    classify_vertices,
    is_simplex,
    phi_inverse,
    x_facets_bruteforce,
    x_first_facet,
    x_last_facet,
)
from .cambrianfan import (
    cambrian_map_check,
    check_complete_fan,
    factorization_check,
    rank2_angle_sum,
    rays_F,
    same_ray_set,
    wall_root_check,
)
from .errors import CambrianError
from .geomkernel import invert, nonneg_combination, rank_tol
from .ncplattice import refl_length
from .pipeline import Construction
from .rootsystem import gram_from_coxeter, reflection_matrix


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        tail = f" ({self.detail})" if self.detail else ""
        return f"[{mark}] {self.suite}: {self.name}{tail}"


def _guarded(suite: str, name: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    try:
        ok, detail = fn()
    except CambrianError as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(suite, name, bool(ok), detail)


def kernel_suite(k: Construction) -> Iterator[Check]:
    rs = k.rs
    n, tol = rs.n, rs.tol

    def dimension_count():
        bad = 0
        for g in k.group:
            A = np.eye(n) - g.matrix
            _, sv, Vt = np.linalg.svd(A)
            fixed = Vt[np.sum(sv > tol.rank):]
            proj = fixed.T @ fixed
            if rank_tol(A, tol.rank) + rank_tol(proj, tol.rank) != n:
                bad += 1
        return bad == 0, f"{len(k.group)} elements"

    def involution():
        M = np.eye(n) - rs.c
        return np.abs(invert(invert(M)) - M).max() <= 1e-7, ""

    yield _guarded("geomkernel", "rank(I-w) + dim Fix(w) = n", dimension_count)
    yield _guarded("geomkernel", "inversion is an involution on I-c", involution)


def rootsystem_suite(k: Construction) -> Iterator[Check]:
    rs = k.rs
    n, s, eq = rs.n, rs.s, rs.tol.eq
    A = rs.simple_roots
    I = np.eye(n)
    G = A @ A.T

    yield Check("rootsystem", "simple roots have unit length",
                bool(np.abs(np.diag(G) - 1).max() <= eq))
    ortho = np.abs(G[:s, :s] - np.eye(s)).max(initial=0) <= eq and np.abs(
        G[s:, s:] - np.eye(n - s)).max(initial=0) <= eq
    yield Check("rootsystem", "S1 and S2 are orthonormal sets", bool(ortho), f"s = {s}")
    yield Check("rootsystem", "alpha_i . alpha_j = -cos(pi/m_ij)",
                bool(np.abs(G - gram_from_coxeter(rs.coxeter_matrix)).max() <= eq))
    fact = (np.abs(rs.c - rs.c_plus @ rs.c_minus).max() <= eq
            and np.abs(rs.c_plus @ rs.c_plus - I).max() <= eq
            and np.abs(rs.c_minus @ rs.c_minus - I).max() <= eq)
    yield Check("rootsystem", "c = c_plus c_minus with both factors involutions", bool(fact))
    yield Check("rootsystem", "c_plus c c_plus = c^-1",
                bool(np.abs(rs.c_plus @ rs.c @ rs.c_plus - rs.c.T).max() <= eq))
    P, powers_ok = I.copy(), True
    for k_ in range(1, rs.h):
        P = P @ rs.c
        if np.abs(P - I).max() <= eq * 10:
            powers_ok = False
    P = P @ rs.c
    yield Check("rootsystem", "c has order exactly h",
                bool(powers_ok and np.abs(P - I).max() <= eq * 10 * rs.h), f"h = {rs.h}")
    yield Check("rootsystem", "|positive roots| = nh/2",
                rs.num_positive * 2 == n * rs.h, f"{rs.num_positive} positive roots")

    roots = rs.all_roots
    keys = {tuple(np.round(r, 6)) for r in roots}

    def closed(mats):
        for R in mats:
            for r in roots:
                if tuple(np.round(R @ r, 6)) not in keys:
                    return False
        return True

    yield Check("rootsystem", "roots closed under every reflection R(tau)",
                closed([reflection_matrix(t) for t in rs.positive_roots]))
    yield Check("rootsystem", "W permutes the roots", closed([g.matrix for g in k.group]),
                f"|W| = {len(k.group)}")
    pos_ok = all(nonneg_combination(t, A, rs.tol.cone) for t in rs.positive_roots)
    neg_ok = all(nonneg_combination(-t, -A, rs.tol.cone) for t in rs.positive_roots)
    yield Check("rootsystem", "positive roots are nonnegative in the simple roots", pos_ok and neg_ok)
    order = rs.descriptor.order()
    if order is not None:
        yield Check("rootsystem", "|W| matches the classification", len(k.group) == order,
                    f"{len(k.group)}")


def ncp_suite(k: Construction) -> Iterator[Check]:
    rs, rho, L = k.rs, k.rho, k.lattice
    n, tol = rs.n, rs.tol

    def brute_filter():
        count = sum(1 for g in k.group if refl_length(g, tol) + refl_length(g.matrix.T @ rs.c, tol) == n)
        return count == len(L), f"|NCP_c| = {len(L)}"

    def membership():
        return all(w.length + refl_length(w.matrix.T @ rs.c, tol) == n for w in L), ""

    def simple_sizes():
        return all(len(w.simple_system) == w.length for w in L), ""

    def obtuse():
        for w in L:
            for p, q in combinations(w.simple_system, 2):
                if rho[p] @ rho[q] > tol.eq:
                    return False, f"element {w.index}"
        return True, ""

    def parabolic_cone():
        for w in L:
            gens = [rho[p] for p in w.simple_system]
            if not all(nonneg_combination(rho[p], gens, tol.cone) for p in w.parabolic_roots):
                return False, f"element {w.index}"
        return True, ""

    def dimension():
        for w in L:
            V = np.array([rho[p] for p in w.parabolic_roots]).reshape(-1, n)
            if rank_tol(V @ V.T, tol.rank) != w.length:
                return False, f"element {w.index}"
            if len(V) and np.abs(V - V @ w.moved_space_basis.T @ w.moved_space_basis).max() > 1e-7:
                return False, f"element {w.index}: parabolic root outside M(w)"
        return True, ""

    def reconstruction():
        for w in L:
            M = np.eye(n)
            for p in L.kreweras(w).simple_system + w.simple_system:
                M = M @ rho.reflection(p)
            if np.abs(M - rs.c).max() > tol.eq * 100:
                return False, f"element {w.index}"
            D = np.eye(n)
            for p in w.simple_system:
                D = D @ rho.reflection(p)
            if np.abs(D - w.matrix).max() > tol.eq * 100:
                return False, f"element {w.index}: w != R(delta_1)..R(delta_k)"
        return True, "c = R(theta_1)..R(theta_{n-k}) R(delta_1)..R(delta_k)"

    def double_kreweras():
        for w in L:
            kk = L.kreweras(L.kreweras(w))
            if np.abs(kk.matrix - rs.c @ w.matrix @ rs.c.T).max() > tol.eq * 100:
                return False, f"element {w.index}"
        return True, ""

    def subadditive():
        rng = np.random.Generator(np.random.Philox(7))
        G = k.group
        idx = rng.integers(0, len(G), size=(min(2000, len(G) ** 2), 2))
        for a, b in idx:
            if refl_length(G[a].matrix @ G[b].matrix, tol) > G[a].length + G[b].length:
                return False, f"pair {a},{b}"
        return True, f"{len(idx)} sampled pairs"

    def every_reflection():
        return all(refl_length(rho.reflection(p) @ rs.c, tol) == n - 1
                   for p in range(1, rho.num_positive + 1)), ""

    yield _guarded("ncplattice", "NCP_c equals the brute-force filter of W", brute_filter)
    yield _guarded("ncplattice", "l(w) + l(w^-1 c) = n", membership)
    yield _guarded("ncplattice", "every reflection lies below c", every_reflection)
    yield _guarded("ncplattice", "|Pi_w| = l(w)", simple_sizes)
    yield _guarded("ncplattice", "simple systems are pairwise non-acute", obtuse)
    yield _guarded("ncplattice", "parabolic roots lie in the cone of Pi_w", parabolic_cone)
    yield _guarded("ncplattice", "l(w) = dim span of the parabolic roots, which lie in M(w)", dimension)
    yield _guarded("ncplattice", "simple-system factorization of c", reconstruction)
    yield _guarded("ncplattice", "Kreweras squared is conjugation by c", double_kreweras)
    yield _guarded("ncplattice", "reflection length is subadditive", subadditive)


def assoc_suite(k: Construction) -> Iterator[Check]:
    rs, rho, L = k.rs, k.rho, k.lattice
    n = rs.n
    ax = [f.vertices for f in k.ax_facets]

    yield Check("assocomplex", "AX(c) has nh/2 + n vertices", len(rho.ax_range) == rs.num_positive + n,
                f"{len(rho.ax_range)} vertices")
    yield Check("assocomplex", "facet count equals |NCP_c|", len(ax) == len(L),
                f"{len(ax)} facets")

    def transport():
        image = apply_cplus_complex(rho, k.ex_facets)
        return image == set(ax), f"{len(k.ex_facets)} EX facets"

    def vertex_set():
        used = {rho.position(rs.c_plus @ rho[p], "AX") for p in rho.ex_range}
        return used == set(rho.ax_range), ""

    def blocks():
        # c_plus(c^k S1) = -c^-k S1 and c_plus(c^k S2) = -c^{1-k} S2
        S1, S2 = rs.simple_roots[:rs.s], rs.simple_roots[rs.s:]
        ck = np.eye(n)
        for e in range(rs.h):
            cinv = np.linalg.matrix_power(rs.c.T, e)
            if np.abs(rs.c_plus @ ck @ S1.T + cinv @ S1.T).max(initial=0) > 1e-9:
                return False, f"S1 block k={e}"
            if np.abs(rs.c_plus @ ck @ S2.T + rs.c @ cinv @ S2.T).max(initial=0) > 1e-9:
                return False, f"S2 block k={e}"
            ck = ck @ rs.c
        return True, ""

    def flag():
        edges = [(p, q) for p, q in combinations(rho.ax_range, 2) if is_simplex(rho, (p, q))]
        for f in ax:
            if not all(is_simplex(rho, e) for e in combinations(f, 2)):
                return False, f"facet {f} has a non-edge"
        if n > 3:
            return True, "pairwise edges only (rank > 3)"
        g = nx.Graph(edges)
        g.add_nodes_from(rho.ax_range)
        cliques = {tuple(sorted(cl)) for cl in nx.find_cliques(g)}
        return cliques == set(ax), f"{len(edges)} edges"

    def lexicographic():
        if n > 3:
            return True, "skipped above rank 3"
        for w in L:
            if w.length == 0:
                continue
            fs = x_facets_bruteforce(L, w)
            if not fs or fs[0] != x_first_facet(L, w) or fs[-1] != x_last_facet(L, w):
                return False, f"element {w.index}"
        return True, ""

    def extremes():
        first = tuple(range(1, n + 1))
        last = tuple(range(rs.num_positive + 1, rs.num_positive + n + 1))
        ok = all(classify_vertices(rho, first)) and not any(classify_vertices(rho, last))
        ok = ok and x_first_facet(L, L.coxeter) == first
        ok = ok and x_last_facet(L, L.coxeter) == tuple(range(rs.num_positive - n + 1, rs.num_positive + 1))
        return ok, ""

    def easy_types():
        N = rs.num_positive
        for f in k.ax_facets:
            for p, fwd in zip(f.vertices, f.forward_flags):
                if (p <= n and not fwd) or (p > N and fwd):
                    return False, f"facet {f.vertices}"
        return True, ""

    def orthogonality():
        bad = 0
        for f in k.ax_facets:
            for i, (p, fp) in enumerate(zip(f.vertices, f.forward_flags)):
                for q, fq in zip(f.vertices[i + 1:], f.forward_flags[i + 1:]):
                    if not fp and fq and abs(rho[p] @ rho[q]) > rs.tol.eq:
                        bad += 1
        return bad == 0, f"{bad} violations"

    def bijection():
        ids = [f.phi_id for f in k.ax_facets]
        return sorted(ids) == list(range(len(L))), f"{len(set(ids))} distinct images"

    def inverse():
        by_id = {f.phi_id: f.vertices for f in k.ax_facets}
        for w in L:
            if phi_inverse(L, w).vertices != by_id.get(w.index):
                return False, f"element {w.index}"
        return True, ""

    yield _guarded("assocomplex", "c_plus carries EX(c) onto AX(c)", transport)
    yield _guarded("assocomplex", "c_plus maps the EX vertex window onto rho_1..rho_{nh/2+n}", vertex_set)
    yield _guarded("assocomplex", "c_plus action on the blocks c^k(S1), c^k(S2)", blocks)
    yield _guarded("assocomplex", "complex is flag (determined by its edges)", flag)
    yield _guarded("assocomplex", "sign rule gives the lexicographic first/last facets of X(w)", lexicographic)
    yield _guarded("assocomplex", "first facet all forward, last n roots all backward", extremes)
    yield _guarded("assocomplex", "first n roots forward, negative vertices backward", easy_types)
    yield _guarded("assocomplex", "backward-before-forward vertices are orthogonal", orthogonality)
    yield _guarded("assocomplex", "phi is a bijection onto NCP_c", bijection)
    yield _guarded("assocomplex", "phi_inverse o phi = identity", inverse)


def fan_suite(k: Construction, samples: int = 100_000, seed: int = 42) -> Iterator[Check]:
    rs, L, fan = k.rs, k.lattice, k.fan
    n, tol = rs.n, rs.tol

    def mu_identities():
        # build_mu already raised on failure; recheck the dual-basis identity explicitly
        D = fan.mu.mu_rho[:n] @ rs.simple_roots.T
        return np.abs(D - np.eye(n)).max() <= tol.eq, ""

    def duality():
        bad = [w.index for w in L if not same_ray_set(rays_F(L, fan.mu, w), fan[w.index].rays, tol.cone)]
        return not bad, f"mismatched cones: {bad[:5]}" if bad else f"{len(L)} cones"

    def factorizations():
        problems = [p for w in L for p in factorization_check(L, w)]
        return not problems, "; ".join(problems[:3])

    def rays_in_cone():
        for cone in fan:
            for r in cone.rays:
                if np.any(cone.normals @ r < -tol.cone):
                    return False, f"cone {cone.ncp_id}"
        return True, ""

    def identity_cone():
        c0, cc = fan[L.identity.index], fan[L.coxeter.index]
        ok = not c0.neg_normals and len(c0.pos_normals) == n
        ok = ok and not cc.pos_normals and len(cc.neg_normals) == n
        dual = np.array([d / np.linalg.norm(d) for d in fan.mu.mu_rho[:n]])
        return ok and same_ray_set(c0.rays, dual, tol.cone) and same_ray_set(cc.rays, -dual, tol.cone), ""

    def coarsening():
        counts = [len(c.chamber_ids) for c in fan]
        return sum(counts) == len(k.group) and min(counts) >= 1, _histogram(counts)

    def completeness():
        rep = check_complete_fan(fan.cones, samples, seed, tol.cone, tol.rank)
        detail = (f"{samples} samples, {rep.uncovered} uncovered, {rep.multiply_covered} multiply covered, "
                  f"{len(rep.non_simplicial)} non-simplicial")
        return rep.passed, detail

    def walls():
        rep = wall_root_check(fan)
        return rep.passed, f"{rep.checked} walls" if rep.passed else "; ".join(rep.failures[:3])

    def cambrian():
        rep = cambrian_map_check(fan, k.ex_facets, k.ax_facets)
        return rep.passed, f"{rep.checked} checks" if rep.passed else "; ".join(rep.failures[:3])

    yield _guarded("cambrianfan", "mu(rho_1..rho_n) is dual to the simple roots", mu_identities)
    yield _guarded("cambrianfan", "F(identity) = C and F(c) = -C", identity_cone)
    yield _guarded("cambrianfan", "rays lie in their cones", rays_in_cone)
    yield _guarded("cambrianfan", "rays of F(w) are mu(first facet) and mu(c last facet)", duality)
    yield _guarded("cambrianfan", "prefix/suffix factorization identities", factorizations)
    yield _guarded("cambrianfan", "chamber fan coarsens onto {F(w)}", coarsening)
    yield _guarded("cambrianfan", "{F(w)} is a complete simplicial fan", completeness)
    yield _guarded("cambrianfan", "walls lie on reflecting hyperplanes", walls)
    yield _guarded("cambrianfan", "(1/2) mu o c_plus maps the cluster fan onto {F(w)}", cambrian)
    if n == 2:
        total = rank2_angle_sum(fan.cones)
        m = int(rs.coxeter_matrix[0, 1])
        yield Check("cambrianfan", "rank 2: m + 2 cones with angles summing to 2 pi",
                    len(fan) == m + 2 and abs(total - 2 * math.pi) <= 1e-6, f"{len(fan)} cones, sum {total:.12f}")


def _histogram(counts) -> str:
    hist: dict[int, int] = {}
    for c in counts:
        hist[c] = hist.get(c, 0) + 1
    return ", ".join(f"{k} chamber{'s' if k != 1 else ''}: {v}" for k, v in sorted(hist.items()))


def run_all(k: Construction, samples: int = 100_000, seed: int = 42) -> list[Check]:
    checks: list[Check] = []
    for suite in (kernel_suite(k), rootsystem_suite(k), ncp_suite(k), assoc_suite(k),
                  fan_suite(k, samples, seed)):
        checks.extend(suite)
    return checks

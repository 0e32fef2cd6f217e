"""Independent oracles: standard matrix models of the classical groups and
brute-force constructions that share no code with the package."""
import itertools
import math

import numpy as np


def permutation_matrices(n):
    out = []
    for perm in itertools.permutations(range(n)):
        P = np.zeros((n, n))
        for i, j in enumerate(perm):
            P[j, i] = 1.0
        out.append(P)
    return out


def signed_permutation_matrices(n, even_only=False):
    out = []
    for P in permutation_matrices(n):
        for signs in itertools.product((1.0, -1.0), repeat=n):
            if even_only and signs.count(-1.0) % 2:
                continue
            out.append(P * np.array(signs))
    return out


def refl(v):
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    return np.eye(len(v)) - 2 * np.outer(v, v)


def rank(M):
    return int(np.linalg.matrix_rank(M, tol=1e-8))


def ncp_count(elements, c):
    """Brute-force filter: w with rank(I-w) + rank(I-w^-1 c) = rank(I-c)."""
    n = c.shape[0]
    I = np.eye(n)
    lc = rank(I - c)
    return sum(1 for w in elements if rank(I - w) + rank(I - w.T @ c) == lc)


def model(label):
    """(group elements, bipartite Coxeter element) in a standard coordinate model."""
    e = np.eye(4)
    if label == "A2":
        G = permutation_matrices(3)
        s1, s2 = refl(e[0, :3] - e[1, :3]), refl(e[1, :3] - e[2, :3])
        return G, s1 @ s2
    if label == "A3":
        G = permutation_matrices(4)
        s = [refl(e[i] - e[i + 1]) for i in range(3)]
        return G, s[0] @ s[2] @ s[1]
    if label == "B3":
        G = signed_permutation_matrices(3)
        e3 = np.eye(3)
        s = [refl(e3[0] - e3[1]), refl(e3[1] - e3[2]), refl(e3[2])]
        return G, s[0] @ s[2] @ s[1]
    if label == "D4":
        G = signed_permutation_matrices(4, even_only=True)
        s = [refl(e[0] - e[1]), refl(e[1] - e[2]), refl(e[2] - e[3]), refl(e[2] + e[3])]
        return G, s[1] @ s[0] @ s[2] @ s[3]
    raise KeyError(label)


def dihedral(m):
    """I2(m) as rotations and reflections of the plane."""
    G = []
    for k in range(m):
        t = 2 * math.pi * k / m
        G.append(np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]]))
        G.append(np.array([[math.cos(t), math.sin(t)], [math.sin(t), -math.cos(t)]]))
    a1 = np.array([1.0, 0.0])
    a2 = np.array([-math.cos(math.pi / m), math.sin(math.pi / m)])
    return G, refl(a1) @ refl(a2)


def catalan_number(degrees):
    """prod (h + d_i) / d_i with h the largest degree."""
    h = max(degrees)
    num = math.prod(h + d for d in degrees)
    den = math.prod(degrees)
    assert num % den == 0
    return num // den


DEGREES = {
    "A1": [2],
    "A2": [2, 3],
    "A3": [2, 3, 4],
    "B3": [2, 4, 6],
    "D4": [2, 4, 4, 6],
    "H3": [2, 6, 10],
    "I2(5)": [2, 5],
    "I2(7)": [2, 7],
}


def closure(gens, limit=20000):
    """Group generated by ``gens``, deduplicated on a 1e-6 grid (plain Python set)."""
    n = gens[0].shape[0]
    I = np.eye(n)
    key = lambda M: tuple(np.round(M, 6).ravel() + 0.0)
    seen = {key(I): I}
    frontier = [I]
    while frontier:
        new = []
        for w in frontier:
            for g in gens:
                u = g @ w
                k = key(u)
                if k not in seen:
                    seen[k] = u
                    new.append(u)
        frontier = new
        assert len(seen) <= limit
    return list(seen.values())

import math

import numpy as np
import pytest

from cambrian.errors import BadCustomRoots, GuardExceeded, InvalidDescriptor, NotARoot, NotUnit
from cambrian.geomkernel import nonneg_combination
from cambrian.rootsystem import (
    GroupDescriptor,
    build_root_system,
    coxeter_element,
    enumerate_group,
    family_descriptor,
    reflection,
    root_index,
)

from conftest import C3_FIXTURE_ROOTS, close
from oracles import closure, refl


def test_a2_counts():
    rs = build_root_system(family_descriptor("A", 2))
    assert (rs.num_positive, rs.h, rs.s) == (3, 3, 1)


def test_c3_fixture():
    rs = build_root_system(family_descriptor("B", 3, custom=C3_FIXTURE_ROOTS))
    assert (rs.num_positive, rs.h, rs.s) == (9, 6, 2)
    assert rs.num_positive + rs.n == 12
    assert close(rs.simple_roots, C3_FIXTURE_ROOTS, 0)


@pytest.mark.parametrize("family,n,m", [("A", 3, None), ("B", 4, None), ("D", 5, None), ("H3", 3, None), ("I2", 2, 8)])
def test_gram_identity(family, n, m):
    rs = build_root_system(family_descriptor(family, n, m))
    G = rs.simple_roots @ rs.simple_roots.T
    assert close(G, -np.cos(np.pi / rs.coxeter_matrix))


def test_reflection():
    tau = np.array([1.0, 2.0, 2.0]) / 3
    R = reflection(tau)
    assert close(R(tau), -tau)
    assert close(R.matrix @ R.matrix, np.eye(3))
    assert math.isclose(np.linalg.det(R.matrix), -1.0)
    assert R.length == 1
    with pytest.raises(NotUnit):
        reflection([1.0, 1.0, 0.0])


def test_coxeter_element_c3():
    rs = build_root_system(family_descriptor("B", 3, custom=C3_FIXTURE_ROOTS))
    c, cp, cm = coxeter_element(rs)
    x = np.array([0.3, -1.1, 2.5])
    assert close(c @ x, [-x[2], x[0], x[1]])
    assert close(cp @ c @ cp, np.linalg.inv(c))
    P = np.eye(3)
    orders = []
    for k in range(1, 7):
        P = P @ c
        if close(P, np.eye(3)):
            orders.append(k)
    assert orders == [6]


@pytest.mark.parametrize("family,n,expected_gens", [("A", 2, None), ("B", 3, None)])
def test_enumerate_group_against_closure(family, n, expected_gens):
    rs = build_root_system(family_descriptor(family, n))
    G = enumerate_group(rs)
    oracle = closure([refl(a) for a in rs.simple_roots])
    assert len(G) == len(oracle) == {"A": 6, "B": 48}[family]
    assert close(G[0].matrix, np.eye(n), 0)
    assert [g.length for g in G][:1] == [0]


def test_h3_closure_oracle():
    # independent H3 model, built without the Gram/Cholesky route
    a1 = np.array([1.0, 0.0, 0.0])
    a2 = np.array([-math.cos(math.pi / 5), math.sin(math.pi / 5), 0.0])
    y = -0.5 / math.sin(math.pi / 5)
    a3 = np.array([0.0, y, math.sqrt(1 - y * y)])
    assert len(closure([refl(a1), refl(a2), refl(a3)])) == 120
    assert len(enumerate_group(build_root_system(family_descriptor("H3")))) == 120


def test_root_index():
    rs = build_root_system(family_descriptor("B", 3, custom=C3_FIXTURE_ROOTS))
    a1 = rs.simple_roots[0]
    assert root_index(rs, a1) == 1
    assert root_index(rs, -a1) == -1
    i = root_index(rs, rs.c @ a1)
    assert i > 0 and close(rs.root(i), [0.0, 1.0, 0.0])
    with pytest.raises(NotARoot):
        root_index(rs, np.array([0.6, 0.8, 0.0]))


def test_root_invariants(group):
    rs = group.rs
    roots = rs.all_roots
    keys = {tuple(np.round(r, 6)) for r in roots}
    for t in rs.positive_roots:
        R = refl(t)
        assert all(tuple(np.round(R @ r, 6)) in keys for r in roots)
    assert len(roots) == rs.n * rs.h
    for t in rs.positive_roots:
        assert nonneg_combination(t, rs.simple_roots)
        assert nonneg_combination(-t, -rs.simple_roots)


def test_w_permutes_roots(group):
    keys = {tuple(np.round(r, 6)) for r in group.rs.all_roots}
    for g in group.group[:: max(1, len(group.group) // 40)]:
        assert all(tuple(np.round(g.matrix @ r, 6)) in keys for r in group.rs.all_roots)


def test_bipartition(group):
    rs = group.rs
    G = rs.simple_roots @ rs.simple_roots.T
    assert close(G[: rs.s, : rs.s], np.eye(rs.s))
    assert close(G[rs.s:, rs.s:], np.eye(rs.n - rs.s))


@pytest.mark.parametrize("kwargs", [
    dict(family="A", rank=0), dict(family="B", rank=1), dict(family="D", rank=3),
    dict(family="I2", rank=2, m=2), dict(family="H3", rank=4), dict(family="E", rank=6),
])
def test_invalid_descriptors(kwargs):
    with pytest.raises(InvalidDescriptor):
        GroupDescriptor(**kwargs)


def test_guard():
    with pytest.raises(GuardExceeded):
        GroupDescriptor("A", 7)  # 8! = 40320
    GroupDescriptor("A", 7, guard=50000)


def test_bad_custom_roots():
    bad = [list(r) for r in C3_FIXTURE_ROOTS]
    bad[1][1] += 1e-3
    with pytest.raises(BadCustomRoots):
        build_root_system(family_descriptor("B", 3, custom=bad))
    # right angles, wrong type
    with pytest.raises(BadCustomRoots):
        build_root_system(family_descriptor("A", 3, custom=C3_FIXTURE_ROOTS))


def test_custom_family():
    rs = build_root_system(GroupDescriptor("Custom", 3, custom_simple_roots=C3_FIXTURE_ROOTS))
    assert rs.h == 6 and len(enumerate_group(rs)) == 48

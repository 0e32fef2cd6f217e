"""One-call construction of every structure for a group."""
from __future__ import annotations

from dataclasses import dataclass

from .assocomplex import Complex, Facet, build_facets, enumerate_facets
from .cambrianfan import Fan, assign_chambers
from .geomkernel import DEFAULT_TOL, Tolerances
from .ncplattice import NcpLattice, enumerate_ncp
from .rho import RhoOrder, rho_sequence
from .rootsystem import GroupDescriptor, GroupElement, RootSystem, build_root_system, enumerate_group


@dataclass(eq=False)
class Construction:
    rs: RootSystem
    rho: RhoOrder
    group: list[GroupElement]
    lattice: NcpLattice
    ax_facets: list[Facet]
    ex_facets: list[tuple]
    fan: Fan
    chambers: list[int]

    @property
    def descriptor(self) -> GroupDescriptor:
        return self.rs.descriptor


def construct(desc: GroupDescriptor, tol: Tolerances = DEFAULT_TOL) -> Construction:
    rs = build_root_system(desc, tol)
    rho = rho_sequence(rs)
    group = enumerate_group(rs)
    lattice = enumerate_ncp(rho, group)
    ax = build_facets(lattice, Complex.AX)
    ex = enumerate_facets(rho, Complex.EX)
    fan = Fan(lattice)
    chambers = assign_chambers(fan, group)
    return Construction(rs, rho, group, lattice, ax, ex, fan, chambers)

"""Noncrossing partitions, the associahedron complexes AX(c)/EX(c), and the fan {F(w)}
for finite real reflection groups with a bipartite Coxeter element."""

from .geomkernel import Membership, Tolerances
from .pipeline import Construction, construct
from .rootsystem import GroupDescriptor, build_root_system, family_descriptor

__all__ = [
    "Construction",
    "GroupDescriptor",
    "Membership",
    "Tolerances",
    "build_root_system",
    "construct",
    "family_descriptor",
]
__version__ = "0.1.0"

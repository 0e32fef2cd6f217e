"""JSON serialization of a :class:`~cambrian.pipeline.Construction`.

Floats are written with 12 significant digits, so two runs with the same
configuration give byte-identical files. Root references inside the document
are rho positions (``rho_order[p-1]`` is the signed root index of ``rho_p``).
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .errors import ConfigurationError
from .pipeline import Construction
from .rootsystem import GroupDescriptor

SCHEMA_VERSION = 1


def _num(x: float) -> float:
    return float(f"{float(x):.12g}") + 0.0


def _vec(v) -> list:
    return [_num(x) for x in np.asarray(v).reshape(-1)]


def _mat(M) -> list:
    return [_vec(row) for row in np.atleast_2d(M)]


def to_document(k: Construction) -> dict[str, Any]:
    rs, rho, L = k.rs, k.rho, k.lattice
    d = rs.descriptor
    counts: dict[str, int] = {}
    for cone in k.fan:
        key = str(len(cone.chamber_ids))
        counts[key] = counts.get(key, 0) + 1
    return {
        "schema": SCHEMA_VERSION,
        "group": {
            "family": d.family,
            "rank": d.rank,
            "m": d.m,
            "label": d.label,
            "order": len(k.group),
            "guard": d.guard,
            "custom_simple_roots": d.custom_simple_roots is not None,
        },
        "s": rs.s,
        "h": rs.h,
        "num_positive_roots": rs.num_positive,
        "simple_roots": _mat(rs.simple_roots),
        "coxeter_matrix": rs.coxeter_matrix.tolist(),
        "all_roots": _mat(rs.all_roots),
        "coxeter_element": _mat(rs.c),
        "rho_order": [rho.root_id(p) for p in rho.ax_range],
        "ex_window": [rho.root_id(p) for p in rho.ex_range],
        "ncp": [
            {
                "id": w.index,
                "matrix": _mat(w.matrix),
                "length": w.length,
                "simple_system": list(w.simple_system),
                "kreweras_id": w.kreweras_id,
            }
            for w in L
        ],
        "ax_facets": [
            {
                "vertices": list(f.vertices),
                "forward": list(f.forward_flags),
                "phi_id": f.phi_id,
            }
            for f in k.ax_facets
        ],
        "ex_facets": [list(t) for t in k.ex_facets],
        "fan": [
            {
                "ncp_id": cone.ncp_id,
                "rays": _mat(cone.rays),
                "neg_normals": list(cone.neg_normals),
                "pos_normals": list(cone.pos_normals),
                "chamber_ids": list(cone.chamber_ids),
            }
            for cone in k.fan
        ],
        "chambers_per_cone": dict(sorted(counts.items(), key=lambda kv: int(kv[0]))),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def load_document(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA_VERSION:
        raise ConfigurationError(f"{path}: not a cambrian build document")
    return doc


def descriptor_from_document(doc: dict) -> GroupDescriptor:
    """Descriptor that rebuilds the exported group from its stored simple roots."""
    g = doc["group"]
    return GroupDescriptor(
        family=g["family"],
        rank=g["rank"],
        m=g["m"],
        custom_simple_roots=tuple(map(tuple, doc["simple_roots"])),
        guard=g["guard"],
    )


def compare_documents(a: Any, b: Any, tol: float = 1e-9, path: str = "$") -> list[str]:
    """Structural comparison; floats within ``tol``, everything else exactly."""
    if isinstance(a, dict) and isinstance(b, dict):
        diffs = []
        for key in sorted(set(a) | set(b)):
            if key not in a or key not in b:
                diffs.append(f"{path}.{key}: missing")
            else:
                diffs.extend(compare_documents(a[key], b[key], tol, f"{path}.{key}"))
        return diffs
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            return [f"{path}: length {len(a)} != {len(b)}"]
        diffs = []
        for i, (x, y) in enumerate(zip(a, b)):
            diffs.extend(compare_documents(x, y, tol, f"{path}[{i}]"))
        return diffs
    if isinstance(a, bool) or isinstance(b, bool) or not isinstance(a, (int, float)):
        return [] if a == b else [f"{path}: {a!r} != {b!r}"]
    if isinstance(a, int) and isinstance(b, int):
        return [] if a == b else [f"{path}: {a} != {b}"]
    return [] if abs(a - b) <= tol else [f"{path}: {a} != {b}"]

"""Command-line entry point: ``cambrian {build,verify,svg,table} --family ...``.

Exit status: 0 success, 1 invariant failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import export
from .errors import CambrianError, ConfigurationError, InvariantFailure
from .geomkernel import TOL_CONE, TOL_EQ, TOL_RANK, Tolerances
from .pipeline import Construction, construct
from .rootsystem import DEFAULT_GUARD, GroupDescriptor, family_descriptor, load_simple_roots

log = logging.getLogger("cambrian")

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG = 0, 1, 2

STANDARD_GROUPS = [("A", 2, None), ("A", 3, None), ("B", 3, None), ("D", 4, None),
                   ("H3", 3, None), ("I2", 2, 5), ("I2", 2, 7)]


@dataclass
class RunConfig:
    family: Optional[str] = None
    rank: Optional[int] = None
    m: Optional[int] = None
    simple_roots: Optional[Path] = None
    tol_eq: float = TOL_EQ
    tol_rank: float = TOL_RANK
    tol_cone: float = TOL_CONE
    mc_samples: int = 100_000
    seed: int = 42
    guard: int = DEFAULT_GUARD
    out: Optional[Path] = None

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(self.tol_eq, self.tol_rank, self.tol_cone)

    def descriptor(self) -> GroupDescriptor:
        if self.family is None:
            raise ConfigurationError("--family is required")
        custom = load_simple_roots(self.simple_roots) if self.simple_roots else None
        return family_descriptor(self.family, self.rank, self.m, custom, self.guard)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["A", "B", "D", "I2", "H3", "Custom"])
    p.add_argument("--rank", type=int)
    p.add_argument("--m", type=int, help="dihedral label for I2")
    p.add_argument("--simple-roots", type=Path, metavar="FILE",
                   help="JSON array of n arrays of n numbers")
    p.add_argument("--tol-eq", type=float, default=TOL_EQ)
    p.add_argument("--tol-rank", type=float, default=TOL_RANK)
    p.add_argument("--tol-cone", type=float, default=TOL_CONE)
    p.add_argument("--mc-samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--guard", type=int, default=DEFAULT_GUARD, help="maximum group order")
    p.add_argument("--out", type=Path, metavar="FILE")
    p.add_argument("-v", "--verbose", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cambrian", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("build", help="write every computed structure as JSON"))
    v = sub.add_parser("verify", help="run all invariant suites")
    _common(v)
    v.add_argument("--from-json", type=Path, metavar="FILE",
                   help="rebuild from an exported document and compare against it")
    s = sub.add_parser("svg", help="stereographic picture of a rank-3 fan")
    _common(s)
    s.add_argument("--projection-point", type=_triple, metavar="X,Y,Z")
    t = sub.add_parser("table", help="per-group summary table")
    _common(t)
    t.add_argument("--all", action="store_true", help="tabulate the standard test groups")
    return parser


def _triple(text: str) -> tuple[float, float, float]:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated numbers")
    return tuple(parts)


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        family=args.family, rank=args.rank, m=args.m, simple_roots=args.simple_roots,
        tol_eq=args.tol_eq, tol_rank=args.tol_rank, tol_cone=args.tol_cone,
        mc_samples=args.mc_samples, seed=args.seed, guard=args.guard, out=args.out,
    )


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)
        log.info("wrote %s", out)


def cmd_build(cfg: RunConfig) -> int:
    k = construct(cfg.descriptor(), cfg.tolerances)
    _emit(export.dumps(export.to_document(k)), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, from_json: Optional[Path] = None) -> int:
    from .verify import Check, run_all

    stored = None
    if from_json is not None:
        stored = export.load_document(from_json)
        desc = export.descriptor_from_document(stored)
    else:
        desc = cfg.descriptor()
    start = time.perf_counter()
    k = construct(desc, cfg.tolerances)
    checks = run_all(k, cfg.mc_samples, cfg.seed)
    if stored is not None:
        fresh = export.to_document(k)
        for doc in (fresh, stored):
            doc["group"].pop("custom_simple_roots", None)
        diffs = export.compare_documents(stored, fresh, tol=1e-9)
        checks.append(Check("export", "rebuilt structures match the stored document",
                            not diffs, "; ".join(diffs[:3])))
    elapsed = time.perf_counter() - start
    lines = [f"group {desc.label}: |W| = {len(k.group)}, h = {k.rs.h}, s = {k.rs.s}, "
             f"|NCP_c| = {len(k.lattice)}, facets = {len(k.ax_facets)}"]
    lines += [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed in {elapsed:.2f} s")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK if failed == 0 else EXIT_INVARIANT


def cmd_svg(cfg: RunConfig, point=None) -> int:
    from .svg import render_svg

    k = construct(cfg.descriptor(), cfg.tolerances)
    _emit(render_svg(k, point=point, seed=cfg.seed), cfg.out)
    return EXIT_OK


def table_row(k: Construction) -> dict:
    hist: dict[int, int] = {}
    for cone in k.fan:
        hist[len(cone.chamber_ids)] = hist.get(len(cone.chamber_ids), 0) + 1
    return {
        "group": k.rs.descriptor.label,
        "|W|": len(k.group),
        "h": k.rs.h,
        "nh/2": k.rs.num_positive,
        "|NCP|": len(k.lattice),
        "facets": len(k.ax_facets),
        "chambers/cone": " ".join(f"{c}x{v}" for c, v in sorted(hist.items())),
    }


def format_table(rows: Sequence[dict]) -> str:
    cols = list(rows[0])
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    lines = ["  ".join(c.ljust(widths[c]) for c in cols)]
    lines.append("  ".join("-" * widths[c] for c in cols))
    for r in rows:
        lines.append("  ".join(str(r[c]).ljust(widths[c]) for c in cols))
    return "\n".join(lines) + "\n"


def cmd_table(cfg: RunConfig, all_groups: bool = False) -> int:
    if all_groups:
        descs = [family_descriptor(f, n, m, guard=cfg.guard) for f, n, m in STANDARD_GROUPS]
    else:
        descs = [cfg.descriptor()]
    rows = [table_row(construct(d, cfg.tolerances)) for d in descs]
    _emit(format_table(rows), cfg.out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = _config(args)
    try:
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.from_json)
        if args.command == "svg":
            return cmd_svg(cfg, args.projection_point)
        return cmd_table(cfg, args.all)
    except ConfigurationError as exc:
        print(f"cambrian: configuration error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantFailure as exc:
        print(f"cambrian: invariant failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except CambrianError as exc:
        print(f"cambrian: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"cambrian: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``wgmesh {plan,dispersion,simulate,table,verify}``.

Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import costmodel, dispersion, sampling, simulator, verify
from .errors import ConfigurationError, DomainError
from .geometry import Disc, MeshGeometry, TorusRect, build_topology, periodic_cell


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _region(text: str):
    """``torus:W,H``, ``cells:NX,NY`` (commensurate torus) or ``disc:R``; lengths in metres."""
    kind, _, rest = text.partition(":")
    try:
        parts = [float(p) for p in rest.split(",")] if rest else []
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad region {text!r}") from None
    kind = kind.strip().lower()
    if kind == "torus" and len(parts) == 2:
        return TorusRect(*parts)
    if kind == "cells" and len(parts) == 2 and all(p == int(p) for p in parts):
        return ("cells", int(parts[0]), int(parts[1]))
    if kind == "disc" and len(parts) == 1:
        return Disc(parts[0])
    raise argparse.ArgumentTypeError(f"bad region {text!r}; use torus:W,H, cells:NX,NY or disc:R")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wgmesh", description="2D digital waveguide mesh analysis and simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="design a critically sampled round resonator")
    p.add_argument("--speed", type=_positive_float, required=True, help="wave speed c [m/s]")
    p.add_argument("--fmax", type=_positive_float, required=True, help="highest temporal frequency [Hz]")
    p.add_argument("--radius", type=_positive_float, required=True, help="resonator radius [m]")
    p.add_argument("--paper-rounding", "--rounded-lengths", dest="rounded_lengths", action="store_true",
                   help="round critical lengths to two significant digits before counting junctions")
    p.add_argument("--out", type=Path, help="write the plan JSON here instead of standard output")

    p = sub.add_parser("dispersion", help="sample a speed-ratio map to CSV")
    p.add_argument("--geometry", required=True, choices=[g.value for g in MeshGeometry])
    p.add_argument("--variant", required=True, choices=[v.value for v in dispersion.Variant])
    p.add_argument("--D", dest="D", type=_positive_float, help="waveguide length (raw variant)")
    p.add_argument("--B", dest="B", type=_positive_float, help="spatial bandwidth (critical variants)")
    p.add_argument("--res", type=int, default=64, help="grid cells per axis")
    p.add_argument("--out", type=Path, help="output CSV (default: standard output)")

    p = sub.add_parser("simulate", help="run a mesh simulation and write probe/snapshot CSVs")
    p.add_argument("--geometry", required=True, choices=[g.value for g in MeshGeometry])
    p.add_argument("--formulation", required=True, choices=["wm", "fd"])
    p.add_argument("--D", dest="D", type=_positive_float, required=True)
    p.add_argument("--region", type=_region, required=True, help="torus:W,H | cells:NX,NY | disc:R")
    p.add_argument("--boundary", choices=["periodic", "fixed-rim"])
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--excite", type=Path, help="CSV step,value (default: unit impulse at step 0)")
    p.add_argument("--excite-at", type=int, help="excited junction (default: nearest the region centre)")
    p.add_argument("--probe", type=int, nargs="*", default=None, help="probed junction indices")
    p.add_argument("--snapshot-every", type=int)
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = sub.add_parser("table", help="print the cost table")
    p.add_argument("--format", choices=["text", "csv"], default="text")

    p = sub.add_parser("verify", help="run the cross-oracle suites")
    p.add_argument("--suite", choices=verify.SUITE_NAMES, default="all")
    return parser


def _read_excitation(path: Path) -> np.ndarray:
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if rows and not rows[0][0].lstrip("-").replace(".", "", 1).isdigit():
        rows = rows[1:]
    entries = [(int(r[0]), float(r[1])) for r in rows if r]
    if any(n < 0 for n, _ in entries):
        raise DomainError("excitation steps must be non-negative")
    signal = np.zeros(max((n for n, _ in entries), default=-1) + 1)
    for n, v in entries:
        signal[n] += v
    return signal


def cmd_plan(args) -> int:
    plan = sampling.plan_resonator(sampling.MediumSpec(args.speed, args.fmax, args.radius),
                                   rounded_lengths=args.rounded_lengths)
    sys.stdout.write(plan.table())
    if args.out is not None:
        args.out.write_text(plan.to_json())
    else:
        sys.stdout.write(plan.to_json())
    return 0


def cmd_dispersion(args, parser) -> int:
    raw = args.variant == "raw"
    if raw and (args.D is None or args.B is not None):
        parser.error("the raw variant takes --D and not --B")
    if not raw and (args.B is None or args.D is not None):
        parser.error(f"the {args.variant} variant takes --B and not --D")
    m = dispersion.dispersion_map(args.geometry, args.variant, args.D if raw else args.B, args.res)
    if args.out is None:
        sys.stdout.write(m.to_csv())
    else:
        m.write_csv(args.out)
    return 0


def cmd_simulate(args) -> int:
    if args.steps < 0:
        raise DomainError("--steps must be non-negative")
    region = args.region
    if isinstance(region, tuple):
        region = periodic_cell(args.geometry, args.D, region[1], region[2])
    topo = build_topology(args.geometry, args.D, region, args.boundary)
    signal = _read_excitation(args.excite) if args.excite else np.array([1.0])
    at = topo.center_junction() if args.excite_at is None else args.excite_at
    probes = [at] if args.probe is None else args.probe
    result = simulator.run(simulator.rest_state(topo, args.formulation), args.steps, probes,
                           [simulator.Excitation(at, signal)], args.snapshot_every)
    args.out.mkdir(parents=True, exist_ok=True)
    topo.write_text(args.out / "topology.txt")
    for series in result.probes:
        series.write_csv(args.out / f"probe_{series.junction_index}.csv")
    for n, values in sorted(result.snapshots.items()):
        simulator.write_snapshot(args.out, n, topo, values)
    return 0


def cmd_table(args) -> int:
    sys.stdout.write(costmodel.format_table(fmt=args.format))
    return 0


def cmd_verify(args) -> int:
    checks = verify.run_suite(args.suite)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    for c in failed:
        print(f"failed: {c.name}", file=sys.stderr)
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "plan":
            return cmd_plan(args)
        if args.command == "dispersion":
            return cmd_dispersion(args, parser)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "table":
            return cmd_table(args)
        return cmd_verify(args)
    except (DomainError, ConfigurationError, OSError) as exc:
        print(f"wgmesh {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

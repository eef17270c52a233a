"""Command-line surface.

Subcommands: simulate, recover-topology, recover-potential, oracle-spectrum,
compare, verify, emit-plot-data. All inputs are JSON descriptors, all file
outputs use fixed 17-significant-digit formatting, and every error family
maps to its own exit code (listed in ``--help``).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .characteristic import SampleGridSpec, sample_phi
from .errors import (
    AmbiguousSolution,
    ConfigParseError,
    DegenerateGrid,
    EigensolverFailure,
    FingerprintMismatch,
    FrozenStarError,
    GridMismatch,
    InvalidGeometry,
    MaxItersExceeded,
    MeshTooCoarse,
    NonPositiveReciprocal,
    RankDeficient,
)
from .fd_oracle import assemble, compare_phi_zeros, spectrum
from .recovery import (
    GaussNewtonOptions,
    PotentialRecoveryProblem,
    TopologyOptions,
    TopologyRecoveryProblem,
    recover_angles,
    recover_chords,
    recover_potentials,
)
from .serialization import (
    parse_config,
    report_to_json,
    samples_from_json,
    samples_to_csv,
    samples_to_json,
    spectrum_from_json,
    spectrum_to_csv,
    spectrum_to_json,
    zero_table_to_csv,
)
from .verification import has_failures, run_verification

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_GRID = 4
EXIT_FINGERPRINT = 5
EXIT_SOLVER = 6
EXIT_VERIFY = 7
EXIT_GEOMETRY = 8
EXIT_MESH = 9
EXIT_DOMAIN = 10

_EXIT_DOC = """exit codes:
  0   success
  2   malformed config / grid spec / sample file
  3   file system error
  4   grid mismatch or degenerate grid
  5   observed samples incompatible with declared knowns
  6   solver failure (rank deficiency, non-convergence, eigensolver)
  7   verification property failed
  8   invalid geometry
  9   finite-difference mesh too coarse
  10  other domain errors
"""


def _load_config(args):
    path = Path(args.config)
    if not path.exists():
        raise FileNotFoundError(f"config file {path} does not exist")
    data = json.loads(path.read_text())
    if not isinstance(data, dict):
        raise ConfigParseError("config root must be a JSON object")
    if getattr(args, "mode", None):
        data["mode"] = args.mode
    if getattr(args, "order", None):
        data["N"] = args.order
    return parse_config(data)


def _parse_grid(text: str) -> SampleGridSpec:
    parts = text.split(":")
    kind = parts[0]
    allow = parts[-1] == "allow"
    if allow:
        parts = parts[:-1]
    try:
        if kind == "integers":
            return SampleGridSpec(kind="integers", count=int(parts[1]))
        if kind == "edge-resonant":
            return SampleGridSpec(kind="edge-resonant", edge=int(parts[1]), count=int(parts[2]))
        if kind == "zero-set":
            return SampleGridSpec(kind="zero-set", edge=int(parts[1]), z_max=float(parts[2]))
        if kind == "custom":
            src = parts[1]
            try:
                is_file = Path(src).exists()
            except OSError:  # inline point lists can exceed filename limits
                is_file = False
            if is_file:
                raw = json.loads(Path(src).read_text())
                pts = tuple(complex(v) if isinstance(v, (int, float)) else complex(v[0], v[1]) for v in raw)
            else:
                pts = tuple(complex(tok) for tok in src.split(","))
            return SampleGridSpec(kind="custom", points=pts, allow_pole_windows=allow)
        if kind == "linspace":
            a, b, n = (tok for tok in parts[1].split(","))
            pts = tuple(np.linspace(float(a), float(b), int(n)).astype(complex))
            return SampleGridSpec(kind="custom", points=pts, allow_pole_windows=True)
    except (IndexError, ValueError) as exc:
        raise ConfigParseError(f"cannot parse grid spec {text!r}: {exc}") from exc
    raise ConfigParseError(f"unknown grid kind {kind!r}")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, newline="")


def cmd_simulate(args) -> int:
    parsed = _load_config(args)
    cfg = parsed.model_config()
    samples = sample_phi(cfg, _parse_grid(args.grid))
    fmt = args.format or ("csv" if args.out.endswith(".csv") else "json")
    _write(args.out, samples_to_csv(samples) if fmt == "csv" else samples_to_json(samples))
    print(f"simulated {len(samples)} samples -> {args.out}")
    return EXIT_OK


def cmd_recover_topology(args) -> int:
    parsed = _load_config(args)
    observed = samples_from_json(args.observed)
    problem = TopologyRecoveryProblem(
        lengths=parsed.lengths,
        potentials=parsed.potentials,
        observed=observed,
        pole_eps=parsed.pole_eps,
        options=TopologyOptions(method=args.method, closure_tol=args.tolerance),
    )
    report = recover_angles(problem) if parsed.m >= 3 else recover_chords(problem)
    _write(args.out, report_to_json(report))
    print(f"topology recovery: status={report.status}, residual={report.residual_norm:.3e} -> {args.out}")
    return EXIT_OK if report.status == "ok" else EXIT_SOLVER


def cmd_recover_potential(args) -> int:
    parsed = _load_config(args)
    observed = samples_from_json(args.observed)
    problem = PotentialRecoveryProblem(
        lengths=parsed.lengths,
        chords=parsed.extension().chords,
        observed=observed,
        order=args.order or parsed.order,
        pole_eps=parsed.pole_eps,
        options=GaussNewtonOptions(),
    )
    report = recover_potentials(problem)
    _write(args.out, report_to_json(report))
    print(
        f"potential recovery: status={report.status}, iterations={report.iterations}, "
        f"residual={report.residual_norm:.3e} -> {args.out}"
    )
    return EXIT_OK if report.status == "ok" else EXIT_SOLVER


def cmd_oracle_spectrum(args) -> int:
    parsed = _load_config(args)
    cfg = parsed.model_config()
    spec = spectrum(assemble(cfg, args.h), args.count, h=args.h)
    fmt = args.format or ("csv" if args.out.endswith(".csv") else "json")
    _write(args.out, spectrum_to_csv(spec) if fmt == "csv" else spectrum_to_json(spec))
    print(f"oracle spectrum ({args.count} eigenvalues, h={args.h:.4g}) -> {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    parsed = _load_config(args)
    cfg = parsed.model_config()
    if args.spectrum:
        oracle = spectrum_from_json(args.spectrum)
    else:
        oracle = spectrum(assemble(cfg, args.h), args.count, h=args.h)
    lo, hi = (float(tok) for tok in args.z_range.split(","))
    table = compare_phi_zeros(cfg, oracle, (lo, hi))
    _write(args.out, zero_table_to_csv(table))
    print(f"located {len(table)} real zeros on [{lo:g}, {hi:g}] -> {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    parsed = _load_config(args)
    results = run_verification(parsed, closure_tol=args.tolerance if args.tolerance else 1e-9)
    for r in results:
        print(f"{r.status:4s} {r.name}: {r.detail}")
    if args.out:
        doc = {"results": [r.to_dict() for r in results]}
        _write(args.out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    n_fail = sum(r.status == "FAIL" for r in results)
    n_skip = sum(r.status == "SKIP" for r in results)
    print(f"verify: {len(results) - n_fail - n_skip} passed, {n_fail} failed, {n_skip} skipped")
    return EXIT_VERIFY if has_failures(results) else EXIT_OK


def cmd_emit_plot_data(args) -> int:
    parsed = _load_config(args)
    cfg = parsed.model_config()
    lo, hi = (float(tok) for tok in args.z_range.split(","))
    grid = np.linspace(lo, hi, args.points).astype(np.complex128)
    spec = SampleGridSpec(kind="custom", points=tuple(grid), allow_pole_windows=True)
    samples = sample_phi(cfg, spec)
    _write(args.out, samples_to_csv(samples))
    print(f"emitted {args.points} plot samples -> {args.out}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frozenstar",
        description="Forward and inverse toolkit for frozen-argument operators on star graphs.",
        epilog=_EXIT_DOC,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"frozenstar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, observed=False, grid=False):
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", required=True, help="output file path")
        p.add_argument("--mode", choices=("verbatim", "normalized"), help="override config mode")
        p.add_argument("--N", dest="order", type=int, help="override truncation order")
        if observed:
            p.add_argument("--observed", required=True, help="observed phi-samples JSON")
        if grid:
            p.add_argument(
                "--grid",
                required=True,
                help="grid spec: integers:N | edge-resonant:J:N | zero-set:J:ZMAX | "
                "custom:FILE|z1,z2,..[:allow] | linspace:A,B,N",
            )

    p = sub.add_parser("simulate", help="sample the characteristic function")
    add_common(p, grid=True)
    p.add_argument("--format", choices=("csv", "json"), help="output format (default from extension)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("recover-topology", help="recover chords and angles from samples")
    add_common(p, observed=True)
    p.add_argument("--method", choices=("lstsq", "parity"), default="lstsq")
    p.add_argument("--tolerance", type=float, default=1e-6, help="closure tolerance")
    p.set_defaults(func=cmd_recover_topology)

    p = sub.add_parser("recover-potential", help="recover potential coefficients from samples")
    add_common(p, observed=True)
    p.set_defaults(func=cmd_recover_potential)

    p = sub.add_parser("oracle-spectrum", help="finite-difference eigenvalues")
    add_common(p)
    p.add_argument("--h", type=float, required=True, help="target mesh step")
    p.add_argument("--count", type=int, default=10, help="number of eigenvalues")
    p.add_argument("--format", choices=("csv", "json"))
    p.set_defaults(func=cmd_oracle_spectrum)

    p = sub.add_parser("compare", help="tabulate real zeros of Phi against oracle eigenvalues")
    add_common(p)
    p.add_argument("--spectrum", help="oracle-spectrum JSON (computed if omitted)")
    p.add_argument("--h", type=float, default=np.pi / 200, help="mesh step when computing the oracle")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--z-range", required=True, help="real interval as A,B")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the property suite on a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="optional JSON result path")
    p.add_argument("--mode", choices=("verbatim", "normalized"))
    p.add_argument("--N", dest="order", type=int)
    p.add_argument("--tolerance", type=float, help="closure tolerance (default 1e-9)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("emit-plot-data", help="dense CSV of Phi on a real interval")
    add_common(p)
    p.add_argument("--z-range", required=True, help="real interval as A,B")
    p.add_argument("--points", type=int, default=500)
    p.set_defaults(func=cmd_emit_plot_data)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigParseError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FileNotFoundError, PermissionError, IsADirectoryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (GridMismatch, DegenerateGrid) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRID
    except FingerprintMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINGERPRINT
    except (RankDeficient, NonPositiveReciprocal, AmbiguousSolution, MaxItersExceeded, EigensolverFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except MeshTooCoarse as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MESH
    except InvalidGeometry as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (FrozenStarError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

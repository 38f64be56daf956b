"""Command-line interface: simulate, estimate, benchmark.

CSV trajectory schema: a required header row naming the columns, optional
``# key=value`` comment lines before it, and one sample per row. Velocity
logs carry columns (xdot, ydot, psi), ground-speed logs (vg, psi); a
``t`` column is accepted and ignored. Headings are radians unless
``--psi-degrees`` is given. Estimation results are emitted as JSON on
stdout so downstream tools can consume them.

Exit codes: 0 success, 2 bad input or flags, 3 estimator failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, bench, circlefit, est_vg, est_xy, quadfit, ransac
from .angles import TWO_PI
from .errors import FlowfitError
from .model import (
    Dataset,
    FlowParams,
    KIND_GROUND_SPEED,
    KIND_VELOCITY,
    Polytope,
    forward_ground_speed,
    simulate,
    to_ground_speed,
)

JSON_SCHEMA_VERSION = 1

_FLOAT_FMT = "{:.9g}"


def _fmt(x: float) -> str:
    return _FLOAT_FMT.format(float(x))


# ---------------------------------------------------------------------------
# CSV I/O


def write_dataset_csv(d: Dataset, fp, meta_lines: dict | None = None) -> None:
    """Write a dataset with optional ``# key=value`` comment header."""
    for key, value in (meta_lines or {}).items():
        fp.write(f"# {key}={value}\n")
    if d.kind == KIND_VELOCITY:
        fp.write("xdot,ydot,psi\n")
        for x, y, p in zip(d.xdot, d.ydot, d.psi):
            fp.write(f"{_fmt(x)},{_fmt(y)},{_fmt(p)}\n")
    else:
        fp.write("vg,psi\n")
        for g, p in zip(d.vg, d.psi):
            fp.write(f"{_fmt(g)},{_fmt(p)}\n")


def read_dataset_csv(path, psi_degrees: bool = False) -> Dataset:
    """Parse a trajectory CSV into a Dataset.

    The kind is inferred from the header: (xdot, ydot) columns give a
    velocity dataset, a vg column a ground-speed one. Raises ValueError
    with line numbers for malformed or non-finite rows.
    """
    header = None
    rows = []
    row_lines = []
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, raw in enumerate(fp, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = [c.strip().lower() for c in line.split(",")]
                continue
            rows.append(line.split(","))
            row_lines.append(lineno)
    if header is None:
        raise ValueError(f"{path}: missing header row")

    cols = {name: i for i, name in enumerate(header)}
    if "psi" not in cols:
        raise ValueError(f"{path}: no 'psi' column in header {header}")
    if "xdot" in cols and "ydot" in cols:
        kind, needed = KIND_VELOCITY, ("xdot", "ydot", "psi")
    elif "vg" in cols:
        kind, needed = KIND_GROUND_SPEED, ("vg", "psi")
    else:
        raise ValueError(
            f"{path}: header must contain xdot,ydot,psi or vg,psi (got {header})"
        )

    data = {name: [] for name in needed}
    bad_lines = []
    for line_no, parts in zip(row_lines, rows):
        if len(parts) != len(header):
            bad_lines.append(line_no)
            continue
        try:
            values = {name: float(parts[cols[name]]) for name in needed}
        except ValueError:
            bad_lines.append(line_no)
            continue
        if not all(np.isfinite(v) for v in values.values()):
            bad_lines.append(line_no)
            continue
        for name in needed:
            data[name].append(values[name])
    if bad_lines:
        shown = ", ".join(str(n) for n in bad_lines[:10])
        more = "" if len(bad_lines) <= 10 else f" (+{len(bad_lines) - 10} more)"
        raise ValueError(f"{path}: malformed or non-finite rows at lines {shown}{more}")
    if not rows:
        raise ValueError(f"{path}: no data rows")

    psi = np.array(data["psi"])
    if psi_degrees:
        psi = np.radians(psi)
    if kind == KIND_VELOCITY:
        return Dataset.velocity(data["xdot"], data["ydot"], psi)
    return Dataset.ground_speed(data["vg"], psi)


# ---------------------------------------------------------------------------
# helpers


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy % (2**32))


def _error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    try:
        params = FlowParams(args.v, args.w, args.theta)
    except ValueError as exc:
        return _error(str(exc))
    seed = args.seed if args.seed is not None else _fresh_seed()
    try:
        d = simulate(
            params,
            args.n,
            args.delta_psi,
            args.sigma,
            args.sigma_psi,
            psi0=args.psi0,
            seed=seed,
        )
    except ValueError as exc:
        return _error(str(exc))

    meta = {
        "generator": f"flowfit-simulate {__version__}",
        "v": _fmt(params.v),
        "w": _fmt(params.w),
        "theta": _fmt(params.theta),
        "n": args.n,
        "delta_psi": _fmt(args.delta_psi),
        "sigma": _fmt(args.sigma),
        "sigma_psi": _fmt(args.sigma_psi),
        "psi0": _fmt(args.psi0),
        "seed": seed,
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fp:
            write_dataset_csv(d, fp, meta)
    else:
        write_dataset_csv(d, sys.stdout, meta)
    return 0


# ---------------------------------------------------------------------------
# estimate

_VELOCITY_METHODS = ("circle", "opt-xy")
_RANSAC_METHODS = ("opt-xy", "opt-vg")


def _prepare_dataset(method: str, d: Dataset) -> Dataset:
    if method in _VELOCITY_METHODS:
        if d.kind != KIND_VELOCITY:
            raise ValueError(
                f"method {method} needs velocity components (xdot, ydot)"
            )
        return d
    return d if d.kind == KIND_GROUND_SPEED else to_ground_speed(d)


def cmd_estimate(args) -> int:
    try:
        d = read_dataset_csv(args.input, psi_degrees=args.psi_degrees)
        data = _prepare_dataset(args.method, d)
        if args.vmin >= args.vmax:
            raise ValueError(f"--vmin {args.vmin} must be below --vmax {args.vmax}")
        poly = Polytope(args.vmin, args.vmax)
        if args.ransac and args.method not in _RANSAC_METHODS:
            raise ValueError(
                f"--ransac supports methods {', '.join(_RANSAC_METHODS)} only"
            )
    except (OSError, ValueError) as exc:
        return _error(str(exc))

    seed = args.seed if args.seed is not None else _fresh_seed()
    try:
        if args.ransac:
            estimator = est_xy.estimate if args.method == "opt-xy" else est_vg.estimate
            report = ransac.robust_estimate(
                data, estimator, ransac.RansacConfig(seed=seed), poly
            )
        elif args.method == "circle":
            report = circlefit.fit(data)
        elif args.method == "quad":
            report = quadfit.fit(data, lam=args.lam)
        elif args.method == "opt-xy":
            report = est_xy.estimate(data, poly)
        else:
            report = est_vg.estimate(data, poly)
    except FlowfitError as exc:
        print(f"estimation failed ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3

    p = report.params
    out = {
        "schema_version": JSON_SCHEMA_VERSION,
        "method": args.method,
        "v_hat": p.v,
        "w_hat": p.w,
        "theta_hat_rad": p.theta,
        "theta_hat_deg": float(np.degrees(p.theta)),
        "cost": report.cost,
        "n_used": report.n_used,
        "n_excluded": report.n_excluded,
        "diagnostics": _jsonable(
            dict(report.diagnostics, converged=report.converged,
                 iterations=report.iterations)
        ),
    }
    if args.ransac:
        out["inlier_fraction"] = report.inlier_fraction
        out["seed"] = seed
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")

    if args.curve_out:
        grid = np.linspace(0.0, TWO_PI, 360, endpoint=False)
        curve = forward_ground_speed(p, grid)
        with open(args.curve_out, "w", encoding="utf-8") as fp:
            fp.write("psi,vg\n")
            for g, c in zip(grid, curve):
                fp.write(f"{_fmt(g)},{_fmt(c)}\n")
    return 0


# ---------------------------------------------------------------------------
# benchmark


def _load_bench_config(path, seed) -> bench.BenchConfig:
    raw = {}
    if path:
        with open(path, "r", encoding="utf-8") as fp:
            raw = json.load(fp)
        unknown = set(raw) - {"sigmas", "spans", "trials", "n", "v_min", "v_max", "seed"}
        if unknown:
            raise ValueError(f"unknown benchmark config keys: {sorted(unknown)}")
    poly = Polytope(raw.get("v_min", 0.5), raw.get("v_max", 5.0))
    cfg_seed = seed if seed is not None else raw.get("seed")
    if cfg_seed is None:
        cfg_seed = _fresh_seed()
    return bench.BenchConfig(
        sigmas=tuple(raw.get("sigmas", (0.01, 0.05, 0.10))),
        spans=tuple(raw.get("spans", (TWO_PI, 1.5 * np.pi, np.pi))),
        trials=int(raw.get("trials", 250)),
        n=int(raw.get("n", 100)),
        poly=poly,
        seed=int(cfg_seed),
    )


def cmd_benchmark(args) -> int:
    try:
        cfg = _load_bench_config(args.config, args.seed)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        return _error(str(exc))

    print(f"[bench] seed={cfg.seed}", file=sys.stderr, flush=True)
    result = bench.run(cfg, progress=True)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary_path = out_dir / "bench_summary.csv"
    detail_path = out_dir / "bench_detail.json"
    with open(summary_path, "w", encoding="utf-8") as fp:
        result.write_summary_csv(fp)
    with open(detail_path, "w", encoding="utf-8") as fp:
        result.write_detail_json(fp)
    print(f"[bench] wrote {summary_path} and {detail_path}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowfit",
        description="Estimate a steady uniform flow-field from heading-change maneuvers.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a synthetic maneuver CSV")
    sim.add_argument("--v", type=float, required=True, help="flow-relative speed, m/s")
    sim.add_argument("--w", type=float, required=True, help="current magnitude, m/s")
    sim.add_argument("--theta", type=float, required=True, help="current direction, rad")
    sim.add_argument("--n", type=int, default=100, help="number of samples")
    sim.add_argument(
        "--delta-psi", type=float, default=TWO_PI, help="heading span, rad (0, 2pi]"
    )
    sim.add_argument("--sigma", type=float, default=0.0, help="velocity noise std, m/s")
    sim.add_argument(
        "--sigma-psi", type=float, default=0.0, help="heading noise std, rad"
    )
    sim.add_argument("--psi0", type=float, default=0.0, help="initial heading, rad")
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--out", type=str, default=None, help="output CSV (default stdout)")
    sim.set_defaults(func=cmd_simulate)

    est = sub.add_parser("estimate", help="run an estimator on a trajectory CSV")
    est.add_argument(
        "--method", required=True, choices=["circle", "quad", "opt-xy", "opt-vg"]
    )
    est.add_argument("--input", required=True, help="trajectory CSV path")
    est.add_argument("--vmin", type=float, default=0.5, help="lower speed bound, m/s")
    est.add_argument("--vmax", type=float, default=5.0, help="upper speed bound, m/s")
    est.add_argument("--ransac", action="store_true", help="robust consensus wrapper")
    est.add_argument(
        "--lambda", dest="lam", type=float, default=quadfit.DEFAULT_LAMBDA,
        help="quad window half-width, rad",
    )
    est.add_argument(
        "--psi-degrees", action="store_true", help="input psi column is in degrees"
    )
    est.add_argument("--seed", type=int, default=None)
    est.add_argument(
        "--curve-out", type=str, default=None,
        help="write fitted ground-speed curve CSV (360 points)",
    )
    est.set_defaults(func=cmd_estimate)

    ben = sub.add_parser("benchmark", help="run the Monte Carlo comparison")
    ben.add_argument("--config", type=str, default=None, help="JSON config file")
    ben.add_argument("--seed", type=int, default=None)
    ben.add_argument("--out-dir", type=str, default=".", help="output directory")
    ben.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

"""Command-line front end.

    dividend-opt validate CONFIG
    dividend-opt barrier  CONFIG [--dx --xmax --out DIR]
    dividend-opt tables   --which N [--out DIR --dx --xmax]
    dividend-opt verify   CONFIG [--barrier LEVEL --dx --xmax --out DIR]
    dividend-opt simulate CONFIG --x X --paths N --seed S --horizon H
                          [--barrier LEVEL | --barrier-file barrier_dir]
                          [--out DIR]

Exit codes: 0 success, 1 verification verdict negative, 2 validation
failure, 3 numerical failure, 64 usage error.  All file outputs are
written atomically (temporary name, then rename) and listed in a run
manifest next to them.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import os
import sys
import tempfile
import time

from . import __version__
from .barrier import barrier_solution_at
from .errors import ConfigError, DividendOptError, ModelValidationError, NumericsError
from .grid import GridFunction
from .hjb import verify_optimality
from .model import params_from_json, validate_model
from .simulate import (SimulationConfig, simulate_gerber_shiu, simulate_value)
from .tables import DEFAULT_DX, SWEEPS, default_x_max, locate_barrier, run_sweep, sweep_csv

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_VALIDATION = 2
EXIT_NUMERICS = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _manifest(out_dir: str, command: str, config_digest: str, outputs, t0: float):
    doc = {
        "command": command,
        "config_digest": config_digest,
        "tool_version": __version__,
        "outputs": sorted(outputs),
        "wall_time": time.time() - t0,
    }
    path = os.path.join(out_dir, "manifest.json")
    _atomic_write(path, json.dumps(doc, indent=2) + "\n")
    return path


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_params(path: str):
    params = params_from_json(path)
    report = validate_model(params)
    if not report.passed:
        raise ModelValidationError("model validation failed: "
                                   + "; ".join(report.reasons))
    return params


# ---------------------------------------------------------------------------
# subcommands


def _cmd_validate(args) -> int:
    params = params_from_json(args.config)
    report = validate_model(params)
    text = _dump_json(report.to_dict())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _atomic_write(os.path.join(args.out, "validation.json"), text)
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _cmd_barrier(args) -> int:
    t0 = time.time()
    params = _load_params(args.config)
    scale, sol = locate_barrier(params, dx=args.dx, x_max=args.xmax)
    os.makedirs(args.out, exist_ok=True)
    outputs = []

    doc = sol.to_dict()
    doc["stable_coefficient"] = scale.stable_coefficient
    doc["domain_end"] = scale.domain_end
    doc["diagnostics"] = scale.diagnostics
    p = os.path.join(args.out, "barrier.json")
    _atomic_write(p, _dump_json(doc))
    outputs.append(p)
    p = os.path.join(args.out, "h_profile.csv")
    _atomic_write(p, sol.h_profile.to_csv_string())
    outputs.append(p)
    p = os.path.join(args.out, "v_curve.csv")
    _atomic_write(p, sol.v.to_csv_string())
    outputs.append(p)
    outputs.append(_manifest(args.out, "barrier", _digest(args.config), outputs, t0))
    sys.stdout.write(f"a_star = {sol.a_star:.6f}  (v(a*) = {sol.v_at_barrier:.6f})\n")
    return EXIT_OK


def _cmd_tables(args) -> int:
    t0 = time.time()
    os.makedirs(args.out, exist_ok=True)
    which = sorted(SWEEPS) if args.which is None else [args.which]
    outputs = []
    for w in which:
        rows = run_sweep(w, dx=args.dx, x_max=args.xmax)
        p = os.path.join(args.out, f"table{w}.csv")
        _atomic_write(p, sweep_csv(rows))
        outputs.append(p)
        worst = max((r[3] for r in rows if not math.isnan(r[3])), default=math.nan)
        sys.stdout.write(f"table {w}: max |a_star - ref| = {worst:.3f}\n")
    outputs.append(_manifest(args.out, "tables", "", outputs, t0))
    return EXIT_OK


def _cmd_verify(args) -> int:
    t0 = time.time()
    params = _load_params(args.config)
    if args.barrier is not None:
        x_max = args.xmax
        if x_max is None:
            x_max = max(default_x_max(params),
                        args.barrier + 10.0 * params.claim.mean())
        from .scale import solve_scale

        scale = solve_scale(params, args.dx, x_max)
        sol = barrier_solution_at(scale, args.barrier)
    else:
        scale, sol = locate_barrier(params, dx=args.dx, x_max=args.xmax)
    report = verify_optimality(sol, params)
    os.makedirs(args.out, exist_ok=True)
    outputs = []
    p = os.path.join(args.out, "optimality.json")
    _atomic_write(p, _dump_json(report.to_dict()))
    outputs.append(p)
    p = os.path.join(args.out, "residual_profile.csv")
    _atomic_write(p, report.residual_profile.to_csv_string())
    outputs.append(p)
    outputs.append(_manifest(args.out, "verify", _digest(args.config), outputs, t0))
    verdict = "optimal" if report.necessary_sufficient_pass else "NOT optimal"
    sys.stdout.write(f"barrier {report.barrier:.6f}: {verdict} "
                     f"(max residual above = {report.max_residual_above:.3e})\n")
    return EXIT_OK if report.necessary_sufficient_pass else EXIT_VERDICT


def _cmd_simulate(args) -> int:
    t0 = time.time()
    if args.paths <= 0:
        raise UsageError("--paths must be a positive integer")
    if args.horizon <= 0:
        raise UsageError("--horizon must be positive")
    params = _load_params(args.config)

    barrier = args.barrier
    v_curve = None
    if args.barrier_file:
        bdoc = json.load(open(os.path.join(args.barrier_file, "barrier.json"),
                              encoding="utf-8"))
        barrier = bdoc["a_star"]
        vpath = os.path.join(args.barrier_file, "v_curve.csv")
        if os.path.exists(vpath):
            v_curve = GridFunction.from_csv(vpath)

    config = SimulationConfig(paths=args.paths, horizon=args.horizon,
                              seed=args.seed, worker_streams=args.workers,
                              barrier=barrier)
    if barrier is not None:
        est = simulate_value(params, args.x, config)
    else:
        est = simulate_gerber_shiu(params, args.x,
                                   dataclasses.replace(config, barrier=None))
    doc = est.to_dict()
    if v_curve is not None:
        analytic = float(v_curve(min(args.x, v_curve.x_end)))
        if args.x > v_curve.x_end:  # linear continuation past the stored grid
            analytic += args.x - v_curve.x_end
        z = (est.mean - analytic) / est.std_error if est.std_error > 0 else math.inf
        doc["comparison"] = {"analytic": analytic, "z_score": z}
    os.makedirs(args.out, exist_ok=True)
    outputs = []
    p = os.path.join(args.out, "estimate.json")
    _atomic_write(p, _dump_json(doc))
    outputs.append(p)
    outputs.append(_manifest(args.out, "simulate", _digest(args.config), outputs, t0))
    sys.stdout.write(f"mean = {est.mean:.6f} +- {est.std_error:.6f} "
                     f"(ruin fraction {est.ruin_fraction:.4f})\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="dividend-opt",
                     description="Optimal dividend barriers for surplus-dependent "
                                 "premium risk processes")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("validate", help="check a model configuration")
    pv.add_argument("config")
    pv.add_argument("--out", default=None)
    pv.set_defaults(fn=_cmd_validate)

    pb = sub.add_parser("barrier", help="locate the optimal barrier")
    pb.add_argument("config")
    pb.add_argument("--dx", type=float, default=DEFAULT_DX)
    pb.add_argument("--xmax", type=float, default=None)
    pb.add_argument("--out", default="out")
    pb.set_defaults(fn=_cmd_barrier)

    pt = sub.add_parser("tables", help="run the built-in reference sweeps")
    pt.add_argument("--which", type=int, choices=sorted(SWEEPS), default=None)
    pt.add_argument("--dx", type=float, default=DEFAULT_DX)
    pt.add_argument("--xmax", type=float, default=None)
    pt.add_argument("--out", default="out")
    pt.set_defaults(fn=_cmd_tables)

    pw = sub.add_parser("verify", help="verify barrier optimality (HJB)")
    pw.add_argument("config")
    pw.add_argument("--barrier", type=float, default=None,
                    help="check this barrier level instead of the located one")
    pw.add_argument("--dx", type=float, default=DEFAULT_DX)
    pw.add_argument("--xmax", type=float, default=None)
    pw.add_argument("--out", default="out")
    pw.set_defaults(fn=_cmd_verify)

    ps = sub.add_parser("simulate", help="Monte-Carlo estimate of the value")
    ps.add_argument("config")
    ps.add_argument("--x", type=float, required=True)
    ps.add_argument("--paths", type=int, required=True)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--horizon", type=float, required=True)
    ps.add_argument("--barrier", type=float, default=None)
    ps.add_argument("--barrier-file", default=None,
                    help="directory produced by 'barrier'; supplies the level "
                         "and an analytic comparison")
    ps.add_argument("--workers", type=int, default=1)
    ps.add_argument("--out", default="out")
    ps.set_defaults(fn=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ModelValidationError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericsError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except DividendOptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface: ``brick-template {stiffness,verify,bending,optimize}``.

Exit codes: 0 success, 1 computation or verification failure, 2 usage or
configuration error.  ``--config file.json`` supplies defaults using the
same keys as the long flags (dashes become underscores); explicit flags win.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from dataclasses import dataclass

import numpy as np

from .bending import KINDS, PLANES, aspect_sweep, parse_plane
from .decomposition import decompose
from .errors import BrickTemplateError, InvalidGeometryError, SingularMaterialError
from .geometry import BrickGeometry, IsotropicMaterial
from .serialization import FORMATS, atomic_write, serialize_matrix
from .template import BendingObjective, optimize, templated_stiffness
from .verification import all_passed, run_checks

MATRICES = ("A", "Fbeta", "Sbeta", "Ksigma", "Kb", "Kh", "L", "Hh", "W", "Grc", "X", "R")

DEFAULTS = {
    "a": 1.0,
    "b": 1.0,
    "c": 1.0,
    "youngs": 1.0,
    "poisson": 0.3,
    "output": None,
    "deterministic": False,
    "matrix": "Ksigma",
    "format": "csv",
    "plane": "xy",
    "sweep": "1:10:1",
    "kind": "full",
    "budget": 2000,
    "seed": 0,
    "samples": "1,2,4,8",
    "poissons": "0,0.3",
    "planes": ",".join(PLANES),
    "gamma": None,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    geometry: BrickGeometry
    material: IsotropicMaterial
    options: dict


def _matrix_name(value: str) -> str:
    for name in MATRICES:
        if value.lower() == name.lower():
            return name
    raise UsageError(f"unknown matrix {value!r}; expected one of {', '.join(MATRICES)}")


def _float_list(text, what: str) -> list:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"malformed {what}: {text!r}") from None


def parse_sweep(text: str) -> list:
    """``start:stop:step`` inclusive of ``stop``."""
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"malformed sweep {text!r}; expected start:stop:step") from None
    if not (step > 0 and start > 0 and stop >= start):
        raise UsageError(f"empty or invalid sweep range {text!r}")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default option values")
    common.add_argument("--a", type=float, help="edge length along x")
    common.add_argument("--b", type=float, help="edge length along y")
    common.add_argument("--c", type=float, help="edge length along z")
    common.add_argument("--youngs", type=float, help="Young's modulus")
    common.add_argument("--poisson", type=float, help="Poisson ratio")
    common.add_argument("--output", help="output path (default: stdout)")
    common.add_argument("--deterministic", action="store_true", default=None, help="suppress timestamps")

    parser = argparse.ArgumentParser(prog="brick-template", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stiffness", parents=[common], help="write one element matrix")
    p.add_argument("--matrix", help=f"one of {', '.join(MATRICES)} (case-insensitive)")
    p.add_argument("--format", choices=FORMATS)

    sub.add_parser("verify", parents=[common], help="run the invariant suite")

    p = sub.add_parser("bending", parents=[common], help="aspect-ratio sweep of bending energy ratios")
    p.add_argument("--plane", choices=PLANES)
    p.add_argument("--sweep", help="start:stop:step aspect ratios, stop inclusive")
    p.add_argument("--kind", choices=KINDS + ("higher-order",))

    p = sub.add_parser("optimize", parents=[common], help="tune template parameters")
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", help="comma-separated aspect ratios")
    p.add_argument("--poissons", help="comma-separated Poisson ratios")
    p.add_argument("--planes", help="comma-separated bending planes")
    p.add_argument("--gamma", help="comma-separated initial parameters (12 values)")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    opts = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                file_opts = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(file_opts, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(file_opts) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        opts.update(file_opts)
    for key, value in vars(args).items():
        if key in DEFAULTS and value is not None:
            opts[key] = value
    try:
        g = BrickGeometry(float(opts["a"]), float(opts["b"]), float(opts["c"]))
        m = IsotropicMaterial(float(opts["youngs"]), float(opts["poisson"]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (InvalidGeometryError, SingularMaterialError)):
            raise UsageError(str(exc)) from None
        raise UsageError(f"invalid numeric option: {exc}") from None
    return RunConfig(g, m, opts)


def _emit(data: bytes, path) -> None:
    if path:
        atomic_write(path, data)
    else:
        sys.stdout.write(data.decode())
        sys.stdout.flush()


def select_matrix(name: str, g: BrickGeometry, m: IsotropicMaterial) -> np.ndarray:
    dec = decompose(g, m)
    el = dec.element
    return {
        "A": el.A,
        "Fbeta": el.F,
        "Sbeta": el.S,
        "Ksigma": el.K,
        "Kb": dec.Kb,
        "Kh": dec.Kh,
        "L": dec.L,
        "Hh": dec.Hh,
        "W": dec.W,
        "Grc": dec.Grc,
        "X": dec.X,
        "R": dec.R,
    }[name]


def cmd_stiffness(cfg: RunConfig) -> int:
    name = _matrix_name(cfg.options["matrix"])
    fmt = cfg.options["format"]
    if fmt not in FORMATS:
        raise UsageError(f"unknown format {fmt!r}")
    M = select_matrix(name, cfg.geometry, cfg.material)
    _emit(serialize_matrix(M, name, fmt), cfg.options["output"])
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    checks = run_checks(cfg.geometry, cfg.material)
    text = "".join(c.line + "\n" for c in checks)
    _emit(text.encode(), cfg.options["output"])
    failed = [c for c in checks if not c.passed]
    if failed:
        print(f"error: invariant {failed[0].name} failed: {failed[0].line}", file=sys.stderr)
        return 1
    return 0


def cmd_bending(cfg: RunConfig) -> int:
    opts = cfg.options
    ratios = parse_sweep(str(opts["sweep"]))
    kind = str(opts["kind"]).replace("-", "_")
    if kind not in KINDS:
        raise UsageError(f"unknown stiffness kind {opts['kind']!r}")
    try:
        plane = parse_plane(opts["plane"])
    except BrickTemplateError as exc:
        raise UsageError(str(exc)) from None
    table = aspect_sweep(cfg.geometry, plane, cfg.material.poisson, kind, ratios, youngs=cfg.material.youngs)
    lines = ["aspect_ratio,poisson,stiffness_kind,plane,energy_ratio"]
    for row in table.rows:
        lines.append(
            f"{row.aspect_ratio:.12g},{row.poisson:.12g},{row.kind},{row.plane},{row.ratio:.12g}"
        )
    _emit(("\n".join(lines) + "\n").encode(), opts["output"])
    return 0


def cmd_optimize(cfg: RunConfig) -> int:
    opts = cfg.options
    budget = int(opts["budget"])
    if budget < 1:
        raise UsageError(f"budget must be >= 1, got {budget}")
    samples = _float_list(opts["samples"], "samples")
    poissons = _float_list(opts["poissons"], "poissons")
    planes = opts["planes"] if isinstance(opts["planes"], list) else str(opts["planes"]).split(",")
    gamma0 = None if opts["gamma"] is None else _float_list(opts["gamma"], "gamma")
    try:
        objective = BendingObjective(cfg.geometry, samples, poissons, planes, youngs=cfg.material.youngs)
        report = optimize(objective, gamma0, budget=budget, seed=int(opts["seed"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    K = templated_stiffness(cfg.geometry, cfg.material, report.final_gamma)
    checks = run_checks(cfg.geometry, cfg.material, K=K, label="K(gamma)")
    doc = report.as_dict()
    doc["ratios"] = [
        {"plane": p, "aspect_ratio": a, "poisson": n, "energy_ratio": r}
        for p, a, n, r in objective.ratios(report.final_gamma)
    ]
    doc["verification"] = [c.line for c in checks]
    doc["verified"] = all_passed(checks)
    if not opts["deterministic"]:
        doc["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    if not doc["verified"]:
        failed = next(c for c in checks if not c.passed)
        print(f"error: tuned instance fails verification: {failed.line}", file=sys.stderr)
        return 1
    _emit((json.dumps(doc, indent=2) + "\n").encode(), opts["output"])
    return 0


COMMANDS = {
    "stiffness": cmd_stiffness,
    "verify": cmd_verify,
    "bending": cmd_bending,
    "optimize": cmd_optimize,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BrickTemplateError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

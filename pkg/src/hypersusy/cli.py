"""Command-line front end.

Three subcommands: `families` lists the six kinds, the pure-power
subfamilies and the ten catalog examples; `derive` writes grid exports of
the partner-pair potentials and superpotential plus a metadata file;
`verify` runs the invariant suites.  Every number printed comes from a
library call.

Exit codes: 0 success, 1 invariant failure, 2 invalid parameters,
3 inadmissible gamma, 4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import catalog, families, riccati, schrodinger, verify
from .errors import (
    BoundaryDecayFailure,
    ContextMismatch,
    CutoffExceeded,
    DegenerateDenominator,
    GridTooCoarse,
    IndexViolation,
    InadmissibleGamma,
    NoWeightPower,
    OutOfDomain,
    ParameterViolation,
    QuadratureFailure,
    RecurrenceBreakdown,
)

_PARAM_ERRORS = (
    ParameterViolation,
    BoundaryDecayFailure,
    CutoffExceeded,
    IndexViolation,
    RecurrenceBreakdown,
    NoWeightPower,
    DegenerateDenominator,
    OutOfDomain,
    ContextMismatch,
    ValueError,
    KeyError,
)


def _number(text):
    """ints stay exact (rational-mode polynomials); anything else is float."""
    if isinstance(text, (int, float)):
        return text
    try:
        return int(text)
    except (TypeError, ValueError):
        return float(text)


def _gamma(text):
    if isinstance(text, (int, float)):
        return float(text)
    if str(text).lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _levels(text):
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    text = str(text)
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",") if tok.strip()]


@dataclass
class JobConfig:
    kind: str = None
    alpha: object = None
    beta: object = None
    m: int = 0
    gamma: float = math.inf
    delta: object = None
    levels: list = field(default_factory=list)
    x_min: float = None
    x_max: float = None
    n: int = 1201
    out: str = None
    fmt: str = "csv"
    svg: str = None
    meta: str = None

    @classmethod
    def from_args(cls, args):
        cfg = cls()
        if getattr(args, "config", None):
            with open(args.config) as fh:
                raw = json.load(fh)
            grid = raw.pop("grid", {})
            raw.update(grid)
            if "format" in raw:
                raw["fmt"] = raw.pop("format")
            for key, val in raw.items():
                if key in ("alpha", "beta", "delta"):
                    val = _number(val)
                elif key == "gamma":
                    val = _gamma(val)
                elif key == "levels":
                    val = _levels(val)
                setattr(cfg, key, val)
        for key in ("kind", "m", "n", "out", "fmt", "svg", "meta", "x_min", "x_max"):
            val = getattr(args, key, None)
            if val is not None:
                setattr(cfg, key, val)
        if getattr(args, "alpha", None) is not None:
            cfg.alpha = _number(args.alpha)
        if getattr(args, "beta", None) is not None:
            cfg.beta = _number(args.beta)
        if getattr(args, "delta", None) is not None:
            cfg.delta = _number(args.delta)
        if getattr(args, "gamma", None) is not None:
            cfg.gamma = _gamma(args.gamma)
        if getattr(args, "levels", None) is not None:
            cfg.levels = _levels(args.levels)
        return cfg


def cmd_families(args):
    rows = [
        {
            "kind": kind,
            "sigma": families.SIGMA_TEXT[kind],
            "tau": "alpha*s + beta",
            "rho": families.RHO_TEXT[kind],
            "interval": list(families.Family(kind, -1, 1).interval),
            "constraint": families.CONSTRAINT_TEXT[kind],
        }
        for kind in families.KINDS
    ]
    powers = [
        {"kind": families.LINEAR, "tau": "beta", "k": "beta - 1"},
        {"kind": families.ONE_MINUS_S2, "tau": "alpha*s", "k": "-alpha/2 - 1"},
        {"kind": families.S2_MINUS_ONE, "tau": "alpha*s", "k": "alpha/2 - 1"},
        {"kind": families.S2, "tau": "alpha*s", "k": "alpha/2 - 1"},
        {"kind": families.S2_PLUS_ONE, "tau": "alpha*s", "k": "alpha/2 - 1"},
    ]
    entries = [
        {
            "id": e.entry_id,
            "name": e.name,
            "kind": e.kind,
            "tau": {"full": "alpha*s + beta", "beta": "beta", "alpha_s": "alpha*s"}[e.tau_form],
            "shifted": e.tilde,
        }
        for e in catalog.CATALOG
    ]
    if getattr(args, "catalog", None):
        e = catalog.entry(args.catalog)
        info = entries[e.entry_id - 1]
        info["sigma"] = families.SIGMA_TEXT[e.kind]
        if e.tilde:
            info["k"] = next(p["k"] for p in powers if p["kind"] == e.kind)
        print(json.dumps(info, indent=2) if args.json else _format_entry(info))
        return 0
    if args.json:
        print(json.dumps({"families": rows, "weight_powers": powers, "catalog": entries}, indent=2))
        return 0
    print(f"{'kind':<14} {'sigma':<8} {'interval':<18} constraint")
    for r in rows:
        print(f"{r['kind']:<14} {r['sigma']:<8} {str(r['interval']):<18} {r['constraint']}")
    print("\npure-power weights (rho = sigma^k):")
    for p in powers:
        print(f"  {p['kind']:<14} tau = {p['tau']:<9} k = {p['k']}")
    print("\ncatalog examples:")
    for e in entries:
        shift = " (with constant shift)" if e["shifted"] else ""
        print(f"  {e['id']:>2}. {e['name']:<38} {e['kind']:<14} tau = {e['tau']}{shift}")
    return 0


def _format_entry(info):
    lines = [f"{info['id']}. {info['name']}", f"   kind: {info['kind']} (sigma = {info['sigma']})",
             f"   tau: {info['tau']}"]
    if info.get("k"):
        lines.append(f"   k: {info['k']}")
    return "\n".join(lines)


def cmd_derive(args):
    cfg = JobConfig.from_args(args)
    for name in ("kind", "alpha", "beta", "x_min", "x_max", "out"):
        if getattr(cfg, name) is None:
            print(f"error: missing required setting '{name}'", file=sys.stderr)
            return 2
    fam = families.make_family(cfg.kind, cfg.alpha, cfg.beta)
    defm = riccati.make_deformation(fam, cfg.m, cfg.gamma, cfg.delta)
    xs = np.linspace(float(cfg.x_min), float(cfg.x_max), int(cfg.n))
    frame = schrodinger.grid_frame(defm, xs, cfg.levels)
    if cfg.fmt == "json":
        schrodinger.write_json(frame, cfg.out)
    else:
        schrodinger.write_csv(frame, cfg.out)
    if cfg.svg:
        schrodinger.write_svg(frame, cfg.svg)
    if cfg.meta:
        lam_max = cfg.levels[-1] if cfg.levels else cfg.m + 4
        if cfg.delta is None:
            targets = [float(families.eigenvalue(fam, l))
                       for l in range(cfg.m + 1, lam_max + 1)
                       if families.below_cutoff(fam, l)]
        else:
            targets = [float(families.shifted_eigenvalue(fam, l, cfg.delta))
                       for l in range(cfg.m + 1, lam_max + 1)
                       if families.below_cutoff(fam, l + 1)]
        meta = {
            "deformation": defm.to_json(),
            "lambda_targets": targets,
            "gamma_rays": defm.rays.to_json(),
            "grid": {"x_min": float(cfg.x_min), "x_max": float(cfg.x_max), "n": int(cfg.n)},
            "levels": cfg.levels,
        }
        with open(cfg.meta, "w") as fh:
            json.dump(meta, fh, indent=2)
    print(f"wrote {cfg.out}")
    return 0


def cmd_verify(args):
    if args.suite == "all":
        report = verify.run_all()
    else:
        report = verify.run_suite(args.suite)
    if args.json:
        print(json.dumps(report, indent=2, default=str))
    else:
        if "suites" in report:
            for name, sub in report["suites"].items():
                print(f"{'PASS' if sub['ok'] else 'FAIL'}  {name}  ({sub['seconds']}s)")
        else:
            print(f"{'PASS' if report['ok'] else 'FAIL'}  {report['suite']}")
        if not report["ok"]:
            print("failures detected; run with --json for details", file=sys.stderr)
    return 0 if report["ok"] else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hypersusy",
        description="Operator families, ladder factorizations and partner potentials",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fam = sub.add_parser("families", help="list families, subfamilies and catalog")
    p_fam.add_argument("--json", action="store_true")
    p_fam.add_argument("--catalog", type=int, help="show one catalog entry (1..10)")
    p_fam.set_defaults(func=cmd_families)

    p_der = sub.add_parser("derive", help="export potentials/superpotential grids")
    p_der.add_argument("--config", help="JSON config file; flags override it")
    p_der.add_argument("--kind", choices=families.KINDS)
    p_der.add_argument("--alpha")
    p_der.add_argument("--beta")
    p_der.add_argument("--m", type=int)
    p_der.add_argument("--gamma", help="number or 'inf'")
    p_der.add_argument("--delta")
    p_der.add_argument("--levels", help="comma list '1,2' or range '1:4'")
    p_der.add_argument("--x-min", dest="x_min", type=float)
    p_der.add_argument("--x-max", dest="x_max", type=float)
    p_der.add_argument("--n", type=int)
    p_der.add_argument("--out")
    p_der.add_argument("--format", dest="fmt", choices=("csv", "json"))
    p_der.add_argument("--svg")
    p_der.add_argument("--meta")
    p_der.set_defaults(func=cmd_derive)

    p_ver = sub.add_parser("verify", help="run invariant suites")
    p_ver.add_argument(
        "--suite",
        default="all",
        choices=("algebra", "orthogonality", "riccati", "spectrum", "all"),
    )
    p_ver.add_argument("--json", action="store_true")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except InadmissibleGamma as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (QuadratureFailure, GridTooCoarse) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except _PARAM_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run():
    sys.exit(main())

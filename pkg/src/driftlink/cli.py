"""Command-line front end: bounds, simulate, sweep and verify subcommands.

Configuration files are JSON validated against a strict schema (unknown
keys are a hard error), and any field can be overridden from the command
line with repeated --set key=value flags.  With --json the only bytes on
stdout are a single JSON document.

Exit codes: 0 success, 1 failed checks, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from . import analysis, harness
from .diamond import NetworkConfig
from .idc import STATE_LAWS, ConfigError

_NUM = {"type": "number"}
_POS_INT = {"type": "integer", "minimum": 1}

SIMULATE_SCHEMA: dict = {
    "type": "object",
    "additionalProperties": False,
    "required": ["K", "g", "h", "N", "M", "trials"],
    "properties": {
        "K": _POS_INT,
        "g": _NUM,
        "h": _NUM,
        "mu": _NUM,
        "mu1": {"type": "array", "items": _NUM, "minItems": 1},
        "mu2": {"type": "array", "items": _NUM, "minItems": 1},
        "sigma2": _NUM,
        "law": {"enum": list(STATE_LAWS)},
        "N": _POS_INT,
        "Nprime": _POS_INT,
        "P1": _NUM,
        "P2": {"anyOf": [_NUM, {"type": "array", "items": _NUM, "minItems": 1}]},
        "nu": _NUM,
        "beta": _NUM,
        "margins": {"enum": ["desk", "paper"]},
        "margin_c": _NUM,
        "seed": {"type": "integer"},
        "codebook_seed": {"type": "integer"},
        "M": _POS_INT,
        "trials": _POS_INT,
        "depth": _POS_INT,
        "noise_var": _NUM,
        "decompose": {"type": "boolean"},
        "n_jobs": _POS_INT,
        "memory_limit_bytes": _POS_INT,
    },
}

SWEEP_SCHEMA: dict = {
    "type": "object",
    "additionalProperties": False,
    "required": ["grid", "trials", "M"],
    "properties": {
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "minProperties": 1,
            "properties": {
                "K": {"type": "array", "items": _POS_INT, "minItems": 1},
                "g": {"type": "array", "items": _NUM, "minItems": 1},
                "h": {"type": "array", "items": _NUM, "minItems": 1},
                "mu": {"type": "array", "items": _NUM, "minItems": 1},
                "sigma2": {"type": "array", "items": _NUM, "minItems": 1},
                "N": {"type": "array", "items": _POS_INT, "minItems": 1},
            },
        },
        "defaults": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "K": _POS_INT, "g": _NUM, "h": _NUM, "mu": _NUM,
                "sigma2": _NUM, "N": _POS_INT,
            },
        },
        "trials": _POS_INT,
        "M": _POS_INT,
        "Nprime": _POS_INT,
        "seed": {"type": "integer"},
        "margins": {"enum": ["desk", "paper"]},
        "margin_c": _NUM,
        "law": {"enum": list(STATE_LAWS)},
        "depth": _POS_INT,
        "noise_var": _NUM,
        "decompose": {"type": "boolean"},
        "n_jobs": _POS_INT,
    },
}


class UsageError(ValueError):
    """Bad flags or configuration; maps to exit code 2."""


def load_config(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file not found: {path}")
    try:
        with open(p) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc


def apply_overrides(config: dict, sets: Sequence[str]) -> dict:
    """Apply repeated --set key=value pairs; dotted keys address nested objects."""
    out = json.loads(json.dumps(config))
    for item in sets:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--set expects key=value, got {item!r}")
        try:
            value: Any = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise UsageError(f"--set path {key!r} crosses a non-object value")
        node[parts[-1]] = value
    return out


def validate_config(config: dict, schema: dict) -> None:
    try:
        jsonschema.validate(config, schema)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageError(f"config error at {path}: {exc.message}") from exc


def build_spec(config: dict) -> harness.ExperimentSpec:
    """Turn a validated simulate config into an ExperimentSpec.

    Powers default to the per-regime selection; alignment margins default
    to the 'desk' preset, and the 'paper' preset also forces N' = N^4.
    """
    K = config["K"]
    g, h = float(config["g"]), float(config["h"])
    if "mu1" in config or "mu2" in config:
        if "mu" in config:
            raise UsageError("give either mu or the mu1/mu2 lists, not both")
        if "mu1" not in config or "mu2" not in config:
            raise UsageError("mu1 and mu2 must be given together")
        mu1 = tuple(float(m) for m in config["mu1"])
        mu2 = tuple(float(m) for m in config["mu2"])
        if len(mu1) != K or len(mu2) != K:
            raise UsageError(f"mu1/mu2 must have length K={K}")
    else:
        mu = float(config.get("mu", 1.0))
        mu1 = mu2 = (mu,) * K

    sigma2 = float(config.get("sigma2", 0.0))
    N = config["N"]
    margins = config.get("margins", "desk")
    Nprime = int(config.get("Nprime", 4096))
    if margins == "paper" and "Nprime" not in config:
        Nprime = N**4

    if "P1" in config or "P2" in config:
        if "P1" not in config or "P2" not in config:
            raise UsageError("P1 and P2 must be given together")
        P1 = float(config["P1"])
        P2 = config["P2"]
        P2 = tuple(float(p) for p in (P2 if isinstance(P2, list) else [P2] * K))
        if len(P2) != K:
            raise UsageError(f"P2 list must have length K={K}")
    elif len(set(mu1)) == 1 and mu1 == mu2:
        p1, p2, _ = analysis.select_powers(K, g, h, mu1[0])
        P1, P2 = p1, (p2,) * K
    else:
        p1, p2k, _ = analysis.select_powers_unequal(K, g, h, mu1, mu2)
        P1, P2 = p1, tuple(p2k)

    if "nu" in config or "beta" in config:
        if "nu" not in config or "beta" not in config:
            raise UsageError("nu and beta must be given together")
        nu, beta = float(config["nu"]), float(config["beta"])
    elif margins == "paper":
        nu, beta = analysis.paper_margins(N)
    else:
        nu, beta = analysis.desk_margins(N, Nprime, sigma2, float(config.get("margin_c", 4.0)))

    try:
        cfg = NetworkConfig(
            K=K, g=g, h=h, mu1=mu1, mu2=mu2, sigma2=sigma2, N=N, Nprime=Nprime,
            P1=P1, P2=P2, nu=nu, beta=beta, seed=int(config.get("seed", 0)),
            law=config.get("law", "three_point"),
            noise_var=float(config.get("noise_var", 1.0)),
        )
        return harness.ExperimentSpec(
            cfg=cfg,
            M=config["M"],
            trials=config["trials"],
            codebook_seed=int(config.get("codebook_seed", 1)),
            depth=int(config.get("depth", 3)),
            decompose=bool(config.get("decompose", True)),
            n_jobs=int(config.get("n_jobs", 1)),
            memory_limit_bytes=int(config.get("memory_limit_bytes", 4 << 30)),
        )
    except (ConfigError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _parse_drift_list(raw: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in raw.split(","))
    except ValueError as exc:
        raise UsageError(f"{flag} expects a comma-separated list of numbers") from exc


def cmd_bounds(args: argparse.Namespace) -> int:
    for flag, value in (("-K", args.K), ("-g", args.g), ("-h", args.h), ("--mu", args.mu)):
        if value is not None and value <= 0:
            raise UsageError(f"{flag} must be > 0, got {value}")
    if (args.mu1 is None) != (args.mu2 is None):
        raise UsageError("--mu1 and --mu2 must be given together")
    if args.mu1 is not None:
        mu1 = _parse_drift_list(args.mu1, "--mu1")
        mu2 = _parse_drift_list(args.mu2, "--mu2")
        if len(mu1) != args.K or len(mu2) != args.K:
            raise UsageError(
                f"--mu1/--mu2 must list exactly K={args.K} drift means "
                f"(got {len(mu1)} and {len(mu2)})"
            )
        if min(mu1) <= 0 or min(mu2) <= 0:
            raise UsageError("--mu1/--mu2 entries must be > 0")
        report = analysis.bounds_report_unequal(args.K, args.g, args.h, mu1, mu2)
    else:
        report = analysis.bounds_report(args.K, args.g, args.h, args.mu)

    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "bounds.json").write_text(report.to_json() + "\n")
    if args.json:
        print(report.to_json())
    else:
        d = report.to_dict()
        print(f"regime            {d['regime']}")
        print(f"min cut metric    {d['min_cut']:.6g}")
        print(f"sync upper bound  {d['sync_ub']:.6g} bits/energy")
        print(f"unsync lower bnd  {d['unsync_lb']:.6g} bits/energy")
        print(f"ratio             {d['ratio']:.6g}")
        print(f"P1                {d['P1']:.6g}")
        print(f"P2                {d['P2']}")
        print(f"snr floor         {d['snr_lb']:.6g}")
        print(f"gamma             {d['gamma']:.6g}")
        print(f"achievable rpue   {d['rpue_achievable']:.6g} bits/energy")
        if "mu_tilde" in d:
            print(f"effective mu      {d['mu_tilde']:.6g}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    config = apply_overrides(load_config(args.config), args.set or [])
    validate_config(config, SIMULATE_SCHEMA)
    if args.seed is not None:
        config["seed"] = args.seed
    spec = build_spec(config)
    result = harness.run_experiment(spec)
    payload = {"config": config, "result": result.to_dict()}
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "result.json").write_text(json.dumps(payload, indent=2) + "\n")
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"trials            {result.trials}")
        print(f"block errors      {result.errors} "
              f"(rate {result.bler:.4f}, 95% CI [{result.bler_ci_lo:.4f}, {result.bler_ci_hi:.4f}])")
        print(f"rate              {result.rate_bits_per_symbol:.4f} bits/symbol "
              f"(gamma capacity {result.gamma_capacity:.4f})")
        print(f"snr floor         {result.snr_lb:.4f}  measured {result.snr_measured_mean:.4f}")
        print(f"misaligned trials {result.e_idc_freq:.4f} (bound {result.e_idc_bound:.4f})")
        print(f"rpue achieved     {result.rpue_achieved:.6g} "
              f"(lb {result.rpue_lb:.6g}, ub {result.rpue_ub:.6g})")
        print(f"wall clock        {result.wall_clock_s:.2f} s")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    config = apply_overrides(load_config(args.config), args.set or [])
    validate_config(config, SWEEP_SCHEMA)
    if args.seed is not None:
        config["seed"] = args.seed
    rows = harness.sweep(
        config["grid"],
        trials=config["trials"],
        M=config["M"],
        Nprime=int(config.get("Nprime", 4096)),
        seed=int(config.get("seed", 0)),
        margins=config.get("margins", "desk"),
        margin_c=float(config.get("margin_c", 4.0)),
        law=config.get("law", "three_point"),
        depth=int(config.get("depth", 3)),
        noise_var=float(config.get("noise_var", 1.0)),
        decompose=bool(config.get("decompose", True)),
        n_jobs=int(config.get("n_jobs", 1)),
        defaults=config.get("defaults"),
    )
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    harness.write_sweep_csv(rows, str(outdir / "sweep.csv"))
    (outdir / "sweep.json").write_text(harness.sweep_rows_to_json(rows) + "\n")
    if args.json:
        print(harness.sweep_rows_to_json(rows))
    else:
        print(f"wrote {len(rows)} rows to {outdir / 'sweep.csv'}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = harness.verify(args.level)
    if args.json:
        print(report.to_json())
    else:
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            print(f"[{status}] {check.name}: measured {check.measured:.6g} "
                  f"vs bound {check.bound:.6g} ({check.detail})")
        print(f"{'all checks passed' if report.passed else 'CHECKS FAILED'} "
              f"in {report.wall_clock_s:.1f} s")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="driftlink",
        description="Bounds and Monte Carlo simulation for relaying under clock drift",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    # -h is the relay-destination gain here, so automatic help is disabled
    b = sub.add_parser("bounds", add_help=False,
                       help="evaluate the closed-form bounds for one network")
    b.add_argument("--help", action="help")
    b.add_argument("-K", type=int, required=True, help="number of relays")
    b.add_argument("-g", type=float, required=True, help="source-relay power gain")
    b.add_argument("-h", type=float, required=True, help="relay-destination power gain")
    b.add_argument("--mu", type=float, default=1.0, help="common drift mean")
    b.add_argument("--mu1", type=str, default=None, help="per-relay first-hop drifts, comma separated")
    b.add_argument("--mu2", type=str, default=None, help="per-relay second-hop drifts, comma separated")
    b.add_argument("--json", action="store_true")
    b.add_argument("--out", type=str, default=None)
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("simulate", help="run one Monte Carlo experiment from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--set", action="append", metavar="KEY=VALUE")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--json", action="store_true")
    s.add_argument("--out", type=str, default=None)
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    w.add_argument("--config", required=True)
    w.add_argument("--set", action="append", metavar="KEY=VALUE")
    w.add_argument("--seed", type=int, default=None)
    w.add_argument("--json", action="store_true")
    w.add_argument("--out", type=str, default=None)
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the bundled invariant checks")
    v.add_argument("--level", choices=["quick", "full"], default="quick")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, harness.InfeasibleRunError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line benchmark harness.

Subcommands:
    run     simulate one scenario, write trace CSVs and a metrics table
    sweep   rerun a scenario over a grid of sampling periods
    table   recompute the metrics table from existing trace CSVs

Options may come from a JSON config file (--config); explicit flags
override file values. Exit codes: 0 success, 1 invalid specification,
2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .harness import (
    RunSpec,
    SweepSpec,
    format_metrics_table,
    read_trace_csv,
    run_scenario,
    sweep_tau,
    write_metrics_csv,
)
from .metrics import MEAN_SQUARE, RMS, metrics_table
from .rootfind import RootSolveError
from .signals import GaussianIID, HFCosine, SumNoise, make_signal
from .steppers import DivergenceError, Method

_METHOD_BY_FLAG = {m.value: m for m in Method}


class SpecError(ValueError):
    """Invalid command line or config file content."""


class _Parser(argparse.ArgumentParser):
    # argparse would sys.exit(2); route everything through SpecError so the
    # documented exit codes hold.
    def error(self, message):
        raise SpecError(message)


def _noise_from_json(obj):
    if obj is None:
        return None
    if isinstance(obj, list):
        return SumNoise(tuple(_noise_from_json(p) for p in obj))
    if "gaussian" in obj:
        g = obj["gaussian"]
        return GaussianIID(sigma=float(g["sigma"]), seed=int(g.get("seed", 0)))
    if "hfcosine" in obj:
        h = obj["hfcosine"]
        return HFCosine(
            amplitude=float(h["amplitude"]),
            frequency=float(h["frequency"]),
            phase=float(h.get("phase", 0.0)),
        )
    raise SpecError(f"unknown noise spec {obj!r}")


def _signal_from_json(obj):
    """Inline signal: {"poly": [...], "sines": [[amp, freq, phase], ...],
    "noise": {...}, "L": bound}."""
    return make_signal(
        poly=tuple(obj.get("poly", ())),
        sines=tuple(tuple(s) for s in obj.get("sines", ())),
        noise=_noise_from_json(obj.get("noise")),
        l_true=obj.get("L"),
        name=obj.get("name", "signal"),
    )


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise SpecError(f"cannot read config {path}: {err}") from err
    if not isinstance(cfg, dict):
        raise SpecError("config file must hold a JSON object")
    return cfg


def _parse_methods(values: list[str] | None) -> tuple[Method, ...] | None:
    if values is None:
        return None
    try:
        return tuple(_METHOD_BY_FLAG[v] for v in values)
    except KeyError as err:
        raise SpecError(
            f"unknown method {err.args[0]!r}; choose from {sorted(_METHOD_BY_FLAG)}"
        ) from err


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--scenario", type=int, choices=(1, 2, 3))
    p.add_argument(
        "--method",
        action="append",
        metavar="NAME",
        help=f"one of {sorted(_METHOD_BY_FLAG)}; repeatable",
    )
    p.add_argument("--t-end", type=float, dest="t_end")
    p.add_argument("--seed", type=int)
    p.add_argument("--window", type=float, nargs=2, metavar=("TMIN", "TMAX"))
    p.add_argument("--m-def", choices=(RMS, MEAN_SQUARE), dest="m_def")
    p.add_argument("--n", type=int)
    p.add_argument("--nf", type=int)
    p.add_argument("--L", type=float)
    p.add_argument("--lambdas", help="comma-separated gains lambda_0..lambda_m")


def _build_parser() -> _Parser:
    parser = _Parser(prog="fterdiff", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario")
    _add_common(p_run)
    p_run.add_argument("--tau", type=float)
    p_run.add_argument("--out", help="output directory (default fterdiff-out)")

    p_sweep = sub.add_parser("sweep", help="sweep the sampling period")
    _add_common(p_sweep)
    p_sweep.add_argument("--tau-min", type=float, dest="tau_min")
    p_sweep.add_argument("--tau-max", type=float, dest="tau_max")
    p_sweep.add_argument("--points", type=int, help="log-spaced grid size")
    p_sweep.add_argument(
        "--linear-step",
        type=float,
        dest="linear_step",
        help="use a linear grid with this step instead of log spacing",
    )
    p_sweep.add_argument("--out", help="output CSV path (default sweep.csv)")

    p_table = sub.add_parser("table", help="metrics table from trace CSVs")
    p_table.add_argument("traces", nargs="+", help="trace CSV files")
    p_table.add_argument("--window", type=float, nargs=2, metavar=("TMIN", "TMAX"))
    p_table.add_argument("--m-def", choices=(RMS, MEAN_SQUARE), dest="m_def")
    p_table.add_argument("--out", help="optionally write the table CSV here")
    return parser


def _scenario_or_signal(args, cfg):
    scenario = args.scenario if args.scenario is not None else cfg.get("scenario")
    if scenario is None and "signal" in cfg:
        return _signal_from_json(cfg["signal"])
    if scenario is None:
        raise SpecError("a --scenario (or a config 'scenario'/'signal') is required")
    if scenario not in (1, 2, 3):
        raise SpecError(f"unknown scenario {scenario}")
    return int(scenario)


def _lambdas(args, cfg):
    raw = args.lambdas if args.lambdas is not None else cfg.get("lambdas")
    if raw is None:
        return None
    if isinstance(raw, str):
        try:
            return tuple(float(v) for v in raw.split(","))
        except ValueError as err:
            raise SpecError(f"bad --lambdas value {raw!r}") from err
    return tuple(float(v) for v in raw)


def _run_spec(args, cfg) -> RunSpec:
    # (RunSpec field, flag attribute, config key)
    fields = (
        ("n", "n", "n"),
        ("n_f", "nf", "nf"),
        ("L", "L", "L"),
        ("tau", "tau", "tau"),
        ("t_end", "t_end", "t_end"),
        ("seed", "seed", "seed"),
        ("m_definition", "m_def", "m_definition"),
    )
    kw = {}
    for field, attr, key in fields:
        val = getattr(args, attr, None)
        if val is None:
            val = cfg.get(key)
        if val is not None:
            kw[field] = val
    window = args.window if args.window is not None else cfg.get("window")
    if window is not None:
        kw["window"] = (float(window[0]), float(window[1]))
    lambdas = _lambdas(args, cfg)
    if lambdas is not None:
        kw["lambdas"] = lambdas
    methods = _parse_methods(args.method)
    if methods is not None:
        kw["methods"] = methods
    out = getattr(args, "out", None)
    if out is None:
        out = cfg.get("out")
    if out is not None:
        kw["out"] = Path(out)
    try:
        return RunSpec(scenario=_scenario_or_signal(args, cfg), **kw)
    except ValueError as err:
        raise SpecError(str(err)) from err


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    spec = _run_spec(args, cfg)
    spec.config()  # validate before running
    table = run_scenario(spec)
    print(f"wrote traces and metrics to {spec.out}/")
    print(format_metrics_table(table))
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    base = _run_spec(args, cfg)
    tau_min = args.tau_min if args.tau_min is not None else cfg.get("tau_min", 1e-4)
    tau_max = args.tau_max if args.tau_max is not None else cfg.get("tau_max", 1.0)
    kw = dict(
        tau_min=float(tau_min),
        tau_max=float(tau_max),
        scenario=base.scenario,
        methods=base.methods,
        n=base.n,
        n_f=base.n_f,
        L=base.L,
        lambdas=base.lambdas,
        t_end=base.t_end,
        seed=base.seed,
        window=base.window,
    )
    if args.linear_step is not None:
        kw["spacing"] = "linear"
        kw["linear_step"] = args.linear_step
    elif args.points is not None:
        kw["points"] = args.points
    if args.out is not None:
        kw["out"] = Path(args.out)
    try:
        spec = SweepSpec(**kw)
    except ValueError as err:
        raise SpecError(str(err)) from err
    rows = sweep_tau(spec)
    n_fail = sum(1 for r in rows if any(math.isinf(v) for v in r["Y"]))
    print(f"wrote {len(rows)} rows to {spec.out}" + (f" ({n_fail} diverged)" if n_fail else ""))
    return 0


def _cmd_table(args) -> int:
    traces = [read_trace_csv(Path(p)) for p in args.traces]
    if args.window is None:
        raise SpecError("table requires --window TMIN TMAX")
    t_min, t_max = args.window
    definition = args.m_def or RMS
    table = metrics_table(traces, t_min, t_max, definition)
    print(format_metrics_table(table))
    if args.out is not None:
        write_metrics_csv(table, Path(args.out))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {"run": _cmd_run, "sweep": _cmd_sweep, "table": _cmd_table}[args.command]
        return handler(args)
    except SpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (DivergenceError, RootSolveError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Scenario runner, sampling-period sweep, continuous-time reference and
file serialization.

Trace CSV schema: header ``k,t,g,z0..zn,sigma0..sigman,xi`` with floats
printed at 17 significant digits, so files round-trip exactly and reruns
with the same seed are byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .core import DEFAULT_LAMBDAS, DifferentiatorConfig, injection_vector, zero_state
from .metrics import RMS, ErrorTrace, Metrics, compute_metrics, metrics_table
from .signals import SignalModel, deterministic_noise, scenario_signal, true_state
from .steppers import DivergenceError, Method, run

DEFAULT_METHODS = (Method.FTER_D, Method.FTER_E, Method.FTER_I)


@dataclass(frozen=True)
class RunSpec:
    """One scenario run: configuration, signal, horizon and output options."""

    scenario: int | SignalModel
    methods: tuple[Method, ...] = DEFAULT_METHODS
    n: int = 3
    n_f: int = 2
    L: Optional[float] = None           # default: the signal's own bound
    lambdas: tuple[float, ...] = DEFAULT_LAMBDAS
    tau: float = 0.1
    t_end: float = 25.0
    seed: int = 0
    window: Optional[tuple[float, float]] = None  # default [10, t_end]
    m_definition: str = RMS
    out: Path = Path("fterdiff-out")

    def config(self) -> DifferentiatorConfig:
        L = self.L if self.L is not None else self.signal().l_true
        if L is None:
            raise ValueError("L not given and the signal carries no bound")
        return DifferentiatorConfig(
            n=self.n, n_f=self.n_f, L=L, lambdas=self.lambdas, tau=self.tau
        )

    def signal(self) -> SignalModel:
        model = (
            scenario_signal(self.scenario)
            if isinstance(self.scenario, int)
            else self.scenario
        )
        return model.with_seed(self.seed)

    def metrics_window(self) -> tuple[float, float]:
        return self.window if self.window is not None else (10.0, self.t_end)


@dataclass(frozen=True)
class SweepSpec:
    """Sampling-period sweep: grid bounds, spacing and the shared run setup."""

    tau_min: float
    tau_max: float
    scenario: int | SignalModel = 3
    methods: tuple[Method, ...] = DEFAULT_METHODS
    spacing: str = "log"                # "log" or "linear"
    points: int = 10                    # log spacing
    linear_step: float = 1e-4           # linear spacing
    n: int = 3
    n_f: int = 2
    L: Optional[float] = None
    lambdas: tuple[float, ...] = DEFAULT_LAMBDAS
    t_end: float = 100.0
    seed: int = 0
    window: Optional[tuple[float, float]] = None
    out: Path = Path("sweep.csv")

    def __post_init__(self):
        if not (0 < self.tau_min <= self.tau_max):
            raise ValueError("need 0 < tau_min <= tau_max")
        if self.spacing not in ("log", "linear"):
            raise ValueError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.tau_min, self.tau_max, self.points)
        n = int(math.floor((self.tau_max - self.tau_min) / self.linear_step + 1e-9))
        return self.tau_min + self.linear_step * np.arange(n + 1)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_trace_csv(trace: ErrorTrace, path: Path) -> None:
    n_cols = trace.z.shape[1]
    header = (
        "k,t,g,"
        + ",".join(f"z{i}" for i in range(n_cols))
        + ","
        + ",".join(f"sigma{i}" for i in range(n_cols))
        + ",xi"
    )
    lines = [header]
    for k in range(len(trace.t)):
        row = [str(k), _fmt(trace.t[k]), _fmt(trace.g[k])]
        row += [_fmt(v) for v in trace.z[k]]
        row += [_fmt(v) for v in trace.sigma[k]]
        row.append(_fmt(trace.xi[k]))
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


def read_trace_csv(path: Path) -> ErrorTrace:
    """Load a trace written by write_trace_csv; the method label is taken
    from the file name."""
    path = Path(path)
    lines = path.read_text().strip().splitlines()
    cols = lines[0].split(",")
    n_cols = sum(1 for c in cols if c.startswith("z"))
    data = np.array([[float(v) for v in ln.split(",")[1:]] for ln in lines[1:]])
    if data.size == 0:
        data = data.reshape(0, 2 + 2 * n_cols + 1)
    t = data[:, 0]
    tau = float(t[1] - t[0]) if len(t) > 1 else float("nan")
    return ErrorTrace(
        tau=tau,
        t=t,
        g=data[:, 1],
        z=data[:, 2 : 2 + n_cols],
        sigma=data[:, 2 + n_cols : 2 + 2 * n_cols],
        xi=data[:, -1],
        method=path.stem,
    )


def write_metrics_csv(table: dict[str, Metrics], path: Path) -> None:
    methods = list(table)
    n_idx = len(next(iter(table.values())).y)
    lines = ["index," + ",".join(methods)]
    for i in range(n_idx):
        lines.append(f"Y{i}," + ",".join(_fmt(table[m].y[i]) for m in methods))
    for i in range(n_idx):
        lines.append(f"M{i}," + ",".join(_fmt(table[m].m[i]) for m in methods))
    path.write_text("\n".join(lines) + "\n")


def write_metrics_json(table: dict[str, Metrics], path: Path) -> None:
    first = next(iter(table.values()))
    payload = {
        "window": list(first.window),
        "m_definition": first.m_definition,
        "methods": {
            name: {"Y": [float(v) for v in m.y], "M": [float(v) for v in m.m]}
            for name, m in table.items()
        },
    }
    path.write_text(json.dumps(payload, indent=2) + "\n")


def format_metrics_table(table: dict[str, Metrics]) -> str:
    methods = list(table)
    n_idx = len(next(iter(table.values())).y)
    width = max(10, *(len(m) + 2 for m in methods))
    lines = ["index " + "".join(f"{m:>{width}}" for m in methods)]
    for kind, attr in (("Y", "y"), ("M", "m")):
        for i in range(n_idx):
            vals = "".join(f"{getattr(table[m], attr)[i]:>{width}.6g}" for m in methods)
            lines.append(f"{kind}{i:<5d}" + vals)
    return "\n".join(lines)


def run_scenario(spec: RunSpec) -> dict[str, Metrics]:
    """Run every requested method, write one trace CSV each plus the
    metrics table (CSV and JSON); returns the table."""
    cfg = spec.config()
    signal = spec.signal()
    out = Path(spec.out)
    out.mkdir(parents=True, exist_ok=True)

    label = signal.name or "signal"
    traces = []
    for method in spec.methods:
        trace = run(cfg, method, signal, spec.t_end)
        trace.seed = spec.seed
        write_trace_csv(trace, out / f"trace_{label}_{method.value}.csv")
        traces.append(trace)

    t_min, t_max = spec.metrics_window()
    table = metrics_table(traces, t_min, t_max, spec.m_definition)
    write_metrics_csv(table, out / "metrics.csv")
    write_metrics_json(table, out / "metrics.json")
    return table


def sweep_tau(spec: SweepSpec) -> list[dict]:
    """Run each method on every grid period and collect the Y indices.

    A diverged run is recorded with infinite indices and the sweep
    continues; the output always has |grid| x |methods| rows. Writes a CSV
    ``tau,method,Y0..Yn`` and returns the rows.
    """
    base = RunSpec(
        scenario=spec.scenario,
        methods=spec.methods,
        n=spec.n,
        n_f=spec.n_f,
        L=spec.L,
        lambdas=spec.lambdas,
        t_end=spec.t_end,
        seed=spec.seed,
        window=spec.window,
    )
    t_min, t_max = spec.window if spec.window is not None else (10.0, spec.t_end)
    signal = base.signal()

    rows: list[dict] = []
    for tau in spec.grid():
        cfg = replace(base.config(), tau=float(tau))
        for method in spec.methods:
            try:
                trace = run(cfg, method, signal, spec.t_end)
                m = compute_metrics(trace, t_min, t_max)
                y = m.y
            except DivergenceError:
                y = np.full(spec.n + 1, np.inf)
            rows.append(
                {"tau": float(tau), "method": method.label, "Y": [float(v) for v in y]}
            )

    lines = ["tau,method," + ",".join(f"Y{i}" for i in range(spec.n + 1))]
    for r in rows:
        lines.append(
            _fmt(r["tau"]) + "," + r["method"] + "," + ",".join(_fmt(v) for v in r["Y"])
        )
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n")
    return rows


def continuous_oracle(spec: RunSpec, fine_step: float, s0=None) -> ErrorTrace:
    """Fine-step forward integration of the continuous differentiator,
    sampled at multiples of tau; a cross-check reference only.

    Uses the base signal plus deterministic noise parts (iid draws have no
    continuous-time meaning). fine_step must be at most tau/100.
    """
    cfg = spec.config()
    if fine_step > cfg.tau / 100:
        raise ValueError(f"fine_step must be <= tau/100 = {cfg.tau / 100:g}")
    signal = spec.signal()

    n_f, dim = cfg.n_f, cfg.m + 1
    n_samples = int(math.floor(spec.t_end / cfg.tau + 1e-9))
    substeps = max(1, int(round(cfg.tau / fine_step)))
    dt = cfg.tau / substeps

    s = zero_state(cfg) if s0 is None else s0
    y = np.concatenate((s.w, s.z))
    shift = np.eye(dim, k=1)

    t_grid = np.arange(n_samples + 1) * cfg.tau
    z_rec = np.empty((n_samples + 1, cfg.n + 1))
    z_rec[0] = y[n_f:]
    for k in range(n_samples):
        t = t_grid[k]
        for j in range(substeps):
            tj = t + j * dt
            g = float(signal.f0(tj)) + float(deterministic_noise(signal.noise, tj))
            dy = shift @ y + injection_vector(cfg, y[0])
            dy[n_f - 1] -= g
            y = y + dt * dy
        if not np.isfinite(y).all():
            raise DivergenceError(f"oracle diverged near t={t:g}", step=k)
        z_rec[k + 1] = y[n_f:]

    truth = true_state(signal, cfg, t_grid).T
    g_samples = signal.f0(t_grid) + deterministic_noise(signal.noise, t_grid)
    return ErrorTrace(
        tau=cfg.tau,
        t=t_grid,
        g=np.asarray(g_samples, dtype=float),
        z=z_rec,
        sigma=z_rec - truth,
        xi=np.zeros(n_samples + 1),
        method="ORACLE",
        scenario=signal.name or None,
        seed=spec.seed,
    )

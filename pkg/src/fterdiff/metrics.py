"""Error traces and the two aggregate indices over a time window.

Y_i is the maximum absolute error of the i-th derivative estimate inside
the window; M_i is its root-mean-square (a plain mean-of-squares variant
is available behind the `definition` argument).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

RMS = "rms"
MEAN_SQUARE = "meansquare"
_DEFINITIONS = (RMS, MEAN_SQUARE)


@dataclass
class ErrorTrace:
    """One simulation run: times, measurements, estimates, errors and the
    support variable, plus identifying metadata."""

    tau: float
    t: np.ndarray
    g: np.ndarray
    z: np.ndarray        # (len(t), n+1)
    sigma: np.ndarray    # z minus the true derivatives
    xi: np.ndarray
    method: str = ""
    scenario: Optional[str] = None
    seed: Optional[int] = None

    def __post_init__(self):
        n = len(self.t)
        if not (len(self.g) == len(self.xi) == self.z.shape[0] == self.sigma.shape[0] == n):
            raise ValueError("trace series must have equal length")
        if n > 1 and not np.all(np.diff(self.t) > 0):
            raise ValueError("times must be strictly increasing")


@dataclass(frozen=True)
class Metrics:
    """Aggregate indices Y_0..Y_n and M_0..M_n over [t_min, t_max]."""

    y: np.ndarray
    m: np.ndarray
    window: tuple[float, float]
    m_definition: str = RMS


def _window_errors(trace: ErrorTrace, i: int, t_min: float, t_max: float) -> np.ndarray:
    if i < 0 or i >= trace.sigma.shape[1]:
        raise IndexError(f"derivative index {i} out of range")
    mask = (trace.t >= t_min) & (trace.t <= t_max)
    if not mask.any():
        raise ValueError(f"window [{t_min}, {t_max}] contains no samples")
    return trace.sigma[mask, i]


def y_index(trace: ErrorTrace, i: int, t_min: float, t_max: float) -> float:
    """Max of |sigma_i| over samples with t_min <= t_k <= t_max."""
    return float(np.max(np.abs(_window_errors(trace, i, t_min, t_max))))


def m_index(
    trace: ErrorTrace, i: int, t_min: float, t_max: float, definition: str = RMS
) -> float:
    """Windowed mean-square index of sigma_i; RMS by default."""
    if definition not in _DEFINITIONS:
        raise ValueError(f"definition must be one of {_DEFINITIONS}, got {definition!r}")
    ms = float(np.mean(_window_errors(trace, i, t_min, t_max) ** 2))
    return float(np.sqrt(ms)) if definition == RMS else ms


def compute_metrics(
    trace: ErrorTrace, t_min: float, t_max: float, definition: str = RMS
) -> Metrics:
    """All indices of one trace over the window."""
    n_cols = trace.sigma.shape[1]
    y = np.array([y_index(trace, i, t_min, t_max) for i in range(n_cols)])
    m = np.array([m_index(trace, i, t_min, t_max, definition) for i in range(n_cols)])
    return Metrics(y=y, m=m, window=(t_min, t_max), m_definition=definition)


def metrics_table(
    traces: list[ErrorTrace], t_min: float, t_max: float, definition: str = RMS
) -> dict[str, Metrics]:
    """Indices per method, keyed and ordered as the traces are given.

    All traces must come from the same scenario; rows are reported in the
    order Y_0..Y_n then M_0..M_n when serialized.
    """
    scenarios = {tr.scenario for tr in traces if tr.scenario is not None}
    if len(scenarios) > 1:
        raise ValueError(f"traces mix scenarios {sorted(scenarios)}")
    out: dict[str, Metrics] = {}
    for tr in traces:
        key = tr.method or f"trace{len(out)}"
        if key in out:
            raise ValueError(f"duplicate method {key!r}")
        out[key] = compute_metrics(tr, t_min, t_max, definition)
    return out

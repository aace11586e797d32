"""One-step update maps for the four discrete differentiator schemes.

Each step is a pure map (state, sample) -> state over the stacked vector
[w; z]. The measurement always enters as the innovation z_0 - g, i.e.
with coefficient -g on its input column: driving the filter with +g
admits no fixed point at zero error and cannot converge.

FTER_D        Euler filter block, exact estimate block, plain tau input maps.
FTER_E        exact transition with the defect block removed, injection at
              the current w_1.
FTER_EXACT_FULL  the raw exact transition including the defect block;
              kept for demonstrating why the defect must be removed.
FTER_I        same structure as FTER_E but the injection is evaluated at
              the *next* w_1, obtained from a per-step scalar solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import (
    DifferentiatorConfig,
    DiffState,
    injection_vector,
    injection_vector_implicit,
    zero_state,
)
from .matrices import StepMatrices, build
from .metrics import ErrorTrace
from .rootfind import ImplicitCoeffs, coefficients, implicit_solve
from .signals import SignalModel, gaussian_seed, measurements, true_state


class Method(Enum):
    FTER_D = "fter-d"
    FTER_E = "fter-e"
    FTER_EXACT_FULL = "fter-exact"
    FTER_I = "fter-i"

    @property
    def label(self) -> str:
        return {
            Method.FTER_D: "FTER-D",
            Method.FTER_E: "FTER-E",
            Method.FTER_EXACT_FULL: "FTER-EXACT",
            Method.FTER_I: "FTER-I",
        }[self]


@dataclass(frozen=True)
class StepInput:
    """One sampled measurement g_k at time t_k = k tau."""

    g_k: float
    k: int
    t_k: float


class DivergenceError(RuntimeError):
    """State left the finite floats; carries the step index when known."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


def _stacked(s: DiffState) -> np.ndarray:
    return np.concatenate((s.w, s.z))


def _check_dims(cfg: DifferentiatorConfig, s: DiffState) -> None:
    if len(s.w) != cfg.n_f or len(s.z) != cfg.n + 1:
        raise ValueError(
            f"state dims ({len(s.w)}, {len(s.z)}) do not match cfg "
            f"({cfg.n_f}, {cfg.n + 1})"
        )
    if not (np.isfinite(s.w).all() and np.isfinite(s.z).all()):
        raise DivergenceError("state is no longer finite")


def _split(cfg: DifferentiatorConfig, y: np.ndarray, xi: float) -> DiffState:
    if not np.isfinite(y).all():
        raise DivergenceError("state is no longer finite")
    return DiffState(y[: cfg.n_f], y[cfg.n_f :], xi)


def fterd_step(
    cfg: DifferentiatorConfig, mats: StepMatrices, s: DiffState, inp: StepInput
) -> DiffState:
    """Reference scheme: Euler filter block and tau-scaled input maps."""
    _check_dims(cfg, s)
    y = mats.a_euler @ _stacked(s)
    y[cfg.n_f - 1] -= mats.tau * inp.g_k
    y += mats.tau * injection_vector(cfg, s.w[0])
    return _split(cfg, y, s.xi)


def ftere_step(
    cfg: DifferentiatorConfig, mats: StepMatrices, s: DiffState, inp: StepInput
) -> DiffState:
    """Exact explicit scheme, injection at the current w_1."""
    _check_dims(cfg, s)
    y = mats.a_exact @ _stacked(s)
    y -= mats.h * inp.g_k
    y += mats.b_star @ injection_vector(cfg, s.w[0])
    return _split(cfg, y, s.xi)


def fter_exact_full_step(
    cfg: DifferentiatorConfig, mats: StepMatrices, s: DiffState, inp: StepInput
) -> DiffState:
    """Raw exact discretization, defect block included; differs from
    ftere_step by exactly [e @ z; 0]."""
    _check_dims(cfg, s)
    y = mats.phi_full @ _stacked(s)
    y -= mats.h * inp.g_k
    y += mats.b_star @ injection_vector(cfg, s.w[0])
    return _split(cfg, y, s.xi)


def _drive(mats: StepMatrices, s: DiffState, g_k: float) -> float:
    """Explicit propagation of the first filter row (the implicit solve's
    drive enters negated as the inclusion constant b_k)."""
    return float(mats.a_exact[0] @ _stacked(s) - mats.h[0] * g_k)


def fteri_step(
    cfg: DifferentiatorConfig, mats: StepMatrices, s: DiffState, inp: StepInput
) -> DiffState:
    """Implicit scheme: solve the scalar inclusion for (w_1', xi'), then
    apply the exact structural map with the implicit injection.

    The returned w_1 is set to the solved value itself; the matrix row
    reproduces it only up to rounding, and the solve is authoritative.
    """
    _check_dims(cfg, s)
    b_k = -_drive(mats, s, inp.g_k)
    if not math.isfinite(b_k):
        raise DivergenceError("state is no longer finite")
    outcome = implicit_solve(ImplicitCoeffs(coefficients(cfg), b_k))
    v = injection_vector_implicit(cfg, outcome.omega_next, outcome.xi_next)
    y = mats.a_exact @ _stacked(s)
    y -= mats.h * inp.g_k
    y += mats.b_star @ v
    y[0] = outcome.omega_next
    return _split(cfg, y, outcome.xi_next)


_STEP_FNS = {
    Method.FTER_D: fterd_step,
    Method.FTER_E: ftere_step,
    Method.FTER_EXACT_FULL: fter_exact_full_step,
    Method.FTER_I: fteri_step,
}


def step_fn(method: Method):
    return _STEP_FNS[method]


def run(
    cfg: DifferentiatorConfig,
    method: Method,
    signal: SignalModel,
    t_end: float,
    s0: DiffState | None = None,
) -> ErrorTrace:
    """Iterate one scheme over k = 0..floor(t_end/tau), recording the
    estimates, the errors against the exact derivatives, and xi.

    Fully deterministic: the measurement sequence comes from the signal's
    own (seeded) noise spec, so identical arguments give identical traces.
    """
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    s = zero_state(cfg) if s0 is None else s0
    _check_dims(cfg, s)

    mats = build(cfg)
    n_steps = int(math.floor(t_end / cfg.tau + 1e-9))
    t = np.arange(n_steps + 1) * cfg.tau
    g = measurements(signal, t)

    z_rec = np.empty((n_steps + 1, cfg.n + 1))
    xi_rec = np.empty(n_steps + 1)
    z_rec[0] = s.z
    xi_rec[0] = s.xi

    step = _STEP_FNS[method]
    for k in range(n_steps):
        try:
            s = step(cfg, mats, s, StepInput(g_k=g[k], k=k, t_k=t[k]))
        except DivergenceError as err:
            raise DivergenceError(
                f"{method.label} diverged at step {k} (t={t[k]:g})", step=k
            ) from err
        z_rec[k + 1] = s.z
        xi_rec[k + 1] = s.xi

    truth = true_state(signal, cfg, t).T  # (n_steps+1, n+1)
    sigma = z_rec - truth
    return ErrorTrace(
        tau=cfg.tau,
        t=t,
        g=g,
        z=z_rec,
        sigma=sigma,
        xi=xi_rec,
        method=method.label,
        scenario=signal.name or None,
        seed=gaussian_seed(signal.noise),
    )

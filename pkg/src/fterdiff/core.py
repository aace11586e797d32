"""Shared domain types, signed-power arithmetic and the injection gain law.

Everything in this module is a pure function over immutable value objects,
so it is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Standard gain set lambda_0..lambda_5 for a differentiation chain of total
# order m = 5 (three derivatives plus two filter states).
DEFAULT_LAMBDAS = (1.1, 6.75, 20.26, 32.24, 23.72, 7.0)


@dataclass(frozen=True)
class DifferentiatorConfig:
    """Parameters of the filtering differentiator.

    n       differentiation order (estimates f0 .. f0^(n))
    n_f     filtering order, number of filter states ahead of the chain
    L       Lipschitz bound on the (n+1)-th derivative of the base signal
    lambdas gains lambda_0 .. lambda_m, m = n + n_f
    tau     sampling period in seconds
    """

    n: int
    n_f: int
    L: float
    lambdas: tuple[float, ...]
    tau: float

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        if self.n_f < 1:
            raise ValueError(f"n_f must be >= 1, got {self.n_f}")
        if not (self.L > 0):
            raise ValueError(f"L must be positive, got {self.L}")
        if not (self.tau > 0):
            raise ValueError(f"tau must be positive, got {self.tau}")
        if len(self.lambdas) != self.m + 1:
            raise ValueError(
                f"need m+1 = {self.m + 1} gains for n={self.n}, n_f={self.n_f}, "
                f"got {len(self.lambdas)}"
            )
        if any(not (lam > 0) for lam in self.lambdas):
            raise ValueError("all gains must be positive")

    @property
    def m(self) -> int:
        return self.n + self.n_f


@dataclass
class DiffState:
    """State of one differentiator: filter states w_1..w_{n_f}, estimates
    z_0..z_n and the support variable xi left by the last implicit step."""

    w: np.ndarray
    z: np.ndarray
    xi: float = 0.0


def zero_state(cfg: DifferentiatorConfig) -> DiffState:
    """All-zero initial state (the conventional starting point)."""
    return DiffState(np.zeros(cfg.n_f), np.zeros(cfg.n + 1), 0.0)


def signed_power(x: float, gamma: float) -> float:
    """Signed power |x|^gamma * sign(x).

    For gamma = 0 this is sign(x), with the single-valued selection
    sign(0) = 0 used by the explicit schemes.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    s = 1.0 if x > 0 else (-1.0 if x < 0 else 0.0)
    if gamma == 0:
        return s
    return abs(x) ** gamma * s


@lru_cache(maxsize=None)
def _injection_law(cfg: DifferentiatorConfig) -> tuple[np.ndarray, np.ndarray]:
    """Per-entry magnitudes lambda_{m-i} L^{(i+1)/(m+1)} and exponents
    (m-i)/(m+1) for i = 0..m, precomputed once per configuration."""
    m = cfg.m
    i = np.arange(m + 1)
    coef = np.array([cfg.lambdas[m - k] for k in i]) * cfg.L ** ((i + 1) / (m + 1))
    exps = (m - i) / (m + 1)
    coef.flags.writeable = False
    exps.flags.writeable = False
    return coef, exps


def psi(i: int, cfg: DifferentiatorConfig, omega1: float) -> float:
    """i-th injection entry -lambda_{m-i} L^{(i+1)/(m+1)} |omega1|^{(m-i)/(m+1)} sign(omega1)."""
    m = cfg.m
    if not 0 <= i <= m:
        raise IndexError(f"i must be in 0..{m}, got {i}")
    return -cfg.lambdas[m - i] * cfg.L ** ((i + 1) / (m + 1)) * signed_power(
        omega1, (m - i) / (m + 1)
    )


def injection_vector(cfg: DifferentiatorConfig, omega1: float) -> np.ndarray:
    """Injection vector [psi_0(omega1), ..., psi_m(omega1)] for the explicit
    schemes, evaluated with the sign(0) = 0 selection."""
    if not math.isfinite(omega1):
        raise ValueError(f"omega1 must be finite, got {omega1}")
    coef, exps = _injection_law(cfg)
    s = 1.0 if omega1 > 0 else (-1.0 if omega1 < 0 else 0.0)
    # |0|^0 evaluates to 1, so the terminal relay entry is s and the rest
    # vanish; one vectorized expression covers every exponent.
    return -coef * s * np.abs(omega1) ** exps


def injection_vector_implicit(
    cfg: DifferentiatorConfig, omega1_next: float, xi_next: float
) -> np.ndarray:
    """Injection vector of the implicit scheme, driven by the next-step
    omega1 and the support variable xi selected by the scalar solve.

    Coincides with injection_vector whenever omega1_next != 0 (where
    xi_next must equal sign(omega1_next)); at omega1_next = 0 the relay
    entry becomes -lambda_0 L xi_next, the smooth dead-zone selection.
    """
    if abs(xi_next) > 1.0:
        raise ValueError(f"|xi_next| must be <= 1, got {xi_next}")
    if omega1_next != 0.0 and xi_next != math.copysign(1.0, omega1_next):
        raise ValueError(
            f"xi_next must equal sign(omega1_next) off zero, got "
            f"omega1_next={omega1_next}, xi_next={xi_next}"
        )
    coef, exps = _injection_law(cfg)
    return -coef * np.abs(omega1_next) ** exps * xi_next

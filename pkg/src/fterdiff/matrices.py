"""Structured step matrices for the discrete differentiator schemes.

All blocks have closed-form entries tau^p / p! placed by position; the
transition matrix of an integrator chain is its own truncated exponential,
so every construction here is exact (no iteration, no approximation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import DifferentiatorConfig


def transition_matrix(dim: int, tau: float) -> np.ndarray:
    """Taylor transition matrix: entry (i, j) = tau^(j-i) / (j-i)! for j >= i."""
    fact = [float(math.factorial(p)) for p in range(dim)]
    out = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            out[i, j] = tau ** (j - i) / fact[j - i]
    return out


def input_matrix(dim: int, tau: float) -> np.ndarray:
    """Integral of the transition matrix over one period:
    entry (i, j) = tau^(j-i+1) / (j-i+1)! for j >= i."""
    fact = [float(math.factorial(p)) for p in range(dim + 1)]
    out = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            out[i, j] = tau ** (j - i + 1) / fact[j - i + 1]
    return out


@dataclass(frozen=True)
class StepMatrices:
    """Precomputed matrices for one (config, tau); arrays are read-only.

    phi_full  (m+1)x(m+1) Taylor transition of the stacked chain
    phi_z     (n+1)x(n+1) block for the estimate states
    phi_w     n_f x n_f block for the filter states
    c         Euler filter block (ones diagonal, tau superdiagonal)
    d         Euler coupling, single tau at the bottom-left
    g         exact coupling, first column tau^{n_f}/n_f! .. tau
    h         measurement input column [tau^{n_f}/n_f!, .., tau, 0, .., 0]
    b_star    (m+1)x(m+1) injection input map
    e         defect block: upper-right of phi_full minus g
    a_euler   assembled [[c, d], [0, phi_z]] transition
    a_exact   assembled [[phi_w, g], [0, phi_z]] transition
    """

    tau: float
    phi_full: np.ndarray
    phi_z: np.ndarray
    phi_w: np.ndarray
    c: np.ndarray
    d: np.ndarray
    g: np.ndarray
    h: np.ndarray
    b_star: np.ndarray
    e: np.ndarray
    a_euler: np.ndarray
    a_exact: np.ndarray


@lru_cache(maxsize=None)
def build(cfg: DifferentiatorConfig) -> StepMatrices:
    """Construct every step matrix for cfg; cached per configuration."""
    n, n_f, m, tau = cfg.n, cfg.n_f, cfg.m, cfg.tau
    dim = m + 1

    fact = [float(math.factorial(p)) for p in range(dim + 1)]

    phi_full = transition_matrix(dim, tau)
    phi_z = transition_matrix(n + 1, tau)
    phi_w = transition_matrix(n_f, tau)
    b_star = input_matrix(dim, tau)

    c = np.eye(n_f)
    for i in range(n_f - 1):
        c[i, i + 1] = tau

    d = np.zeros((n_f, n + 1))
    d[n_f - 1, 0] = tau

    g = np.zeros((n_f, n + 1))
    for i in range(n_f):
        g[i, 0] = tau ** (n_f - i) / fact[n_f - i]

    h = np.zeros(dim)
    h[:n_f] = g[:, 0]

    e = np.zeros((n_f, n + 1))
    for i in range(n_f):
        for j in range(1, n + 1):
            e[i, j] = tau ** (n_f + j - i) / fact[n_f + j - i]

    a_euler = np.zeros((dim, dim))
    a_euler[:n_f, :n_f] = c
    a_euler[:n_f, n_f:] = d
    a_euler[n_f:, n_f:] = phi_z

    a_exact = np.zeros((dim, dim))
    a_exact[:n_f, :n_f] = phi_w
    a_exact[:n_f, n_f:] = g
    a_exact[n_f:, n_f:] = phi_z

    mats = StepMatrices(
        tau=tau,
        phi_full=phi_full,
        phi_z=phi_z,
        phi_w=phi_w,
        c=c,
        d=d,
        g=g,
        h=h,
        b_star=b_star,
        e=e,
        a_euler=a_euler,
        a_exact=a_exact,
    )
    for arr in (phi_full, phi_z, phi_w, c, d, g, h, b_star, e, a_euler, a_exact):
        arr.flags.writeable = False
    return mats


def semigroup_check(cfg: DifferentiatorConfig, tau1: float, tau2: float) -> float:
    """Max absolute entrywise deviation of Phi(tau1) Phi(tau2) from
    Phi(tau1 + tau2); a diagnostic for the exactness of the transition."""
    if tau1 < 0 or tau2 < 0:
        raise ValueError("sampling periods must be nonnegative")
    dim = cfg.m + 1
    lhs = transition_matrix(dim, tau1) @ transition_matrix(dim, tau2)
    rhs = transition_matrix(dim, tau1 + tau2)
    return float(np.max(np.abs(lhs - rhs)))

"""Per-step scalar solve of the implicit scheme.

One step of the implicit differentiator reduces to

    omega + a_m |omega|^{m/(m+1)} sgn + ... + a_1 |omega|^{1/(m+1)} sgn
          + a_0 xi + b = 0,       xi in sign(omega),

for the next first filter state omega. The solution is a three-way case
split on b: a dead zone where omega = 0 exactly and xi interpolates the
relay, and two mirror-image branches where omega = -(r0)^{m+1} or
+(r0)^{m+1} for the unique positive root r0 of a polynomial with exactly
one sign change. The root is found by safeguarded Halley iteration inside
a bracket, so convergence is guaranteed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .core import DifferentiatorConfig

# |p(r)| <= RESIDUAL_RTOL * max(1, |constant term|) terminates the iteration.
RESIDUAL_RTOL = 1e-12
BRACKET_RTOL = 1e-15
MAX_ITERATIONS = 200


class RootSolveError(RuntimeError):
    """Root iteration failed to converge (bracketing makes this a bug)."""


class Case(Enum):
    NEGATIVE_ROOT = "negative_root"
    DEAD_ZONE = "dead_zone"
    POSITIVE_ROOT = "positive_root"


@dataclass(frozen=True)
class ImplicitCoeffs:
    """Coefficients a_0..a_m of the scalar inclusion plus the drive b_k."""

    a: tuple[float, ...]
    b_k: float


@dataclass(frozen=True)
class CaseOutcome:
    case_id: Case
    omega_next: float
    xi_next: float
    iterations: int
    residual: float


@lru_cache(maxsize=None)
def coefficients(cfg: DifferentiatorConfig) -> tuple[float, ...]:
    """Inclusion coefficients a_l = tau^{m-l+1}/(m-l+1)! lambda_l L^{(m-l+1)/(m+1)}.

    State-independent, so cached per configuration. a_l equals the first
    row of the injection input map times the matching gain, which keeps
    the solve consistent with the stepper's linear algebra.
    """
    m, tau, L = cfg.m, cfg.tau, cfg.L
    return tuple(
        tau ** (m - l + 1)
        / math.factorial(m - l + 1)
        * cfg.lambdas[l]
        * L ** ((m - l + 1) / (m + 1))
        for l in range(m + 1)
    )


def _eval_poly(coeffs_desc, r: float):
    """Horner evaluation of p, p' and p'' at r (descending coefficients)."""
    p = coeffs_desc[0]
    dp = 0.0
    ddp = 0.0
    for c in coeffs_desc[1:]:
        ddp = ddp * r + dp
        dp = dp * r + p
        p = p * r + c
    return p, dp, 2.0 * ddp


def halley_positive_root(poly, bracket_hi: float) -> tuple[float, int]:
    """Unique positive root of a polynomial with one coefficient sign change.

    poly: descending coefficients, all positive except a strictly negative
    constant term; by Descartes' rule the positive root exists and is
    unique. bracket_hi must satisfy p(bracket_hi) > 0 (a Cauchy-style bound
    works). Halley updates r <- r - 2 p p' / (2 p'^2 - p p'') are accepted
    only inside the live bracket [lo, hi] with p(lo) < 0 < p(hi); anything
    else falls back to bisection, so the iteration cannot escape or stall.

    Returns (root, iterations).
    """
    poly = tuple(float(c) for c in poly)
    if len(poly) < 2:
        raise ValueError("polynomial must have degree >= 1")
    if any(c <= 0 for c in poly[:-1]) or poly[-1] >= 0:
        raise ValueError(
            "expected positive coefficients with a negative constant term "
            "(exactly one sign change)"
        )

    const = poly[-1]
    tol_p = RESIDUAL_RTOL * max(1.0, abs(const))
    tol_w = BRACKET_RTOL * bracket_hi

    lo, hi = 0.0, float(bracket_hi)
    # Exact when the middle coefficients vanish (large-drive regime).
    r = min(hi, abs(const) ** (1.0 / (len(poly) - 1)))
    iterations = 0
    while iterations < MAX_ITERATIONS:
        iterations += 1
        p, dp, ddp = _eval_poly(poly, r)
        if p < 0.0:
            lo = r
        elif p > 0.0:
            hi = r
        if abs(p) <= tol_p or (hi - lo) <= tol_w:
            break
        denom = 2.0 * dp * dp - p * ddp
        if denom != 0.0:
            step = 2.0 * p * dp / denom
            cand = r - step
        else:
            cand = lo  # force bisection
        if not (lo < cand < hi):
            cand = 0.5 * (lo + hi)
        r = cand
    else:
        raise RootSolveError(
            f"no convergence after {MAX_ITERATIONS} iterations (|p|={p:g})"
        )

    # One guarded polish step; cubic convergence turns a barely-passing
    # residual into an essentially exact root.
    p, dp, ddp = _eval_poly(poly, r)
    denom = 2.0 * dp * dp - p * ddp
    if denom != 0.0:
        cand = r - 2.0 * p * dp / denom
        if lo < cand < hi:
            p_new, _, _ = _eval_poly(poly, cand)
            if abs(p_new) <= abs(p):
                r = cand
                iterations += 1
    return r, iterations


def implicit_solve(coeffs: ImplicitCoeffs) -> CaseOutcome:
    """Resolve the scalar inclusion for (omega_next, xi_next).

    Dead zone |b_k| <= a_0: omega_next = 0 and xi_next = -b_k / a_0.
    b_k > a_0: omega_next = -(r0)^{m+1}, xi_next = -1, r0 the positive root
    of r^{m+1} + a_m r^m + ... + a_1 r + (a_0 - b_k).
    b_k < -a_0: the mirror image with constant term a_0 + b_k.
    """
    a = coeffs.a
    b = coeffs.b_k
    if any(not (al > 0) for al in a):
        raise ValueError("all inclusion coefficients must be positive")
    a0 = a[0]
    if abs(b) <= a0:
        return CaseOutcome(Case.DEAD_ZONE, 0.0, -b / a0, 0, 0.0)

    const = (a0 - b) if b > a0 else (a0 + b)
    poly = (1.0, *a[:0:-1], const)
    bracket_hi = 1.0 + max(a) + abs(const)
    r0, iterations = halley_positive_root(poly, bracket_hi)
    residual = abs(_eval_poly(poly, r0)[0])
    omega = r0 ** len(a)  # degree m+1
    if b > a0:
        return CaseOutcome(Case.NEGATIVE_ROOT, -omega, -1.0, iterations, residual)
    return CaseOutcome(Case.POSITIVE_ROOT, omega, 1.0, iterations, residual)

"""Analytic test signals with exact derivative closures and noise models.

A signal is a sum of a polynomial and sinusoidal terms, so every
derivative is available in closed form; the three benchmark scenarios are
shipped as presets. Noise is attached as a specification (deterministic
high-frequency cosine, seeded iid Gaussian, or a sum of both) and sampled
per measurement instant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np

from .core import DifferentiatorConfig


@dataclass(frozen=True)
class GaussianIID:
    """Zero-mean iid Gaussian measurement noise, reproducible from seed."""

    sigma: float
    seed: int = 0


@dataclass(frozen=True)
class HFCosine:
    """Deterministic high-frequency cosine noise amplitude*cos(frequency*t + phase)."""

    amplitude: float
    frequency: float
    phase: float


@dataclass(frozen=True)
class SumNoise:
    parts: tuple["NoiseSpec", ...]


NoiseSpec = Union[None, GaussianIID, HFCosine, SumNoise]


def noise_samples(spec: NoiseSpec, t: np.ndarray) -> np.ndarray:
    """Noise values at the sample instants t; Gaussian draws are generated
    in sample order from the spec's own seed."""
    t = np.asarray(t, dtype=float)
    if spec is None:
        return np.zeros_like(t)
    if isinstance(spec, GaussianIID):
        rng = np.random.default_rng(spec.seed)
        return rng.normal(0.0, spec.sigma, t.shape)
    if isinstance(spec, HFCosine):
        return spec.amplitude * np.cos(spec.frequency * t + spec.phase)
    if isinstance(spec, SumNoise):
        out = np.zeros_like(t)
        for part in spec.parts:
            out += noise_samples(part, t)
        return out
    raise TypeError(f"unknown noise spec {spec!r}")


def deterministic_noise(spec: NoiseSpec, t):
    """Only the deterministic noise components, evaluated at arbitrary t
    (used by the continuous-time reference, where iid draws have no
    meaning)."""
    if spec is None or isinstance(spec, GaussianIID):
        return np.zeros_like(np.asarray(t, dtype=float))
    if isinstance(spec, HFCosine):
        return spec.amplitude * np.cos(spec.frequency * np.asarray(t, dtype=float) + spec.phase)
    if isinstance(spec, SumNoise):
        out = np.zeros_like(np.asarray(t, dtype=float))
        for part in spec.parts:
            out += deterministic_noise(part, t)
        return out
    raise TypeError(f"unknown noise spec {spec!r}")


def reseed(spec: NoiseSpec, seed: int) -> NoiseSpec:
    """Copy of the spec with every Gaussian component reseeded."""
    if isinstance(spec, GaussianIID):
        return replace(spec, seed=seed)
    if isinstance(spec, SumNoise):
        return SumNoise(tuple(reseed(p, seed) for p in spec.parts))
    return spec


def gaussian_seed(spec: NoiseSpec) -> Optional[int]:
    """Seed of the first Gaussian component, if any (trace metadata)."""
    if isinstance(spec, GaussianIID):
        return spec.seed
    if isinstance(spec, SumNoise):
        for part in spec.parts:
            s = gaussian_seed(part)
            if s is not None:
                return s
    return None


@dataclass(frozen=True)
class SignalModel:
    """Base signal with derivative closures derivs[i] = f0^(i), an additive
    noise spec, and an optional known bound on the next derivative."""

    derivs: tuple[Callable, ...]
    noise: NoiseSpec = None
    l_true: Optional[float] = None
    name: str = ""

    def f0(self, t):
        return self.derivs[0](t)

    def with_seed(self, seed: int) -> "SignalModel":
        return replace(self, noise=reseed(self.noise, seed))


def make_signal(
    poly: tuple[float, ...] = (),
    sines: tuple[tuple[float, float, float], ...] = (),
    order: int = 6,
    noise: NoiseSpec = None,
    l_true: Optional[float] = None,
    name: str = "",
) -> SignalModel:
    """Signal sum_j poly[j] t^j + sum (amp, freq, phase) amp*sin(freq*t + phase).

    Derivative closures are generated up to `order`: polynomial
    coefficients shift down exactly, and each sine derivative is a sine
    with a quarter-period phase advance scaled by freq.
    """
    poly = tuple(float(c) for c in poly)
    sines = tuple((float(a), float(w), float(p)) for a, w, p in sines)

    def deriv(i: int) -> Callable:
        pcoef = [
            poly[j] * math.factorial(j) / math.factorial(j - i)
            for j in range(i, len(poly))
        ]
        scoef = [(a * w**i, w, p + i * math.pi / 2.0) for a, w, p in sines]

        def f(t, _pc=pcoef, _sc=scoef):
            t = np.asarray(t, dtype=float)
            out = np.zeros_like(t)
            for k, c in enumerate(_pc):
                out += c * t**k
            for a, w, p in _sc:
                out += a * np.sin(w * t + p)
            return out if out.ndim else float(out)

        return f

    return SignalModel(
        derivs=tuple(deriv(i) for i in range(order + 1)),
        noise=noise,
        l_true=l_true,
        name=name,
    )


def scenario_signal(scenario: int) -> SignalModel:
    """The three benchmark scenarios.

    1: t^4 + sin(t), noise-free (bound 25 on the fourth derivative).
    2: sin(3t) + cos(2t) - sin(t) with iid N(0, 0.1^2) measurement noise.
    3: same base with cos(10000 t + 0.7791) + iid N(0, 0.5^2) noise.
    """
    base = (
        (1.0, 3.0, 0.0),
        (1.0, 2.0, math.pi / 2.0),  # cos(2t) = sin(2t + pi/2)
        (-1.0, 1.0, 0.0),
    )
    if scenario == 1:
        return make_signal(
            poly=(0.0, 0.0, 0.0, 0.0, 1.0),
            sines=((1.0, 1.0, 0.0),),
            l_true=25.0,
            name="scenario1",
        )
    if scenario == 2:
        return make_signal(
            sines=base,
            noise=GaussianIID(0.1),
            l_true=98.0,
            name="scenario2",
        )
    if scenario == 3:
        return make_signal(
            sines=base,
            noise=SumNoise((HFCosine(1.0, 10000.0, 0.7791), GaussianIID(0.5))),
            l_true=98.0,
            name="scenario3",
        )
    raise ValueError(f"unknown scenario {scenario!r} (expected 1, 2 or 3)")


def measurements(model: SignalModel, t: np.ndarray) -> np.ndarray:
    """Measured samples g = f0(t) + noise(t) on the whole grid at once."""
    t = np.asarray(t, dtype=float)
    return model.f0(t) + noise_samples(model.noise, t)


def sample(model: SignalModel, cfg: DifferentiatorConfig, k: int, rng) -> "StepInput":
    """One measurement g_k = f0(k tau) + noise, consuming Gaussian draws
    from `rng` in k-order (call with increasing k on one stream)."""
    from .steppers import StepInput

    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    t_k = k * cfg.tau
    g = float(model.f0(t_k)) + float(deterministic_noise(model.noise, t_k))
    g += _gaussian_draw(model.noise, rng)
    return StepInput(g_k=g, k=k, t_k=t_k)


def _gaussian_draw(spec: NoiseSpec, rng) -> float:
    if isinstance(spec, GaussianIID):
        return float(rng.normal(0.0, spec.sigma))
    if isinstance(spec, SumNoise):
        return sum(_gaussian_draw(p, rng) for p in spec.parts)
    return 0.0


def true_state(model: SignalModel, cfg: DifferentiatorConfig, t) -> np.ndarray:
    """Exact [f0(t), f0'(t), ..., f0^(n)(t)] for error computation."""
    if cfg.n >= len(model.derivs):
        raise ValueError(
            f"model provides derivatives up to order {len(model.derivs) - 1}, "
            f"need {cfg.n}"
        )
    return np.array([model.derivs[i](t) for i in range(cfg.n + 1)])

import math

import numpy as np
import pytest

from fterdiff.core import (
    DEFAULT_LAMBDAS,
    DiffState,
    DifferentiatorConfig,
    injection_vector,
    signed_power,
    zero_state,
)
from fterdiff.matrices import build
from fterdiff.rootfind import coefficients
from fterdiff.signals import HFCosine, make_signal, measurements, scenario_signal
from fterdiff.steppers import (
    DivergenceError,
    Method,
    StepInput,
    fter_exact_full_step,
    fterd_step,
    ftere_step,
    fteri_step,
    run,
)

PRESET = DifferentiatorConfig(n=3, n_f=2, L=25.0, lambdas=DEFAULT_LAMBDAS, tau=0.1)
ALL_STEPPERS = (fterd_step, ftere_step, fter_exact_full_step, fteri_step)


def random_state(cfg, rng, scale=1.0):
    return DiffState(
        rng.normal(0, scale, cfg.n_f), rng.normal(0, scale, cfg.n + 1), 0.0
    )


def transcribe_fterd(cfg, s, g_k):
    """Independent straight-line transcription of the reference recursion,
    scalar loops only (no shared matrix code)."""
    n, n_f, m, tau, L = cfg.n, cfg.n_f, cfg.m, cfg.tau, cfg.L

    def inj(i, x):
        lam = cfg.lambdas[m - i]
        return -lam * L ** ((i + 1) / (m + 1)) * signed_power(x, (m - i) / (m + 1))

    w, z = s.w, s.z
    w1 = w[0]
    w_next = np.empty(n_f)
    for i_f in range(1, n_f):  # rows 1..n_f-1 of the Euler filter block
        w_next[i_f - 1] = w[i_f - 1] + tau * w[i_f] + tau * inj(i_f - 1, w1)
    w_next[n_f - 1] = w[n_f - 1] + tau * (z[0] - g_k) + tau * inj(n_f - 1, w1)
    z_next = np.empty(n + 1)
    for i_d in range(n + 1):
        acc = 0.0
        for j in range(i_d, n + 1):
            acc += tau ** (j - i_d) / math.factorial(j - i_d) * z[j]
        z_next[i_d] = acc + tau * inj(n_f + i_d, w1)
    return w_next, z_next


class TestFterdStep:
    def test_equilibrium_fixed_point(self):
        s = DiffState(np.zeros(2), np.array([5.0, 0.0, 0.0, 0.0]))
        out = fterd_step(PRESET, build(PRESET), s, StepInput(5.0, 0, 0.0))
        np.testing.assert_array_equal(out.w, s.w)
        np.testing.assert_array_equal(out.z, s.z)

    def test_hand_trace(self):
        # n=1, n_f=1: innovation z0-g feeds the filter; zero injection at w1=0
        cfg = DifferentiatorConfig(n=1, n_f=1, L=1.0, lambdas=(1.0, 1.0, 1.0), tau=0.1)
        s = DiffState(np.zeros(1), np.array([1.0, 0.0]))
        out = fterd_step(cfg, build(cfg), s, StepInput(0.0, 0, 0.0))
        assert out.w[0] == pytest.approx(0.1, abs=1e-16)
        np.testing.assert_allclose(out.z, [1.0, 0.0], rtol=0, atol=0)

    def test_matches_independent_transcription(self):
        # several scenario-1 steps from the zero state
        sig = scenario_signal(1)
        g = measurements(sig, np.arange(6) * PRESET.tau)
        mats = build(PRESET)
        s = zero_state(PRESET)
        for k in range(5):
            w_ref, z_ref = transcribe_fterd(PRESET, s, g[k])
            s = fterd_step(PRESET, mats, s, StepInput(g[k], k, k * PRESET.tau))
            np.testing.assert_allclose(s.w, w_ref, rtol=1e-15, atol=1e-15)
            np.testing.assert_allclose(s.z, z_ref, rtol=1e-15, atol=1e-15)

    def test_dimension_mismatch(self):
        s = DiffState(np.zeros(3), np.zeros(4))
        with pytest.raises(ValueError):
            fterd_step(PRESET, build(PRESET), s, StepInput(0.0, 0, 0.0))

    def test_nonfinite_raises(self):
        s = DiffState(np.array([np.inf, 0.0]), np.zeros(4))
        with pytest.raises(DivergenceError):
            fterd_step(PRESET, build(PRESET), s, StepInput(0.0, 0, 0.0))


class TestFtereStep:
    def test_polynomial_propagation_exact(self):
        # w=0 and g=0 silence the injection; the estimate block then
        # propagates a cubic's derivative stack exactly
        t, tau = 1.0, PRESET.tau
        p = lambda t: 2 + 3 * t - t**2 + 0.5 * t**3
        dp = lambda t: 3 - 2 * t + 1.5 * t**2
        ddp = lambda t: -2 + 3 * t
        s = DiffState(np.zeros(2), np.array([p(t), dp(t), ddp(t), 3.0]))
        out = ftere_step(PRESET, build(PRESET), s, StepInput(0.0, 0, t))
        expect = [p(t + tau), dp(t + tau), ddp(t + tau), 3.0]
        np.testing.assert_allclose(out.z, expect, rtol=1e-13)

    def test_equilibrium_fixed_point(self):
        s = DiffState(np.zeros(2), np.array([5.0, 0.0, 0.0, 0.0]))
        out = ftere_step(PRESET, build(PRESET), s, StepInput(5.0, 0, 0.0))
        np.testing.assert_array_equal(out.w, s.w)
        np.testing.assert_array_equal(out.z, s.z)

    def test_difference_from_fterd_decomposes(self):
        # (ftere - fterd)(s) = [(phi_w - c) w + (g - d) z; 0]
        #                      - (h - tau e_nf) g + (b_star - tau I) u
        rng = np.random.default_rng(12)
        mats = build(PRESET)
        n_f = PRESET.n_f
        for _ in range(20):
            s = random_state(PRESET, rng, scale=3.0)
            g_k = rng.normal()
            inp = StepInput(g_k, 0, 0.0)
            a = ftere_step(PRESET, mats, s, inp)
            b = fterd_step(PRESET, mats, s, inp)
            diff = np.concatenate((a.w - b.w, a.z - b.z))
            expect = np.zeros(6)
            expect[:n_f] = (mats.phi_w - mats.c) @ s.w + (mats.g - mats.d) @ s.z
            h_minus = mats.h.copy()
            h_minus[n_f - 1] -= mats.tau
            expect -= h_minus * g_k
            u = injection_vector(PRESET, s.w[0])
            expect += (mats.b_star - mats.tau * np.eye(6)) @ u
            scale = max(1.0, np.max(np.abs(expect)))
            np.testing.assert_allclose(diff, expect, rtol=0, atol=1e-14 * scale)


class TestFterExactFullStep:
    def test_defect_identity(self):
        # full-exact minus defect-free step equals [e @ z; 0]
        rng = np.random.default_rng(13)
        mats = build(PRESET)
        for _ in range(20):
            s = random_state(PRESET, rng, scale=10.0)
            inp = StepInput(rng.normal(), 0, 0.0)
            a = fter_exact_full_step(PRESET, mats, s, inp)
            b = ftere_step(PRESET, mats, s, inp)
            ez = mats.e @ s.z
            scale = max(1.0, np.max(np.abs(ez)))
            np.testing.assert_allclose(a.w - b.w, ez, rtol=0, atol=1e-12 * scale)
            np.testing.assert_allclose(a.z, b.z, rtol=0, atol=0)

    def test_zero_z_coincides(self):
        rng = np.random.default_rng(14)
        mats = build(PRESET)
        s = DiffState(rng.normal(0, 1, 2), np.zeros(4))
        inp = StepInput(rng.normal(), 0, 0.0)
        a = fter_exact_full_step(PRESET, mats, s, inp)
        b = ftere_step(PRESET, mats, s, inp)
        np.testing.assert_array_equal(a.w, b.w)
        np.testing.assert_array_equal(a.z, b.z)

    def test_long_run_defect_grows(self):
        # on the quartic scenario the retained defect block biases the
        # filter states; the defect-free variant stays much tighter
        sig = scenario_signal(1)
        full = run(PRESET, Method.FTER_EXACT_FULL, sig, 25.0)
        clean = run(PRESET, Method.FTER_E, sig, 25.0)
        w = (full.t >= 10.0)
        y_full = np.max(np.abs(full.sigma[w, 0]))
        y_clean = np.max(np.abs(clean.sigma[w, 0]))
        assert y_full > 3.0 * y_clean


class TestFteriStep:
    def test_equilibrium_dead_zone(self):
        s = DiffState(np.zeros(2), np.array([5.0, 0.0, 0.0, 0.0]))
        out = fteri_step(PRESET, build(PRESET), s, StepInput(5.0, 0, 0.0))
        np.testing.assert_array_equal(out.w, s.w)
        np.testing.assert_array_equal(out.z, s.z)
        assert out.xi == 0.0

    def test_residual_and_selection_randomized(self):
        # the returned (w1', xi') must satisfy the scalar inclusion row
        rng = np.random.default_rng(15)
        mats = build(PRESET)
        a = coefficients(PRESET)
        m, n_f, tau = PRESET.m, PRESET.n_f, PRESET.tau
        h0 = mats.h[0]
        for _ in range(300):
            scale = 10.0 ** rng.uniform(-8, 2)
            s = random_state(PRESET, rng, scale)
            g_k = rng.normal(0, scale)
            P = sum(
                tau**l / math.factorial(l) * s.w[l] for l in range(n_f)
            ) + h0 * (s.z[0] - g_k)
            b = -P
            out = fteri_step(PRESET, mats, s, StepInput(g_k, 0, 0.0))
            om, xi = out.w[0], out.xi
            residual = (
                om
                + sum(a[l] * signed_power(om, l / (m + 1)) for l in range(1, m + 1))
                + a[0] * xi
                + b
            )
            assert abs(residual) <= 1e-9 * max(1.0, abs(b))
            if om != 0.0:
                assert xi == math.copysign(1.0, om)
            else:
                assert abs(xi) <= 1.0

    def test_small_tau_matches_explicit(self):
        rng = np.random.default_rng(16)
        taus = (1e-3, 1e-4, 1e-5)
        for _ in range(3):
            w = rng.normal(0, 1, 2)
            w[0] = math.copysign(max(abs(w[0]), 0.1), w[0])
            z = rng.normal(0, 1, 4)
            g_k = rng.normal()
            norms = []
            for tau in taus:
                cfg = DifferentiatorConfig(
                    n=3, n_f=2, L=25.0, lambdas=DEFAULT_LAMBDAS, tau=tau
                )
                mats = build(cfg)
                inp = StepInput(g_k, 0, 0.0)
                si = fteri_step(cfg, mats, DiffState(w.copy(), z.copy()), inp)
                se = ftere_step(cfg, mats, DiffState(w.copy(), z.copy()), inp)
                norms.append(
                    np.linalg.norm(np.concatenate((si.w - se.w, si.z - se.z)))
                )
            slope = np.polyfit(np.log(taus), np.log(norms), 1)[0]
            assert slope >= 1.5

    def test_printed_drive_formula_sign(self):
        # the transcribed drive formula and the propagation-derived one
        # disagree exactly in the sign of the innovation channel; the
        # filter-state sum agrees
        rng = np.random.default_rng(17)
        mats = build(PRESET)
        tau, n_f = PRESET.tau, PRESET.n_f
        h0 = mats.h[0]
        for _ in range(20):
            s = random_state(PRESET, rng)
            g_k = rng.normal()
            transcribed = h0 * (s.z[0] - g_k) - sum(
                tau**l / math.factorial(l) * s.w[l] for l in range(n_f)
            )
            derived = -float(mats.a_exact[0] @ np.concatenate((s.w, s.z)) - h0 * g_k)
            gap = transcribed - derived
            assert gap == pytest.approx(2.0 * h0 * (s.z[0] - g_k), rel=1e-9)


class TestRun:
    def test_t_end_zero_initial_only(self):
        trace = run(PRESET, Method.FTER_D, scenario_signal(1), 0.0)
        assert len(trace.t) == 1
        assert trace.t[0] == 0.0

    def test_constant_signal_equilibrium_start(self):
        sig = make_signal(poly=(5.0,), l_true=1.0, name="const")
        cfg = DifferentiatorConfig(n=3, n_f=2, L=1.0, lambdas=DEFAULT_LAMBDAS, tau=0.1)
        s0 = DiffState(np.zeros(2), np.array([5.0, 0.0, 0.0, 0.0]))
        for method in Method:
            trace = run(cfg, method, sig, 5.0, s0)
            assert np.all(trace.sigma == 0.0), method

    def test_bitwise_determinism(self):
        sig = scenario_signal(2).with_seed(3)
        a = run(PRESET, Method.FTER_I, sig, 5.0)
        b = run(PRESET, Method.FTER_I, sig, 5.0)
        np.testing.assert_array_equal(a.z, b.z)
        np.testing.assert_array_equal(a.g, b.g)
        np.testing.assert_array_equal(a.xi, b.xi)

    def test_divergence_records_step(self):
        sig = make_signal(poly=(5.0,), noise=HFCosine(float("inf"), 1.0, 0.0))
        with pytest.raises(DivergenceError) as err:
            run(PRESET, Method.FTER_D, sig, 5.0)
        assert err.value.step == 0

    def test_step_count(self):
        trace = run(PRESET, Method.FTER_E, scenario_signal(1), 25.0)
        assert len(trace.t) == 251
        assert trace.t[-1] == pytest.approx(25.0)

    def test_trace_metadata(self):
        trace = run(PRESET, Method.FTER_I, scenario_signal(2).with_seed(4), 2.0)
        assert trace.method == "FTER-I"
        assert trace.scenario == "scenario2"
        assert trace.seed == 4

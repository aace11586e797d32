import numpy as np
import pytest

from fterdiff.metrics import (
    MEAN_SQUARE,
    RMS,
    ErrorTrace,
    compute_metrics,
    m_index,
    metrics_table,
    y_index,
)


def make_trace(sigma, tau=1.0, method="X", scenario="s"):
    sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
    if sigma.shape[0] == 1 and sigma.shape[1] > 1:
        sigma = sigma.T
    n = sigma.shape[0]
    t = np.arange(n) * tau
    return ErrorTrace(
        tau=tau,
        t=t,
        g=np.zeros(n),
        z=sigma.copy(),
        sigma=sigma,
        xi=np.zeros(n),
        method=method,
        scenario=scenario,
    )


class TestYIndex:
    def test_max_abs(self):
        tr = make_trace([0.5, -2.0, 1.0])
        assert y_index(tr, 0, 0.0, 2.0) == 2.0

    def test_zero_error(self):
        tr = make_trace([0.0, 0.0, 0.0])
        assert y_index(tr, 0, 0.0, 2.0) == 0.0

    def test_window_restricts(self):
        tr = make_trace([9.0, 1.0, 2.0])
        assert y_index(tr, 0, 1.0, 2.0) == 2.0

    def test_empty_window(self):
        tr = make_trace([1.0, 2.0])
        with pytest.raises(ValueError):
            y_index(tr, 0, 10.0, 20.0)

    def test_monotone_in_window_inclusion(self):
        rng = np.random.default_rng(9)
        tr = make_trace(rng.normal(0, 1, 50))
        prev = 0.0
        for hi in range(5, 50, 5):
            y = y_index(tr, 0, 0.0, float(hi))
            assert y >= prev
            prev = y


class TestMIndex:
    def test_rms_and_meansquare(self):
        tr = make_trace([3.0, 4.0])
        assert m_index(tr, 0, 0.0, 1.0, RMS) == pytest.approx(np.sqrt(12.5))
        assert m_index(tr, 0, 0.0, 1.0, MEAN_SQUARE) == pytest.approx(12.5)

    def test_constant_error_rms_is_abs(self):
        tr = make_trace([-2.5] * 10)
        assert m_index(tr, 0, 0.0, 9.0) == pytest.approx(2.5)

    def test_rms_below_y(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            tr = make_trace(rng.normal(0, 3, 40))
            assert m_index(tr, 0, 0.0, 39.0) <= y_index(tr, 0, 0.0, 39.0)

    def test_bad_definition(self):
        tr = make_trace([1.0, 2.0])
        with pytest.raises(ValueError):
            m_index(tr, 0, 0.0, 1.0, "median")

    def test_scale_equivariance(self):
        rng = np.random.default_rng(11)
        sig = rng.normal(0, 1, 30)
        c = 7.3
        a, b = make_trace(sig), make_trace(c * sig)
        assert y_index(b, 0, 0.0, 29.0) == pytest.approx(c * y_index(a, 0, 0.0, 29.0))
        assert m_index(b, 0, 0.0, 29.0) == pytest.approx(c * m_index(a, 0, 0.0, 29.0))


class TestMetricsTable:
    def test_zero_trace(self):
        table = metrics_table([make_trace(np.zeros((5, 4)))], 0.0, 4.0)
        m = next(iter(table.values()))
        assert np.all(m.y == 0.0) and np.all(m.m == 0.0)

    def test_row_count(self):
        table = metrics_table([make_trace(np.zeros((5, 4)))], 0.0, 4.0)
        m = next(iter(table.values()))
        # serialized rows are Y_0..Y_n then M_0..M_n: 2(n+1)
        assert len(m.y) + len(m.m) == 2 * 4

    def test_mismatched_scenarios_rejected(self):
        a = make_trace([1.0, 2.0], method="A", scenario="s1")
        b = make_trace([1.0, 2.0], method="B", scenario="s2")
        with pytest.raises(ValueError):
            metrics_table([a, b], 0.0, 1.0)

    def test_keyed_by_method_in_order(self):
        a = make_trace([1.0, 2.0], method="A")
        b = make_trace([2.0, 4.0], method="B")
        table = metrics_table([a, b], 0.0, 1.0)
        assert list(table) == ["A", "B"]
        assert table["B"].y[0] == 2 * table["A"].y[0]

    def test_compute_metrics_window_recorded(self):
        m = compute_metrics(make_trace(np.ones((5, 2))), 1.0, 3.0, MEAN_SQUARE)
        assert m.window == (1.0, 3.0)
        assert m.m_definition == MEAN_SQUARE


class TestErrorTraceValidation:
    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ErrorTrace(
                tau=1.0,
                t=np.arange(3.0),
                g=np.zeros(2),
                z=np.zeros((3, 1)),
                sigma=np.zeros((3, 1)),
                xi=np.zeros(3),
            )

    def test_nonincreasing_times(self):
        with pytest.raises(ValueError):
            ErrorTrace(
                tau=1.0,
                t=np.array([0.0, 2.0, 1.0]),
                g=np.zeros(3),
                z=np.zeros((3, 1)),
                sigma=np.zeros((3, 1)),
                xi=np.zeros(3),
            )

#!/usr/bin/env python3
"""Terminal behavior on a constant signal: discretization oscillations.

A constant input is the cleanest probe for numerical chattering: the
continuous differentiator settles exactly, so every terminal oscillation
is an artifact of the discretization. The Euler-filter reference bangs its
relay at full amplitude every step; the implicit scheme solves for the
next filter state and interpolates the relay, shrinking the terminal error
by more than an order of magnitude (here it settles into a small symmetric
cycle at its accuracy scale rather than converging exactly: the selection
pins the internal filter state, not the estimate itself).

Run:  python3 demos/chattering_constant_signal.py [--plot]
"""

import argparse

import numpy as np

from fterdiff import DEFAULT_LAMBDAS, DifferentiatorConfig, Method, make_signal, run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args()

    cfg = DifferentiatorConfig(n=3, n_f=2, L=1.0, lambdas=DEFAULT_LAMBDAS, tau=0.1)
    signal = make_signal(poly=(5.0,), l_true=1.0, name="constant")
    print("signal: f0 = 5 (constant), L = 1, tau = 0.1, horizon 50 s\n")

    traces = {}
    for method in (Method.FTER_D, Method.FTER_E, Method.FTER_I):
        trace = run(cfg, method, signal, 50.0)
        traces[method] = trace
        terminal = np.max(np.abs(trace.sigma[-100:, 0]))
        print(f"{trace.method:11s} terminal max|error of f0| (last 100 steps): {terminal:.3e}")

    ratio = np.max(np.abs(traces[Method.FTER_D].sigma[-100:, 0])) / np.max(
        np.abs(traces[Method.FTER_I].sigma[-100:, 0])
    )
    print(f"\nimplicit is {ratio:.0f}x quieter than the explicit reference")
    print("support variable xi of the implicit scheme stays on the relay bounds")
    print("outside the dead zone:", np.unique(traces[Method.FTER_I].xi[-20:]))

    if args.plot:
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(9, 4))
        for trace in traces.values():
            ax.plot(trace.t[400:], trace.sigma[400:, 0], label=trace.method, lw=0.9)
        ax.set_xlabel("t [s]")
        ax.set_ylabel("error of the f0 estimate")
        ax.legend()
        fig.tight_layout()
        plt.show()


if __name__ == "__main__":
    main()

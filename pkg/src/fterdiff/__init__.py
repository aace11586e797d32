"""Discrete-time realizations of the robust exact filtering differentiator.

Three one-step schemes over a filtered integrator chain: the Euler-block
reference FTER-D, the exact explicit FTER-E, and the implicit FTER-I whose
injection is resolved per step by a scalar polynomial solve (which removes
numerical chattering). Plus analytic benchmark signals, error indices and
a scenario/sweep harness with a CLI.
"""

from .core import (
    DEFAULT_LAMBDAS,
    DiffState,
    DifferentiatorConfig,
    injection_vector,
    injection_vector_implicit,
    psi,
    signed_power,
    zero_state,
)
from .harness import (
    RunSpec,
    SweepSpec,
    continuous_oracle,
    read_trace_csv,
    run_scenario,
    sweep_tau,
    write_trace_csv,
)
from .matrices import StepMatrices, build, semigroup_check
from .metrics import ErrorTrace, Metrics, compute_metrics, m_index, metrics_table, y_index
from .rootfind import (
    Case,
    CaseOutcome,
    ImplicitCoeffs,
    coefficients,
    halley_positive_root,
    implicit_solve,
)
from .signals import (
    GaussianIID,
    HFCosine,
    NoiseSpec,
    SignalModel,
    SumNoise,
    make_signal,
    sample,
    scenario_signal,
    true_state,
)
from .steppers import (
    DivergenceError,
    Method,
    StepInput,
    fter_exact_full_step,
    fterd_step,
    ftere_step,
    fteri_step,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_LAMBDAS",
    "Case",
    "CaseOutcome",
    "DiffState",
    "DifferentiatorConfig",
    "DivergenceError",
    "ErrorTrace",
    "GaussianIID",
    "HFCosine",
    "ImplicitCoeffs",
    "Method",
    "Metrics",
    "NoiseSpec",
    "RunSpec",
    "SignalModel",
    "StepInput",
    "StepMatrices",
    "SumNoise",
    "SweepSpec",
    "build",
    "coefficients",
    "compute_metrics",
    "continuous_oracle",
    "fter_exact_full_step",
    "fterd_step",
    "ftere_step",
    "fteri_step",
    "halley_positive_root",
    "implicit_solve",
    "injection_vector",
    "injection_vector_implicit",
    "m_index",
    "make_signal",
    "metrics_table",
    "psi",
    "read_trace_csv",
    "run",
    "run_scenario",
    "sample",
    "scenario_signal",
    "semigroup_check",
    "signed_power",
    "sweep_tau",
    "true_state",
    "write_trace_csv",
    "y_index",
    "zero_state",
]

"""Stopping criteria for adaptive kinetic Monte Carlo saddle-point searches.

A saddle search explores the exit pathways of a metastable basin with
high-temperature Brownian dynamics restarted from the quasistationary
distribution; exits then arrive as independent labeled Poisson processes.
This package simulates that search (both with actual dynamics on analytic
1D landscapes and by direct Poisson sampling), computes the online
estimators of the discovered rate fraction that drive the stopping rule,
and evaluates the rigorous bias/variance/MSE bounds those estimators obey.
"""

from .bounds import (
    BoundReport,
    BoundRow,
    ErrorStats,
    empirical_error,
    hat_bounds,
    p_hat_moments,
    tilde_bounds,
    xi_moment_bounds,
)
from .errors import (
    AkmcError,
    BadCurvature,
    ConfigError,
    InsideBasin,
    MaxCyclesExceeded,
    MaxStepsExceeded,
    NoConvergence,
    NonFinite,
    OutOfRange,
    TooFewSamples,
    WrongSignature,
)
from .estimators import (
    EstimatorTrace,
    StoppingRule,
    expected_proportion,
    n_hat,
    p_hat,
    p_tilde,
    proportion_found,
    r_hat,
    r_tilde,
    should_stop,
)
from .experiments import (
    EnsembleStats,
    TestSystemParams,
    default_time_grid,
    export_figure_data,
    run_ensemble,
    sde_event_log,
    simulate_test_system,
    verify_error_bounds,
    verify_poisson,
    verify_rate_est,
)
from .potentials import (
    Basin,
    DoubleWell,
    PathwayInfo,
    Potential,
    QuadraticWell,
    TwoSaddle,
    classify_exit,
    make_potential,
    stationary_points,
)
from .rates import (
    RateTable,
    build_test_system,
    eyring_kramers,
    harmonic_prefactor,
    modified_arrhenius,
    rate_table_from_basin,
)
from .sde import ExitRecord, SdeConfig, default_t_corr, em_step, evolve, run_until_exit, sample_qsd
from .search import Counts, EventLog, counts_at, run_search, write_metadata

__version__ = "0.1.0"

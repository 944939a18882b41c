"""SIR and spectral-efficiency distributions of conjugate-beamforming massive-MIMO cells."""

from ._core import (
    AccuracyError,
    BudgetError,
    DomainError,
    NumericError,
    Scenario,
    avg_sum_se,
    avg_user_se,
    db_to_linear,
    epsilon,
    hardening_limit,
    kummer_1f1,
    linear_to_db,
    mean_inverse_rho,
    rho_cdf,
    run_montecarlo,
    s_star,
    se_cdf,
    se_percentile,
    sir_cdf,
)

__all__ = [
    "AccuracyError",
    "BudgetError",
    "DomainError",
    "NumericError",
    "Scenario",
    "avg_sum_se",
    "avg_user_se",
    "db_to_linear",
    "epsilon",
    "hardening_limit",
    "kummer_1f1",
    "linear_to_db",
    "mean_inverse_rho",
    "rho_cdf",
    "run_montecarlo",
    "s_star",
    "se_cdf",
    "se_percentile",
    "sir_cdf",
]

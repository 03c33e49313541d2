"""Proximal-gradient solvers with momentum for nonconvex composite problems."""

from ._core import (
    DivergedError,
    Problem,
    RateFit,
    Trace,
    check_rho_condition,
    descent_lemma,
    fit_linear_rate,
    fit_power_rate,
    kkt_residual_nonneg,
    load_problem,
    nnpca,
    perturbed_constant,
    quadratic,
    quartic,
    residual_bound,
    run,
    run_checks,
    svrg_constants,
    t_update,
    theorem_constants,
    trace_csv,
)

__all__ = [
    "DivergedError",
    "Problem",
    "RateFit",
    "Trace",
    "check_rho_condition",
    "descent_lemma",
    "fit_linear_rate",
    "fit_power_rate",
    "kkt_residual_nonneg",
    "load_problem",
    "nnpca",
    "perturbed_constant",
    "quadratic",
    "quartic",
    "residual_bound",
    "run",
    "run_checks",
    "svrg_constants",
    "t_update",
    "theorem_constants",
    "trace_csv",
]

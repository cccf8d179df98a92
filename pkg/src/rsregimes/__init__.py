"""Planning and validation toolkit for two-system ranking and selection.

Covers sample-size planning under CLT, large-deviation, and
moderate-deviation scalings, sequential stopping rules, pre-limit
approximations of the misselection probability, and a deterministic
Monte Carlo harness for checking all of it.
"""

from .approximations import (bahadur_rao_pis, bahadur_rao_prefactor,
                             chernoff_pis, clt_md_ratio, edgeworth_pis,
                             taylor_remainder_report)
from .config import builtin_suite, load_suite
from .distributions import (Bernoulli, Constant, Exponential, MomentSummary,
                            Normal, Shifted, SystemPair, moments)
from .errors import (BudgetExceeded, ConfigError, ConvergenceError,
                     DegenerateError, DomainError, RangeError, RsRegimesError)
from .montecarlo import (ExperimentConfig, ExperimentResult, FixedProcedure,
                         SequentialProcedure, estimate_pis, replication_rng,
                         run_trial, stop_histogram)
from .rates import (allocation_rate, difference_rate, gaussian_allocation_rate,
                    legendre_transform, optimal_allocation)
from .regimes import (AllocationPolicy, SamplePlan, clt_plan, ld_plan,
                      md_plan, md_scaling_diag, plan_for)
from .sequential import (StoppingOutcome, clt_stop_independent,
                         clt_stop_joint, md_stop_independent, md_stop_joint)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # distributions
    "Normal", "Exponential", "Bernoulli", "Constant", "Shifted",
    "SystemPair", "MomentSummary", "moments",
    # rate functions
    "legendre_transform", "difference_rate", "allocation_rate",
    "gaussian_allocation_rate", "optimal_allocation",
    # planning
    "AllocationPolicy", "SamplePlan", "plan_for", "clt_plan", "ld_plan",
    "md_plan", "md_scaling_diag",
    # sequential rules
    "StoppingOutcome", "clt_stop_joint", "md_stop_joint",
    "clt_stop_independent", "md_stop_independent",
    # approximations
    "edgeworth_pis", "chernoff_pis", "bahadur_rao_pis",
    "bahadur_rao_prefactor", "clt_md_ratio", "taylor_remainder_report",
    # monte carlo
    "ExperimentConfig", "ExperimentResult", "FixedProcedure",
    "SequentialProcedure", "estimate_pis", "run_trial", "replication_rng",
    "stop_histogram",
    # config
    "load_suite", "builtin_suite",
    # errors
    "RsRegimesError", "DomainError", "RangeError", "ConvergenceError",
    "DegenerateError", "BudgetExceeded", "ConfigError",
]

"""
Liouville 与映射理论的 Metropolis 采样
"""

from liouvillekit.montecarlo.action import action_difference_bound, action_value, interaction_value, window
from liouvillekit.montecarlo.metropolis import (
    McRun,
    detailed_balance_residual,
    merge_samples,
    metropolis_run,
    run_chains,
)
from liouvillekit.montecarlo.observables import default_pairs, measure_diff_correlators
from liouvillekit.montecarlo.oracles import exact_diff_sq, pinned_propagator, quadrature_expectation
from liouvillekit.montecarlo.studies import TLimitReport, TrivialityReport, compare_T_limit, triviality_check

__all__ = [
    "action_difference_bound",
    "action_value",
    "interaction_value",
    "window",
    "McRun",
    "detailed_balance_residual",
    "merge_samples",
    "metropolis_run",
    "run_chains",
    "default_pairs",
    "measure_diff_correlators",
    "exact_diff_sq",
    "pinned_propagator",
    "quadrature_expectation",
    "TLimitReport",
    "TrivialityReport",
    "compare_T_limit",
    "triviality_check",
]

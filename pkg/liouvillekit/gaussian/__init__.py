"""
psi 扇区的精确高斯积分：推迟算子、中心恒等式、行列式平凡性
"""

from liouvillekit.gaussian.determinant import LoopTraces, det_ratio, loop_traces
from liouvillekit.gaussian.identity import (
    SourcePair,
    psi_sector_logz,
    random_sources,
    rhs_identity,
    solve_constraint,
    special_closed_form,
    special_lattice_value,
    special_sources,
)
from liouvillekit.gaussian.multiplier import LambdaCheck, constraint_weight, lambda_identity_check
from liouvillekit.gaussian.operator import RetardedOperator, build_k, similarity_product

__all__ = [
    "LoopTraces",
    "det_ratio",
    "loop_traces",
    "SourcePair",
    "psi_sector_logz",
    "random_sources",
    "rhs_identity",
    "solve_constraint",
    "special_closed_form",
    "special_lattice_value",
    "special_sources",
    "LambdaCheck",
    "constraint_weight",
    "lambda_identity_check",
    "RetardedOperator",
    "build_k",
    "similarity_product",
]

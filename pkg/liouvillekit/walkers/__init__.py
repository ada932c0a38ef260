"""
行走者路径积分与巨正则配分函数
"""

from liouvillekit.walkers.ensemble import EnsembleEstimate, estimate_psi, mean_squared_displacement
from liouvillekit.walkers.grand_canonical import (
    canonical_z_n,
    grand_canonical_xi,
    longitudinal_xi,
    series_relative_error,
)
from liouvillekit.walkers.paths import (
    WalkerPath,
    enumerate_psi,
    path_weight,
    sample_path,
    walker_dt,
    walker_spec,
)

__all__ = [
    "EnsembleEstimate",
    "estimate_psi",
    "mean_squared_displacement",
    "canonical_z_n",
    "grand_canonical_xi",
    "longitudinal_xi",
    "series_relative_error",
    "WalkerPath",
    "enumerate_psi",
    "path_weight",
    "sample_path",
    "walker_dt",
    "walker_spec",
]

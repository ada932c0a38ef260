"""
行列式比 det K_phi / det K_0 与闭合圈贡献
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import lu_factor, solve_triangular

from liouvillekit.exceptions import NumericError
from liouvillekit.gaussian.operator import OperatorMode, build_k
from liouvillekit.lattice.fields import ScalarField
from liouvillekit.schemas.lattice import Couplings, LatticeSpec
from liouvillekit.utils.logger import log_performance


def log_abs_det(matrix: np.ndarray) -> Tuple[float, float]:
    """
    LU 分解求 (sign, log|det|)

    Raises:
        NumericError: 分解奇异
    """
    lu, piv = lu_factor(matrix, check_finite=False)
    diag = np.diag(lu)
    if np.any(diag == 0.0):
        raise NumericError("singular LU factorization of retarded operator")
    swaps = int(np.count_nonzero(piv != np.arange(piv.shape[0])))
    sign = (-1.0) ** swaps * float(np.prod(np.sign(diag)))
    return sign, math.fsum(np.log(np.abs(diag)))


def det_ratio(phi: ScalarField, c: Couplings, spec: LatticeSpec, mode: OperatorMode = "dressed") -> float:
    """两个算子分别做稠密 LU 分解后的行列式比"""
    with log_performance("det_ratio", n=spec.nt * spec.n_sites, mode=mode):
        sign_phi, log_phi = log_abs_det(build_k(phi, c, spec, mode).matrix)
        sign_free, log_free = log_abs_det(build_k(None, c, spec, "free").matrix)
    return sign_phi * sign_free * math.exp(log_phi - log_free)


@dataclass(frozen=True)
class LoopTraces:
    """Tr[(K0^{-1} dK)^n]，n = 1..order，以及截断的 log det 级数"""

    traces: np.ndarray
    log_det_series: float


def loop_traces(
    phi: ScalarField,
    c: Couplings,
    spec: LatticeSpec,
    order: int = 4,
    mode: OperatorMode = "dressed",
) -> LoopTraces:
    """
    log det(K_phi/K_0) = sum_n (-1)^{n+1} Tr[(K0^{-1} dK)^n] / n 的前 order 项

    dK 只在时间对角线以下非零，K0^{-1} dK 严格块下三角，各阶迹为零。
    """
    free = build_k(None, c, spec, "free").matrix
    delta = build_k(phi, c, spec, mode).matrix - free
    m = solve_triangular(free, delta, lower=True, check_finite=False)

    traces = []
    power = np.eye(m.shape[0])
    for _ in range(order):
        power = power @ m
        traces.append(float(np.trace(power)))
    series = math.fsum((-1) ** (n + 1) * tr / n for n, tr in enumerate(traces, start=1))
    return LoopTraces(traces=np.array(traces), log_det_series=series)

"""
巨正则配分函数：Xi = sum_N mu^N Z_N / N!，Z_N = Z^N
"""

import math
from typing import Optional, Sequence, Tuple

import numpy as np

from liouvillekit.diffusion.solver import canonical_Z, kernel_from_source
from liouvillekit.exceptions import ContractError
from liouvillekit.lattice.fields import ScalarField
from liouvillekit.lattice.operators import grad
from liouvillekit.logging_config import get_logger
from liouvillekit.schemas.lattice import Couplings, Site
from liouvillekit.utils.statistics import batch_means

logger = get_logger(__name__)


def canonical_z_n(Z: float, N: int) -> float:
    """N 个独立粒子的正则配分函数"""
    if N < 0:
        raise ContractError(f"particle number must be non-negative, got {N}", N=N)
    return Z ** N


def grand_canonical_xi(Z: float, mu: float, n_max: int) -> np.ndarray:
    """
    部分和 S_N = sum_{k<=N} (mu Z)^k / k!，N = 0..n_max

    各项递推生成，部分和用补偿求和。
    """
    if n_max < 0:
        raise ContractError(f"n_max must be non-negative, got {n_max}", n_max=n_max)
    x = mu * Z
    terms = [1.0]
    for k in range(1, n_max + 1):
        terms.append(terms[-1] * x / k)
    return np.array([math.fsum(terms[:n + 1]) for n in range(n_max + 1)])


def series_relative_error(Z: float, mu: float, n_max: int) -> float:
    """S_{n_max} 相对 exp(mu Z) 的相对误差"""
    exact = math.exp(mu * Z)
    return abs(grand_canonical_xi(Z, mu, n_max)[-1] - exact) / exact


def longitudinal_xi(
    phi_samples: Sequence[ScalarField],
    mu: float,
    c: Couplings,
    t: float,
    x0: Site,
    n_batches: Optional[int] = None,
) -> Tuple[float, float]:
    """
    纵向系综上的平均 <exp(mu Z[A = grad phi])>

    每个样本的 Z 由相似模式精确推进得到，样本一般来自 Liouville 采样器。

    Returns:
        (均值, 批均值标准误差)
    """
    if not phi_samples:
        raise ContractError("longitudinal_xi needs at least one field sample")
    spec = phi_samples[0].spec
    n = int(round(t / spec.dt))
    timeline = spec.with_time(n + 1, spec.dt)

    values = []
    for phi in phi_samples:
        psi = kernel_from_source(timeline, c, x0, A=grad(phi), mode="similarity")
        values.append(math.exp(mu * canonical_Z(psi.slice(n))))
    values = np.array(values)

    if values.shape[0] < 2:
        return float(values[0]), 0.0
    mean, stderr = batch_means(values, n_batches=min(n_batches or values.shape[0], values.shape[0]))
    logger.debug(f"Longitudinal Xi over {values.shape[0]} samples: {float(mean):.6g} +- {float(stderr):.2g}")
    return float(mean), float(stderr)

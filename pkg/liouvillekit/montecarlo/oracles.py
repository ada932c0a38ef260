"""
确定性参照：钉扎高斯传播子与小格点求积
"""

import math
from typing import Callable

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy.linalg import cho_factor, cho_solve, cholesky

from liouvillekit.exceptions import ConfigurationError, NumericError
from liouvillekit.lattice.operators import laplacian_matrix
from liouvillekit.montecarlo.action import potential_weights
from liouvillekit.schemas.lattice import LatticeSpec, Site
from liouvillekit.schemas.montecarlo import ActionSpec

# 张量积求积的最大维数
MAX_QUADRATURE_DIM = 4


def kinetic_matrix(spec: LatticeSpec) -> np.ndarray:
    """动能二次型 1/2 phi^T M phi 的 M = -a^2 L"""
    return -spec.a ** 2 * laplacian_matrix(spec)


def pinned_propagator(spec: LatticeSpec, x0: Site) -> np.ndarray:
    """
    钉扎自由场协方差 <phi(x) phi(y)>，形状 (N, N)

    去掉 x0 的行列后求逆，x0 对应的行列为零。
    """
    n = spec.n_sites
    pinned = spec.index(x0)
    keep = np.array([s for s in range(n) if s != pinned])
    reduced = kinetic_matrix(spec)[np.ix_(keep, keep)]
    try:
        factor = cho_factor(reduced)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"pinned kinetic matrix is not positive definite: {e}") from e
    cov = np.zeros((n, n))
    cov[np.ix_(keep, keep)] = cho_solve(factor, np.eye(keep.shape[0]))
    return cov


def exact_diff_sq(cov: np.ndarray, spec: LatticeSpec, x: Site, y: Site) -> float:
    """<(phi(x) - phi(y))^2> = C_xx + C_yy - 2 C_xy"""
    i, j = spec.index(x), spec.index(y)
    return float(cov[i, i] + cov[j, j] - 2.0 * cov[i, j])


def quadrature_expectation(
    spec: ActionSpec,
    site: Site,
    n_nodes: int = 40,
    observable: str = "exp",
) -> float:
    """
    小格点上的张量积 Gauss-Hermite 求积

    以钉扎高斯为权重，phi = C^{1/2} z，z 各分量用 hermegauss 节点；
    势能 e^{-V} 并入被积函数。

    Args:
        spec: 作用量（未钉扎变量数不超过 MAX_QUADRATURE_DIM）
        site: 观测点
        n_nodes: 每维节点数
        observable: "exp" 计算 <e^{b phi(site)}>，"sq" 计算 <phi(site)^2>
    """
    if observable not in ("exp", "sq"):
        raise ConfigurationError(f"unknown quadrature observable: {observable}")
    lattice = spec.lattice
    pinned = lattice.index(spec.x0)
    keep = [s for s in range(lattice.n_sites) if s != pinned]
    if len(keep) > MAX_QUADRATURE_DIM:
        raise ConfigurationError(
            f"tensor quadrature limited to {MAX_QUADRATURE_DIM} variables, lattice has {len(keep)}",
            variables=len(keep),
        )

    cov = pinned_propagator(lattice, spec.x0)[np.ix_(keep, keep)]
    root = cholesky(cov, lower=True)
    nodes, weights = hermegauss(n_nodes)
    grids = np.meshgrid(*([nodes] * len(keep)), indexing="ij")
    z = np.stack([g.reshape(-1) for g in grids], axis=0)
    w = np.ones(z.shape[1])
    for g in np.meshgrid(*([weights] * len(keep)), indexing="ij"):
        w = w * g.reshape(-1)

    phi = root @ z
    b = spec.couplings.b
    potential = potential_weights(spec).reshape(-1)[keep]
    # 钉扎点贡献常数 e^0，在比值中相消
    log_boltzmann = -(potential[:, None] * np.exp(b * phi)).sum(axis=0)
    boltzmann = w * np.exp(log_boltzmann - log_boltzmann.max())

    target = keep.index(lattice.index(site)) if lattice.index(site) != pinned else None
    values = phi[target] if target is not None else np.zeros(phi.shape[1])
    transform: Callable[[np.ndarray], np.ndarray] = (
        (lambda v: np.exp(b * v)) if observable == "exp" else (lambda v: v ** 2)
    )
    return float(math.fsum(boltzmann * transform(values)) / math.fsum(boltzmann))

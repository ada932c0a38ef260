"""
推迟算子 K = T (d/dt - g D_-^2) 的稠密格点表示

行索引 = 时间片 * N + 行优先格点索引。前向时间差分给出块结构：

    K[k][k]   = (T/dt) I
    K[k][k-1] = -(T/dt) (I + dt g L)

其余块为零，整个矩阵下三角。L 随模式变化：
- free:    自由拉普拉斯
- dressed: 相似变换 e^{b phi} L0 e^{-b phi}，对应 D_- = d - b d(phi)
- naive:   直接离散 D_- D_-（链中点耦合），不做场重定义
"""

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from liouvillekit.config import settings
from liouvillekit.diffusion.solver import naive_covariant_laplacian
from liouvillekit.exceptions import ConfigurationError
from liouvillekit.lattice.fields import ScalarField
from liouvillekit.lattice.operators import _grad, laplacian_matrix
from liouvillekit.logging_config import get_logger
from liouvillekit.schemas.lattice import Couplings, LatticeSpec

logger = get_logger(__name__)

OperatorMode = Literal["free", "dressed", "naive"]


def check_dense_size(spec: LatticeSpec) -> int:
    """稠密存储尺寸检查，返回 nt*nx*ny"""
    size = spec.nt * spec.n_sites
    if size > settings.DENSE_SIZE_GUARD:
        raise ConfigurationError(
            f"dense operator size nt*nx*ny = {size} exceeds guard {settings.DENSE_SIZE_GUARD}",
            size=size,
            guard=settings.DENSE_SIZE_GUARD,
        )
    if spec.nt < 1:
        raise ConfigurationError("retarded operator needs at least one time slice")
    return size


def spatial_operator(phi: Optional[ScalarField], c: Couplings, spec: LatticeSpec, mode: OperatorMode) -> np.ndarray:
    """空间块 L（N x N）"""
    free = laplacian_matrix(spec)
    if mode == "free" or phi is None or c.b == 0.0:
        return free
    if mode == "dressed":
        e = np.exp(c.b * phi.flat())
        return e[:, None] * free / e[None, :]
    if mode == "naive":
        n = spec.n_sites
        units = np.eye(n).reshape((n,) + spec.shape)
        links = _grad(phi.values, spec.a)
        columns = naive_covariant_laplacian(units, links, -c.b, spec.a).reshape(n, n)
        return columns.T.copy()
    raise ConfigurationError(f"unknown operator mode: {mode}")


@dataclass(frozen=True)
class RetardedOperator:
    """稠密推迟算子及其构造信息"""

    spec: LatticeSpec
    matrix: np.ndarray
    mode: OperatorMode
    couplings: Couplings

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=float, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def block(self, k: int, k_prime: int) -> np.ndarray:
        """时间块 K[k][k']"""
        n = self.spec.n_sites
        return self.matrix[k * n:(k + 1) * n, k_prime * n:(k_prime + 1) * n]

    def apply(self, field: np.ndarray) -> np.ndarray:
        """K 作用在时空数组上，返回同形状数组"""
        return (self.matrix @ np.asarray(field, dtype=float).reshape(-1)).reshape(self.spec.spacetime_shape)


def build_k(
    phi: Optional[ScalarField],
    c: Couplings,
    spec: LatticeSpec,
    mode: OperatorMode = "dressed",
) -> RetardedOperator:
    """
    构造 K = T (d/dt - g D_-^2)

    Args:
        phi: 场配置，None 时等价于自由模式
        c: 耦合常数（使用 g, b, tt）
        spec: 时空格点（nt 为时间片数）
        mode: "free"、"dressed" 或 "naive"

    Raises:
        ConfigurationError: 超过稠密尺寸上限
    """
    check_dense_size(spec)
    if phi is not None and phi.spec.shape != spec.shape:
        raise ConfigurationError("field lattice does not match operator lattice")

    n = spec.n_sites
    scale = c.tt / spec.dt
    step = np.eye(n) + spec.dt * c.g * spatial_operator(phi, c, spec, mode)
    shift = np.eye(spec.nt, k=-1)
    matrix = scale * (np.eye(spec.nt * n) - np.kron(shift, step))

    effective = "free" if phi is None else mode
    logger.debug(f"Built retarded operator {matrix.shape} (mode={effective})")
    return RetardedOperator(spec=spec, matrix=matrix, mode=effective, couplings=c)


def similarity_product(phi: ScalarField, free: RetardedOperator) -> np.ndarray:
    """显式乘积 E_{b phi} K0 E_{-b phi}"""
    e = np.tile(np.exp(free.couplings.b * phi.flat()), free.spec.nt)
    return e[:, None] * free.matrix / e[None, :]

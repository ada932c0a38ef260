"""
格点微分算子

数组版本（前缀 _）作用在最后两个轴上，可以批量处理时间片或单位向量；
场版本接受并返回场容器。
"""

import numpy as np

from liouvillekit.exceptions import ConfigurationError
from liouvillekit.lattice.fields import ScalarField, VectorField
from liouvillekit.schemas.lattice import LatticeSpec

# 方向 mu 对应的数组轴
_AXES = (-2, -1)


def forward(f: np.ndarray, mu: int) -> np.ndarray:
    """f(x + mu)"""
    return np.roll(f, -1, axis=_AXES[mu])


def backward(f: np.ndarray, mu: int) -> np.ndarray:
    """f(x - mu)"""
    return np.roll(f, 1, axis=_AXES[mu])


def _grad(f: np.ndarray, a: float) -> np.ndarray:
    return np.stack([(forward(f, mu) - f) / a for mu in (0, 1)], axis=-3)


def _divergence(v: np.ndarray, a: float) -> np.ndarray:
    v1 = v[..., 0, :, :]
    v2 = v[..., 1, :, :]
    return (v1 - backward(v1, 0)) / a + (v2 - backward(v2, 1)) / a


def _laplacian(f: np.ndarray, a: float) -> np.ndarray:
    # 定义为 divergence(grad(f))，与五点格式逐位一致地复合
    return _divergence(_grad(f, a), a)


def _curl(v: np.ndarray, a: float) -> np.ndarray:
    v1 = v[..., 0, :, :]
    v2 = v[..., 1, :, :]
    return (forward(v2, 0) - v2) / a - (forward(v1, 1) - v1) / a


def grad(f: ScalarField) -> VectorField:
    """前向差分梯度，结果位于前向链上"""
    return VectorField(f.spec, _grad(f.values, f.spec.a))


def divergence(v: VectorField) -> ScalarField:
    """后向差分散度，grad 的负伴随"""
    return ScalarField(v.spec, _divergence(v.values, v.spec.a))


def laplacian(f: ScalarField) -> ScalarField:
    """五点格式拉普拉斯"""
    return ScalarField(f.spec, _laplacian(f.values, f.spec.a))


def curl(v: VectorField) -> ScalarField:
    """每个元格（plaquette）的环量 d1 A2 - d2 A1"""
    return ScalarField(v.spec, _curl(v.values, v.spec.a))


def laplacian_matrix(spec: LatticeSpec) -> np.ndarray:
    """
    稠密拉普拉斯矩阵（行优先格点编号）

    Returns:
        形状 (N, N) 的矩阵 L，满足 (L f).flat = L @ f.flat
    """
    n = spec.n_sites
    units = np.eye(n).reshape((n,) + spec.shape)
    columns = _laplacian(units, spec.a).reshape(n, n)
    return columns.T.copy()


def integrate_gradient(v: VectorField, rtol: float = 1e-10) -> ScalarField:
    """
    由纯梯度链场恢复势函数 gamma，使 grad(gamma) = v，gamma(0, 0) = 0

    先沿第一列累加 x1 方向的链值，再沿每行累加 x2 方向的链值。

    Raises:
        ConfigurationError: v 不是纯梯度（存在元格环量或绕周期方向的非零绕数）
    """
    spec = v.spec
    a = spec.a
    column = np.concatenate([[0.0], np.cumsum(v.values[0, :-1, 0] * a)])
    rows = np.concatenate(
        [np.zeros((spec.nx, 1)), np.cumsum(v.values[1, :, :-1] * a, axis=1)], axis=1
    )
    gamma = column[:, None] + rows

    mismatch = np.max(np.abs(_grad(gamma, a) - v.values))
    scale = max(1.0, float(np.max(np.abs(v.values))))
    if mismatch > rtol * scale * max(spec.nx, spec.ny):
        raise ConfigurationError(
            "vector field is not a pure lattice gradient; "
            "transverse or winding components are not supported here",
            mismatch=float(mismatch),
        )
    return ScalarField(spec, gamma)

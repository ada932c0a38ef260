"""
拉格朗日乘子 lambda 的一维高斯恒等式

    exp(-alpha F^2 / 4) = (pi alpha)^{-1/2} int dlambda exp(-lambda^2/alpha - i lambda F)
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from liouvillekit.exceptions import ContractError, NumericError
from liouvillekit.lattice.fields import ScalarField, VectorField
from liouvillekit.lattice.operators import curl

# 积分截断在 exp(-lambda^2/alpha) < e^{-45}
_TAIL_EXPONENT = 45.0
_MAX_ABSERR = 1e-12


@dataclass(frozen=True)
class LambdaCheck:
    lhs: float
    rhs: float
    imag: float
    residual: float


def _integrate(func, lower, upper, **kwargs):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, abserr = quad(func, lower, upper, epsabs=1e-14, epsrel=1e-13, limit=200, **kwargs)
    if abserr > _MAX_ABSERR:
        messages = "; ".join(str(w.message) for w in caught)
        raise NumericError(
            f"quadrature did not converge (error estimate {abserr:.3g}) {messages}".strip(),
            abserr=abserr,
        )
    return value


def lambda_identity_check(F: float, alpha: float) -> LambdaCheck:
    """
    数值积分与闭式比较

    实部用带 cos 权重的振荡积分（偶函数，取 [0, L] 的两倍），
    虚部用 sin 权重在 [-L, L] 上计算，应当为零。

    Raises:
        ContractError: alpha <= 0
        NumericError: 积分不收敛
    """
    if alpha <= 0:
        raise ContractError(f"alpha must be positive, got {alpha}", alpha=alpha)
    lhs = math.exp(-alpha * F ** 2 / 4.0)
    cutoff = math.sqrt(_TAIL_EXPONENT * alpha)
    norm = math.sqrt(math.pi * alpha)

    def gaussian(lam):
        return math.exp(-lam ** 2 / alpha)

    if F == 0.0:
        real = 2.0 * _integrate(gaussian, 0.0, cutoff)
        imag = 0.0
    else:
        real = 2.0 * _integrate(gaussian, 0.0, cutoff, weight="cos", wvar=F)
        imag = -_integrate(gaussian, -cutoff, cutoff, weight="sin", wvar=F)
    rhs = real / norm
    return LambdaCheck(lhs=lhs, rhs=rhs, imag=imag / norm, residual=abs(lhs - rhs))


@dataclass(frozen=True)
class ConstraintWeight:
    """链场的场强、逐点恒等式残差与总约束权重"""

    field_strength: ScalarField
    residuals: np.ndarray
    log_weight: float

    @property
    def weight(self) -> float:
        return math.exp(self.log_weight)


def constraint_weight(A: VectorField, alpha: float) -> ConstraintWeight:
    """
    格点上的约束权重 exp(-alpha sum_x F12(x)^2 a^2 / 2)

    纯梯度场每个元格环量为零，权重为 1；非零环量在 alpha 增大时被压低。
    逐点残差来自各元格 F12 上的 lambda 恒等式检查。
    """
    strength = curl(A)
    residuals = np.array([lambda_identity_check(float(f), alpha).residual for f in strength.flat()])
    log_weight = -alpha * math.fsum((strength.values ** 2).reshape(-1)) * A.spec.a ** 2 / 2.0
    return ConstraintWeight(
        field_strength=strength,
        residuals=residuals.reshape(A.spec.shape),
        log_weight=log_weight,
    )

"""
psi 扇区的精确高斯积分与中心恒等式

对 psi_1 积分得到约束 K psi_2' = J1，于是

    log Z_psi = - sum_{t,x} J2 psi_2' a^2 dt

右侧由推迟格林函数 G = K^{-1} / (a^2 dt) 的双线性型给出：

    - sum J1(t',x') G(t-t'; x, x'; phi) J2(t, x) (a^2 dt)^2
"""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.linalg import solve_triangular

from liouvillekit.diffusion.kernels import free_kernel_periodic
from liouvillekit.exceptions import ConfigurationError
from liouvillekit.gaussian.operator import OperatorMode, RetardedOperator, build_k, check_dense_size
from liouvillekit.lattice.fields import ScalarField, SpaceTimeField
from liouvillekit.lattice.operators import laplacian_matrix
from liouvillekit.logging_config import get_logger
from liouvillekit.schemas.lattice import Couplings, LatticeSpec, Site

logger = get_logger(__name__)

Provenance = Literal["special", "general"]
GreenVariant = Literal["lattice", "continuum"]


@dataclass(frozen=True)
class SourcePair:
    """源 J1, J2 及其来源标记"""

    j1: SpaceTimeField
    j2: SpaceTimeField
    provenance: Provenance = "general"

    def __post_init__(self):
        if self.j1.spec != self.j2.spec:
            raise ConfigurationError("J1 and J2 live on different lattices")

    @property
    def spec(self) -> LatticeSpec:
        return self.j1.spec


def t_slice(spec: LatticeSpec, tt: float) -> int:
    """参数 T 对应的时间片 k_T = T/dt"""
    k = int(round(tt / spec.dt))
    if not math.isclose(k * spec.dt, tt, rel_tol=1e-9, abs_tol=1e-12) or not 0 <= k < spec.nt:
        raise ConfigurationError(
            f"T={tt} is not a reachable time slice (dt={spec.dt}, nt={spec.nt})",
            tt=tt,
            dt=spec.dt,
            nt=spec.nt,
        )
    return k


def special_sources(spec: LatticeSpec, c: Couplings, x0: Site) -> SourcePair:
    """
    特殊源：J1 = (T/g) delta(t) delta(x - x0)，J2 = T delta(t - T)

    离散后 J1 在 (0, x0) 处取 (T/g)/(a^2 dt)，J2 在时间片 k_T 上处处取 T/dt。

    Raises:
        ConfigurationError: T 不是可达的时间片
    """
    k_t = t_slice(spec, c.tt)
    j1 = SpaceTimeField.point_source(spec, x0, weight=(c.tt / c.g) / (spec.a ** 2 * spec.dt))
    values = np.zeros(spec.spacetime_shape)
    values[k_t] = c.tt / spec.dt
    return SourcePair(j1=j1, j2=SpaceTimeField(spec, values), provenance="special")


def random_sources(spec: LatticeSpec, rng: np.random.Generator, smooth: bool = True) -> SourcePair:
    """
    随机源对

    smooth=True 时各时间片取低阶 Fourier 模的随机组合。
    """
    if not smooth:
        return SourcePair(
            j1=SpaceTimeField(spec, rng.normal(size=spec.spacetime_shape)),
            j2=SpaceTimeField(spec, rng.normal(size=spec.spacetime_shape)),
        )
    x1 = np.arange(spec.nx)[:, None] * 2.0 * math.pi / spec.nx
    x2 = np.arange(spec.ny)[None, :] * 2.0 * math.pi / spec.ny

    def draw():
        out = np.empty(spec.spacetime_shape)
        for k in range(spec.nt):
            c0, c1, c2, s1, s2 = rng.normal(size=5)
            out[k] = c0 + c1 * np.cos(x1) + c2 * np.cos(x2) + s1 * np.sin(x1) + s2 * np.sin(x2)
        return SpaceTimeField(spec, out)

    return SourcePair(j1=draw(), j2=draw())


def solve_constraint(K: RetardedOperator, J1: SpaceTimeField) -> SpaceTimeField:
    """
    解 K psi_2' = J1

    K 下三角且对角恒为 T/dt，前向代换总是可解。
    """
    solution = solve_triangular(K.matrix, J1.flat(), lower=True, check_finite=False)
    return SpaceTimeField(K.spec, solution.reshape(K.spec.spacetime_shape))


def psi_sector_logz(
    phi: ScalarField,
    J: SourcePair,
    c: Couplings,
    spec: LatticeSpec,
    mode: OperatorMode = "dressed",
) -> float:
    """
    log Z_psi = -sum J2 psi_2' a^2 dt，psi_2' 由约束方程求得
    """
    K = build_k(phi, c, spec, mode)
    psi2 = solve_constraint(K, J.j1)
    return -math.fsum((J.j2.values * psi2.values).reshape(-1)) * spec.a ** 2 * spec.dt


def _circulant_index(spec: LatticeSpec):
    """(x, x') -> 周期位移 (x - x') 的数组索引"""
    i, j = np.meshgrid(np.arange(spec.nx), np.arange(spec.ny), indexing="ij")
    i = i.reshape(-1)
    j = j.reshape(-1)
    return (i[:, None] - i[None, :]) % spec.nx, (j[:, None] - j[None, :]) % spec.ny


def _free_lags(spec: LatticeSpec, c: Couplings, variant: GreenVariant) -> np.ndarray:
    """
    每个时间差 n 的自由格林函数，源位于格点 (0, 0)，形状 (nt, nx, ny)

    lattice: (I + dt g L0)^n delta / (T a^2)，由自由矩阵独立推进；
    continuum: 周期像和热核 / T，n = 0 时取 delta / (T a^2)。
    """
    lags = np.zeros(spec.spacetime_shape)
    unit = np.zeros(spec.n_sites)
    unit[0] = 1.0
    if variant == "lattice":
        step = np.eye(spec.n_sites) + spec.dt * c.g * laplacian_matrix(spec)
        current = unit
        for n in range(spec.nt):
            lags[n] = current.reshape(spec.shape) / (c.tt * spec.a ** 2)
            current = step @ current
        return lags
    if variant == "continuum":
        lags[0] = unit.reshape(spec.shape) / (c.tt * spec.a ** 2)
        for n in range(1, spec.nt):
            lags[n] = free_kernel_periodic(n * spec.dt, spec, (0, 0), c.g) / c.tt
        return lags
    raise ConfigurationError(f"unknown Green function variant: {variant}")


def green_matrix(phi: ScalarField, c: Couplings, spec: LatticeSpec, lag: int, variant: GreenVariant = "lattice") -> np.ndarray:
    """时间差为 lag 的修饰格林函数 G(lag; x, x')，形状 (N, N)"""
    lags = _free_lags(spec, c, variant)
    di, dj = _circulant_index(spec)
    e = np.exp(c.b * phi.flat())
    return (e[:, None] / e[None, :]) * lags[lag][di, dj]


def rhs_identity(
    phi: ScalarField,
    J: SourcePair,
    c: Couplings,
    spec: LatticeSpec,
    variant: GreenVariant = "lattice",
) -> float:
    """
    中心恒等式右侧：J1、J2 经修饰推迟格林函数的双线性型

    自由格林函数由平移不变性从单个单位源构造，再乘以 e^{b(phi(x) - phi(x'))}；
    t < t' 的贡献按推迟性直接略去。
    """
    check_dense_size(spec)
    lags = _free_lags(spec, c, variant)
    di, dj = _circulant_index(spec)
    e = np.exp(c.b * phi.flat())
    dressing = e[:, None] / e[None, :]

    j1 = J.j1.values.reshape(spec.nt, -1)
    j2 = J.j2.values.reshape(spec.nt, -1)
    terms = []
    for lag in range(spec.nt):
        green = dressing * lags[lag][di, dj]
        for k in range(lag, spec.nt):
            terms.append(float(j2[k] @ green @ j1[k - lag]))
    return -math.fsum(terms) * (spec.a ** 2 * spec.dt) ** 2


def derived_prefactor(c: Couplings) -> float:
    """特殊源下 log Z_psi 的前因子 T/g（乘以格点行走概率）"""
    return c.tt / c.g


def special_lattice_value(phi: ScalarField, c: Couplings, spec: LatticeSpec, x0: Site) -> float:
    """
    特殊源下的格点闭式：-(T/g) sum_x e^{b(phi(x) - phi(x0))} P_{k_T}(x)

    P 为 k_T 步离散行走的到达概率。
    """
    k_t = t_slice(spec, c.tt)
    lags = _free_lags(spec, c, "lattice")
    i0, j0 = spec.wrap(x0)
    probability = np.roll(lags[k_t], (i0, j0), axis=(0, 1)) * c.tt * spec.a ** 2
    dressing = np.exp(c.b * (phi.values - phi.at(x0)))
    return -derived_prefactor(c) * math.fsum((dressing * probability).reshape(-1))


def special_closed_form(phi: ScalarField, c: Couplings, spec: LatticeSpec, x0: Site) -> float:
    """
    特殊源下的连续闭式

        -(1/(4 pi g^2)) sum_x e^{b(phi(x) - phi(x0))} w(x) a^2

    w 为周期像和窗口 sum_images exp(-(x - x0)^2/(4gT))。
    """
    kernel = free_kernel_periodic(c.tt, spec, x0, c.g)
    window = kernel * 4.0 * math.pi * c.g * c.tt
    dressing = np.exp(c.b * (phi.values - phi.at(x0)))
    return -c.interaction_scale * math.fsum((dressing * window).reshape(-1)) * spec.a ** 2

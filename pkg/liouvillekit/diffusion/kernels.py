"""
自由与修饰热核的闭式表达，以及周期盒上的像和
"""

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import pandas as pd

from liouvillekit.config import settings
from liouvillekit.diffusion.solver import evolve
from liouvillekit.exceptions import DomainError
from liouvillekit.lattice.fields import ScalarField, SpaceTimeField
from liouvillekit.schemas.lattice import Couplings, LatticeSpec, Site

ArrayLike = Union[float, np.ndarray]


def free_kernel_exact(t: float, x: Sequence[ArrayLike], x0: Sequence[ArrayLike], g: float) -> ArrayLike:
    """
    平面上的自由热核 exp(-(x-x0)^2/(4gt)) / (4 pi g t)

    Args:
        t: 时间（> 0）
        x: 终点坐标 (x1, x2)，长度单位，可以是数组
        x0: 起点坐标 (x1, x2)
        g: 扩散耦合

    Raises:
        DomainError: t <= 0
    """
    if t <= 0:
        raise DomainError(f"closed-form kernel needs t > 0, got t={t}", t=t)
    d1 = np.asarray(x[0], dtype=float) - np.asarray(x0[0], dtype=float)
    d2 = np.asarray(x[1], dtype=float) - np.asarray(x0[1], dtype=float)
    value = np.exp(-(d1 ** 2 + d2 ** 2) / (4.0 * g * t)) / (4.0 * math.pi * g * t)
    return float(value) if np.ndim(value) == 0 else value


def _theta_sum(d: np.ndarray, period: float, width2: float, cutoff: float) -> np.ndarray:
    """一维像和 sum_m exp(-(d + m L)^2 / width2)，新增项全部低于 cutoff 时截断"""
    total = np.exp(-d ** 2 / width2)
    m = 1
    while True:
        plus = np.exp(-(d + m * period) ** 2 / width2)
        minus = np.exp(-(d - m * period) ** 2 / width2)
        total = total + plus + minus
        if max(plus.max(), minus.max()) < cutoff:
            break
        m += 1
    return total


def free_kernel_periodic(t: float, spec: LatticeSpec, x0: Site, g: float) -> np.ndarray:
    """
    周期盒上的自由热核（像和），形状 (nx, ny)

    高斯核在两个方向上可分离，像和按方向分别计算后相乘。
    """
    if t <= 0:
        raise DomainError(f"closed-form kernel needs t > 0, got t={t}", t=t)
    i0, j0 = spec.wrap(x0)
    width2 = 4.0 * g * t
    d1 = (np.arange(spec.nx) - i0) * spec.a
    d2 = (np.arange(spec.ny) - j0) * spec.a
    s1 = _theta_sum(d1, spec.nx * spec.a, width2, settings.IMAGE_SUM_CUTOFF)
    s2 = _theta_sum(d2, spec.ny * spec.a, width2, settings.IMAGE_SUM_CUTOFF)
    return np.outer(s1, s2) / (4.0 * math.pi * g * t)


def lattice_free_kernel(t: float, spec: LatticeSpec, x0: Site, g: float) -> np.ndarray:
    """
    离散热流的精确格点核 (1 + dt g L)^n delta / a^2，n = t/dt

    与 evolve(A=0) 的第 n 个时间片一致。
    """
    n = int(round(t / spec.dt))
    if n < 0 or not math.isclose(n * spec.dt, t, rel_tol=1e-9, abs_tol=1e-12):
        raise DomainError(f"t={t} is not a multiple of dt={spec.dt}", t=t, dt=spec.dt)
    timeline = spec.with_time(n + 1, spec.dt)
    source = SpaceTimeField.point_source(timeline, x0)
    psi = evolve(source, None, Couplings(g=g), timeline)
    return np.array(psi.values[n])


def dressed_kernel(
    t: float,
    x: Site,
    x0: Site,
    phi: ScalarField,
    c: Couplings,
    free: str = "continuum",
) -> float:
    """
    修饰双点函数 e^{b(phi(x)-phi(x0))} * 自由推迟核

    Args:
        t: 时间差，t <= 0 时返回 0（theta 函数）
        x: 终点格点
        x0: 源格点
        phi: 格点场
        c: 耦合常数
        free: "continuum" 使用平面闭式核（最小像位移）；
              "lattice" 使用精确格点核，此时即相似变换格点算子的格林函数
    """
    if t <= 0:
        return 0.0
    spec = phi.spec
    factor = math.exp(c.b * (phi.at(x) - phi.at(x0)))
    if free == "lattice":
        i, j = spec.wrap(x)
        return factor * float(lattice_free_kernel(t, spec, x0, c.g)[i, j])

    i, j = spec.wrap(x)
    i0, j0 = spec.wrap(x0)
    di = (i - i0) % spec.nx
    dj = (j - j0) % spec.ny
    di = min(di, spec.nx - di)
    dj = min(dj, spec.ny - dj)
    return factor * free_kernel_exact(t, (di * spec.a, dj * spec.a), (0.0, 0.0), c.g)


@dataclass(frozen=True)
class KernelTable:
    """制表的格林函数 G(t; x)，源位于 x0"""

    spec: LatticeSpec
    couplings: Couplings
    x0: Site
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def times(self) -> np.ndarray:
        return np.arange(self.spec.nt) * self.spec.dt

    def masses(self) -> np.ndarray:
        """每个时间片的 sum_x G a^2"""
        return self.values.sum(axis=(1, 2)) * self.spec.a ** 2

    def to_frame(self, include_exact: bool = False) -> pd.DataFrame:
        """展开为 (t, x1, x2, value) 表格，可附带闭式像和核"""
        nt, nx, ny = self.values.shape
        t, i, j = np.meshgrid(np.arange(nt), np.arange(nx), np.arange(ny), indexing="ij")
        frame = pd.DataFrame({
            "t": (t * self.spec.dt).reshape(-1),
            "x1": (i * self.spec.a).reshape(-1),
            "x2": (j * self.spec.a).reshape(-1),
            "value": self.values.reshape(-1),
        })
        if include_exact:
            exact = np.zeros_like(self.values)
            for k in range(1, nt):
                exact[k] = free_kernel_periodic(k * self.spec.dt, self.spec, self.x0, self.couplings.g)
            frame["exact"] = exact.reshape(-1)
        return frame

"""
场容器：格点标量场、时空场、链矢量场

构造后数组设为只读，调用方视角下不可变。
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from liouvillekit.exceptions import ContractError
from liouvillekit.schemas.lattice import LatticeSpec, Site


def _frozen(values: np.ndarray, expected_shape: tuple, kind: str) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    if arr.shape != expected_shape:
        raise ContractError(
            f"{kind} expects shape {expected_shape}, got {arr.shape}",
            expected=list(expected_shape),
            actual=list(arr.shape),
        )
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{kind} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ScalarField:
    """空间格点上的实标量场（phi, gamma, lambda, 固定时刻的 J）"""

    spec: LatticeSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, self.spec.shape, "ScalarField"))

    @classmethod
    def zeros(cls, spec: LatticeSpec) -> "ScalarField":
        return cls(spec, np.zeros(spec.shape))

    @classmethod
    def constant(cls, spec: LatticeSpec, value: float) -> "ScalarField":
        return cls(spec, np.full(spec.shape, float(value)))

    @classmethod
    def from_function(cls, spec: LatticeSpec, func: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "ScalarField":
        """用物理坐标 (x1, x2) 的函数填充"""
        x1, x2 = coordinates(spec)
        return cls(spec, func(x1, x2))

    def at(self, site: Site) -> float:
        i, j = self.spec.wrap(site)
        return float(self.values[i, j])

    def flat(self) -> np.ndarray:
        """行优先展平"""
        return self.values.reshape(-1)

    def shifted(self, constant: float) -> "ScalarField":
        return ScalarField(self.spec, self.values + constant)

    def pinned(self, site: Site) -> "ScalarField":
        """减去 site 处的值，使该点为零"""
        return self.shifted(-self.at(site))


@dataclass(frozen=True)
class SpaceTimeField:
    """时空格点 (时间片, 空间点) 上的实场（Psi, psi_1, psi_2, J_1, J_2）"""

    spec: LatticeSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _frozen(self.values, self.spec.spacetime_shape, "SpaceTimeField")
        )

    @classmethod
    def zeros(cls, spec: LatticeSpec) -> "SpaceTimeField":
        return cls(spec, np.zeros(spec.spacetime_shape))

    @classmethod
    def point_source(cls, spec: LatticeSpec, site: Site, slice_index: int = 0, weight: Optional[float] = None) -> "SpaceTimeField":
        """
        离散化的 delta(t - t_k) delta(x - x0)

        默认幅度 1/(a^2 dt)，使 sum * a^2 dt = 1。
        """
        if not 0 <= slice_index < spec.nt:
            raise ContractError(
                f"source slice {slice_index} outside time axis of {spec.nt} slices",
                slice_index=slice_index,
            )
        values = np.zeros(spec.spacetime_shape)
        i, j = spec.wrap(site)
        values[slice_index, i, j] = 1.0 / (spec.a ** 2 * spec.dt) if weight is None else weight
        return cls(spec, values)

    def slice(self, k: int) -> ScalarField:
        return ScalarField(self.spec, self.values[k])

    def flat(self) -> np.ndarray:
        """(时间, 行优先空间) 展平"""
        return self.values.reshape(-1)


@dataclass(frozen=True)
class VectorField:
    """
    链矢量场 A_mu(x)

    values[mu, i, j] 位于从 x=(i, j) 出发沿 mu 方向的前向链上。
    """

    spec: LatticeSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _frozen(self.values, (2,) + self.spec.shape, "VectorField")
        )

    @classmethod
    def zeros(cls, spec: LatticeSpec) -> "VectorField":
        return cls(spec, np.zeros((2,) + spec.shape))

    @classmethod
    def unit_link(cls, spec: LatticeSpec, site: Site, mu: int, value: float = 1.0) -> "VectorField":
        values = np.zeros((2,) + spec.shape)
        i, j = spec.wrap(site)
        values[mu, i, j] = value
        return cls(spec, values)

    def link(self, site: Site, mu: int) -> float:
        i, j = self.spec.wrap(site)
        return float(self.values[mu, i, j])


def coordinates(spec: LatticeSpec):
    """每个格点的物理坐标 (x1, x2)，形状 (nx, ny)"""
    i, j = np.meshgrid(np.arange(spec.nx), np.arange(spec.ny), indexing="ij")
    return i * spec.a, j * spec.a


def minimum_image_sq(spec: LatticeSpec, x0: Site) -> np.ndarray:
    """各格点到 x0 的周期最小像平方距离（长度单位）"""
    i0, j0 = spec.wrap(x0)
    di = (np.arange(spec.nx) - i0) % spec.nx
    dj = (np.arange(spec.ny) - j0) % spec.ny
    di = np.minimum(di, spec.nx - di)
    dj = np.minimum(dj, spec.ny - dj)
    return (di[:, None] ** 2 + dj[None, :] ** 2) * spec.a ** 2


def random_smooth(spec: LatticeSpec, rng: np.random.Generator, amplitude: float = 1.0, modes: int = 2) -> ScalarField:
    """低阶周期 Fourier 模的随机叠加，每个模的系数服从 N(0, amplitude^2)"""
    i, j = np.meshgrid(np.arange(spec.nx), np.arange(spec.ny), indexing="ij")
    u = 2.0 * np.pi * i / spec.nx
    v = 2.0 * np.pi * j / spec.ny
    values = np.zeros(spec.shape)
    for m in range(modes + 1):
        for n in range(modes + 1):
            if m == 0 and n == 0:
                continue
            c, s = rng.normal(scale=amplitude, size=2)
            values += c * np.cos(m * u + n * v) + s * np.sin(m * u + n * v)
    return ScalarField(spec, values)

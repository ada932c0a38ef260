"""
最近邻随机行走路径与规范权重

跳跃编码：0 = +x1, 1 = -x1, 2 = +x2, 3 = -x2
"""

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from liouvillekit.exceptions import ConfigurationError, ContractError
from liouvillekit.lattice.fields import VectorField
from liouvillekit.schemas.lattice import Couplings, LatticeSpec, Site

HOP_VECTORS = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=np.int64)

# 全枚举的路径数上限 4^n
MAX_ENUMERATION_STEPS = 8


def walker_dt(spec: LatticeSpec, g: float) -> float:
    """行走者标定 dt = a^2 / (4g)，此时离散行走的连续极限扩散常数为 g"""
    return spec.a ** 2 / (4.0 * g)


def walker_steps(t: float, spec: LatticeSpec, g: float) -> int:
    """t 对应的步数；t 必须是标定 dt 的整数倍"""
    dt = walker_dt(spec, g)
    n = int(round(t / dt))
    if n < 0 or not math.isclose(n * dt, t, rel_tol=1e-9, abs_tol=1e-12):
        raise ConfigurationError(
            f"t={t} is not a multiple of the walker step dt=a^2/(4g)={dt:.6g}",
            t=t,
            dt=dt,
        )
    return n


def walker_spec(spec: LatticeSpec, c: Couplings, t: float) -> LatticeSpec:
    """与行走者标定一致的时空格点，第 nsteps 个时间片对应时刻 t"""
    n = walker_steps(t, spec, c.g)
    return spec.with_time(n + 1, walker_dt(spec, c.g))


def link_increments(sites: np.ndarray, hops: np.ndarray, links: np.ndarray, spec: LatticeSpec) -> np.ndarray:
    """
    每次跳跃的离散线积分增量 A_mu(link) * a * sgn(hop)

    负向跳跃 x -> x - mu 经过的链是 x - mu 出发的前向链。

    Args:
        sites: 跳跃前的格点，形状 (..., 2)，已取模
        hops: 跳跃编码，形状 (...)
        links: 链值，形状 (2, nx, ny)
    """
    mu = hops // 2
    negative = (hops % 2) == 1
    i = np.where(negative & (mu == 0), sites[..., 0] - 1, sites[..., 0]) % spec.nx
    j = np.where(negative & (mu == 1), sites[..., 1] - 1, sites[..., 1]) % spec.ny
    sign = np.where(negative, -1.0, 1.0)
    return sign * links[mu, i, j] * spec.a


@dataclass(frozen=True)
class WalkerPath:
    """离散时间最近邻路径 R(sigma)，R(0) = start"""

    start: Site
    hops: np.ndarray
    dt: float = 1.0

    def __post_init__(self):
        hops = np.array(self.hops, dtype=np.int8, copy=True).reshape(-1)
        if hops.size and (hops.min() < 0 or hops.max() > 3):
            raise ContractError("hop codes must be in 0..3")
        hops.setflags(write=False)
        object.__setattr__(self, "hops", hops)
        object.__setattr__(self, "start", (int(self.start[0]), int(self.start[1])))

    @property
    def nsteps(self) -> int:
        return int(self.hops.shape[0])

    @property
    def t(self) -> float:
        return self.nsteps * self.dt

    def displacement(self) -> np.ndarray:
        """未取模的总位移（格点单位）"""
        if self.nsteps == 0:
            return np.zeros(2, dtype=np.int64)
        return HOP_VECTORS[self.hops].sum(axis=0)

    def sites(self, spec: Optional[LatticeSpec] = None) -> np.ndarray:
        """依次经过的格点，形状 (nsteps + 1, 2)；给定 spec 时取模"""
        steps = HOP_VECTORS[self.hops] if self.nsteps else np.zeros((0, 2), dtype=np.int64)
        trail = np.vstack([np.zeros((1, 2), dtype=np.int64), np.cumsum(steps, axis=0)])
        trail = trail + np.array(self.start, dtype=np.int64)
        if spec is not None:
            trail = trail % np.array(spec.shape)
        return trail

    def end(self, spec: LatticeSpec) -> Site:
        i, j = self.sites(spec)[-1]
        return (int(i), int(j))


def sample_path(r0: Site, nsteps: int, rng: np.random.Generator, dt: float = 1.0) -> WalkerPath:
    """每步在 4 个最近邻方向中等概率选择一个"""
    if nsteps < 0:
        raise ContractError(f"nsteps must be non-negative, got {nsteps}", nsteps=nsteps)
    hops = rng.integers(0, 4, size=nsteps)
    return WalkerPath(start=r0, hops=hops, dt=dt)


def path_weight(path: WalkerPath, A: Optional[VectorField], b: float) -> float:
    """
    路径权重 exp(-b * sum_hops A_mu(link) a sgn(hop))

    A 为纯梯度 grad(gamma) 时求和逐项相消，权重为 exp(-b(gamma(end) - gamma(start)))。
    """
    if A is None or b == 0.0 or path.nsteps == 0:
        return 1.0
    spec = A.spec
    before = path.sites(spec)[:-1]
    increments = link_increments(before, path.hops.astype(np.int64), A.values, spec)
    return math.exp(-b * math.fsum(increments))


def enumerate_psi(
    r0: Site,
    nsteps: int,
    A: Optional[VectorField],
    b: float,
    spec: LatticeSpec,
) -> np.ndarray:
    """
    全路径枚举得到行走者估计量的精确期望

    sum over 4^nsteps paths of weight / (4^nsteps a^2)，按终点累加。

    Raises:
        ConfigurationError: nsteps 超过枚举上限
    """
    if nsteps > MAX_ENUMERATION_STEPS:
        raise ConfigurationError(
            f"full enumeration limited to {MAX_ENUMERATION_STEPS} steps, got {nsteps}",
            nsteps=nsteps,
        )
    buckets = {}
    for hops in itertools.product(range(4), repeat=nsteps):
        path = WalkerPath(start=r0, hops=np.array(hops, dtype=np.int8))
        buckets.setdefault(path.end(spec), []).append(path_weight(path, A, b))

    total = 4 ** nsteps
    psi = np.zeros(spec.shape)
    for (i, j), weights in buckets.items():
        psi[i, j] = math.fsum(weights) / total / spec.a ** 2
    return psi

"""
行走者系综估计 Psi(t; x)

行走者按固定大小分块，每块使用由 (seed, 块号) 派生的独立随机流；
块内向量化推进，块间结果按块号用补偿求和归约，
因此结果只取决于 seed 与行走者数量，与并发划分无关。
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from liouvillekit.config import settings
from liouvillekit.exceptions import ContractError
from liouvillekit.lattice.fields import VectorField
from liouvillekit.logging_config import get_logger
from liouvillekit.schemas.lattice import Couplings, LatticeSpec, Site
from liouvillekit.utils.logger import log_walk
from liouvillekit.walkers.paths import HOP_VECTORS, link_increments, walker_steps

logger = get_logger(__name__)


@dataclass(frozen=True)
class EnsembleEstimate:
    """加权终点直方图及逐点批均值误差"""

    spec: LatticeSpec
    values: np.ndarray
    stderr: np.ndarray
    counts: np.ndarray
    n_walkers: int
    seed: int
    nsteps: int
    t: float
    n_batches: int

    def __post_init__(self):
        for name in ("values", "stderr", "counts"):
            arr = np.array(getattr(self, name), copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def to_frame(self) -> pd.DataFrame:
        """(x1, x2, value, stderr, count) 表格"""
        i, j = np.meshgrid(np.arange(self.spec.nx), np.arange(self.spec.ny), indexing="ij")
        return pd.DataFrame({
            "x1": (i * self.spec.a).reshape(-1),
            "x2": (j * self.spec.a).reshape(-1),
            "value": self.values.reshape(-1),
            "stderr": self.stderr.reshape(-1),
            "count": self.counts.reshape(-1).astype(np.int64),
        })


def block_rng(seed: int, block: int) -> np.random.Generator:
    """第 block 块的随机流"""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def _walk_block(
    block: int,
    first: int,
    size: int,
    r0: Site,
    nsteps: int,
    links: Optional[np.ndarray],
    b: float,
    spec: LatticeSpec,
    seed: int,
    n_walkers: int,
    n_batches: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """推进一块行走者，返回 (批 x 格点的权重和, 格点计数)"""
    rng = block_rng(seed, block)
    hops = rng.integers(0, 4, size=(size, nsteps))

    position = np.tile(np.array(spec.wrap(r0), dtype=np.int64), (size, 1))
    line = np.zeros(size)
    coupled = links is not None and b != 0.0
    period = np.array(spec.shape, dtype=np.int64)
    for step in range(nsteps):
        codes = hops[:, step]
        if coupled:
            line += link_increments(position, codes, links, spec)
        position = (position + HOP_VECTORS[codes]) % period
    weights = np.exp(-b * line) if coupled else np.ones(size)

    batch_of = ((first + np.arange(size)) * n_batches) // n_walkers
    sums = np.zeros((n_batches,) + spec.shape)
    np.add.at(sums, (batch_of, position[:, 0], position[:, 1]), weights)
    counts = np.zeros(spec.shape)
    np.add.at(counts, (position[:, 0], position[:, 1]), 1.0)
    return sums, counts


def _fsum_stack(stack: np.ndarray) -> np.ndarray:
    """沿第 0 轴的补偿求和"""
    if stack.shape[0] == 1:
        return stack[0].copy()
    return np.apply_along_axis(math.fsum, 0, stack)


def estimate_psi(
    r0: Site,
    t: float,
    A: Optional[VectorField],
    c: Couplings,
    n_walkers: int,
    seed: int,
    spec: Optional[LatticeSpec] = None,
    max_workers: Optional[int] = None,
    block_size: Optional[int] = None,
) -> EnsembleEstimate:
    """
    路径积分蒙特卡洛估计 Psi(t; x)

    Args:
        r0: 起点
        t: 时间，须为 a^2/(4g) 的整数倍
        A: 链矢量场，None 视为零
        c: 耦合常数（使用 g, b）
        n_walkers: 行走者数量
        seed: 随机种子
        spec: 格点描述，默认取 A.spec
        max_workers: 并发块数，默认 settings.MAX_WORKERS
        block_size: 每块行走者数量，默认 settings.WALKER_BLOCK_SIZE

    Returns:
        EnsembleEstimate，数值归一化为 权重和 / (n_walkers a^2)
    """
    if spec is None:
        if A is None:
            raise ContractError("estimate_psi needs a lattice spec when A is None")
        spec = A.spec
    if n_walkers < 1:
        raise ContractError(f"n_walkers must be at least 1, got {n_walkers}", n_walkers=n_walkers)

    nsteps = walker_steps(t, spec, c.g)
    block_size = block_size or settings.WALKER_BLOCK_SIZE
    n_batches = min(settings.MIN_BATCHES, n_walkers)
    links = A.values if A is not None else None

    blocks: List[Tuple[int, int, int]] = []
    first = 0
    while first < n_walkers:
        size = min(block_size, n_walkers - first)
        blocks.append((len(blocks), first, size))
        first += size

    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max_workers or settings.MAX_WORKERS) as executor:
        results = list(executor.map(
            lambda blk: _walk_block(
                blk[0], blk[1], blk[2], r0, nsteps, links, c.b, spec, seed, n_walkers, n_batches
            ),
            blocks,
        ))

    batch_sums = _fsum_stack(np.stack([r[0] for r in results]))
    counts = np.stack([r[1] for r in results]).sum(axis=0)

    norm = spec.a ** 2
    values = _fsum_stack(batch_sums) / (n_walkers * norm)
    if n_batches >= 2:
        batch_sizes = np.bincount((np.arange(n_walkers) * n_batches) // n_walkers, minlength=n_batches)
        per_batch = batch_sums / (batch_sizes[:, None, None] * norm)
        stderr = per_batch.std(axis=0, ddof=1) / math.sqrt(n_batches)
    else:
        logger.warning(f"Only {n_walkers} walker(s); standard errors reported as zero")
        stderr = np.zeros(spec.shape)

    duration = (time.perf_counter() - start) * 1000
    log_walk(seed, n_walkers, nsteps, duration, blocks=len(blocks))
    return EnsembleEstimate(
        spec=spec,
        values=values,
        stderr=stderr,
        counts=counts,
        n_walkers=n_walkers,
        seed=seed,
        nsteps=nsteps,
        t=t,
        n_batches=n_batches,
    )


def mean_squared_displacement(
    nsteps: int,
    n_walkers: int,
    seed: int,
    a: float = 1.0,
) -> Tuple[float, float]:
    """
    未取模位移的均方值及其标准误差（长度单位）

    dt = a^2/(4g) 时期望为 4 g t = nsteps a^2。
    """
    rng = block_rng(seed, 0)
    hops = rng.integers(0, 4, size=(n_walkers, nsteps))
    displacement = HOP_VECTORS[hops].sum(axis=1) if nsteps else np.zeros((n_walkers, 2))
    squared = (displacement ** 2).sum(axis=1) * a ** 2
    return float(squared.mean()), float(squared.std(ddof=1) / math.sqrt(n_walkers))

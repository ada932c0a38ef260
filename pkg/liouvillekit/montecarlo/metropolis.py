"""
单点高斯提议的 Metropolis 采样器

钉扎点 x0 从不被提议，所有样本满足 phi(x0) = 0。
热化期间每 TUNE_INTERVAL 次扫描按接受率调整提议宽度，热化结束后冻结。
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from liouvillekit.config import settings
from liouvillekit.exceptions import ContractError
from liouvillekit.lattice.fields import ScalarField
from liouvillekit.logging_config import get_logger
from liouvillekit.montecarlo.action import action_value, interaction_terms, kinetic_terms, potential_weights
from liouvillekit.schemas.lattice import Site
from liouvillekit.schemas.montecarlo import ActionSpec, McConfig
from liouvillekit.utils.logger import log_mc_run
from liouvillekit.utils.statistics import integrated_autocorrelation_time

logger = get_logger(__name__)

TUNE_INTERVAL = 50
TUNE_FACTOR = 1.1
TARGET_ACCEPTANCE = (0.4, 0.6)


@dataclass(frozen=True)
class McRun:
    """一条链的测量样本与诊断"""

    action: ActionSpec
    config: McConfig
    samples: np.ndarray
    acceptance: float
    width: float
    duration_ms: float = 0.0

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def n_samples(self) -> int:
        return int(self.samples.shape[0])

    def action_chain(self) -> np.ndarray:
        """每个样本的作用量"""
        return kinetic_terms(self.samples) + interaction_terms(self.samples, self.action)

    def interaction_chain(self) -> np.ndarray:
        return interaction_terms(self.samples, self.action)

    @property
    def tau_int(self) -> float:
        """作用量链的积分自相关时间"""
        return integrated_autocorrelation_time(self.action_chain())

    def field(self, index: int) -> ScalarField:
        return ScalarField(self.action.lattice, self.samples[index])


def neighbour_table(spec: ActionSpec) -> List[List[int]]:
    """每个格点的 4 个最近邻（行优先索引，周期边界下可能重复）"""
    lattice = spec.lattice
    table = []
    for index in range(lattice.n_sites):
        i, j = lattice.site(index)
        table.append([
            lattice.index((i + 1, j)),
            lattice.index((i - 1, j)),
            lattice.index((i, j + 1)),
            lattice.index((i, j - 1)),
        ])
    return table


def local_action_change(
    state: Sequence[float],
    site: int,
    new_value: float,
    neighbours: Sequence[int],
    potential: float,
    b: float,
) -> float:
    """单点改变 phi(site) -> new_value 的作用量差"""
    old = state[site]
    kinetic = 0.0
    for n in neighbours:
        other = state[n]
        kinetic += (new_value - other) ** 2 - (old - other) ** 2
    return 0.5 * kinetic + potential * (math.exp(b * new_value) - math.exp(b * old))


def _retune(width: float, acceptance: float) -> float:
    low, high = TARGET_ACCEPTANCE
    if acceptance > high:
        return width * TUNE_FACTOR
    if acceptance < low:
        return width / TUNE_FACTOR
    return width


def metropolis_run(spec: ActionSpec, mc: McConfig) -> McRun:
    """
    单条链：热化后每 stride 次扫描记录一次完整配置

    同一 (spec, mc) 总是给出相同的链。
    """
    lattice = spec.lattice
    pinned = lattice.index(spec.x0)
    sites = [s for s in range(lattice.n_sites) if s != pinned]
    neighbours = neighbour_table(spec)
    potential = potential_weights(spec).reshape(-1).tolist()
    b = spec.couplings.b

    rng = np.random.default_rng(mc.seed)
    state = [0.0] * lattice.n_sites
    width = mc.width
    samples = np.empty((mc.n_measurements,) + lattice.shape)
    measured = 0
    accepted_total = 0
    proposed_total = 0
    window_accepted = 0
    window_proposed = 0

    start = time.perf_counter()
    for sweep in range(mc.sweeps):
        steps = (rng.standard_normal(len(sites)) * width).tolist()
        uniforms = rng.random(len(sites)).tolist()
        accepted = 0
        for site, step, u in zip(sites, steps, uniforms):
            proposal = state[site] + step
            delta = local_action_change(state, site, proposal, neighbours[site], potential[site], b)
            if delta <= 0.0 or u < math.exp(-delta):
                state[site] = proposal
                accepted += 1

        if sweep < mc.thermalization:
            window_accepted += accepted
            window_proposed += len(sites)
            if mc.tune and (sweep + 1) % TUNE_INTERVAL == 0:
                width = _retune(width, window_accepted / window_proposed)
                window_accepted = window_proposed = 0
            continue

        accepted_total += accepted
        proposed_total += len(sites)
        if (sweep - mc.thermalization) % mc.stride == 0:
            samples[measured] = np.array(state).reshape(lattice.shape)
            measured += 1

    duration = (time.perf_counter() - start) * 1000
    acceptance = accepted_total / proposed_total if proposed_total else 1.0
    log_mc_run(spec.kind, mc.seed, mc.sweeps, acceptance, width, duration, n_samples=measured)
    return McRun(
        action=spec,
        config=mc,
        samples=samples[:measured],
        acceptance=acceptance,
        width=width,
        duration_ms=duration,
    )


def run_chains(spec: ActionSpec, mc: McConfig, n_chains: int, max_workers: Optional[int] = None) -> List[McRun]:
    """
    多条独立链，种子由 (mc.seed, 链号) 派生

    返回顺序与链号一致，与并发调度无关。
    """
    seeds = [
        int(np.random.SeedSequence(mc.seed, spawn_key=(k,)).generate_state(1)[0])
        for k in range(n_chains)
    ]
    configs = [mc.model_copy(update={"seed": s}) for s in seeds]
    with ThreadPoolExecutor(max_workers=max_workers or settings.MAX_WORKERS) as executor:
        return list(executor.map(lambda cfg: metropolis_run(spec, cfg), configs))


def merge_samples(runs: Sequence[McRun]) -> np.ndarray:
    """按链号拼接样本"""
    return np.concatenate([run.samples for run in runs], axis=0)


def detailed_balance_residual(
    state: ScalarField,
    site: Site,
    new_value: float,
    spec: ActionSpec,
    width: float = 1.0,
) -> float:
    """
    |pi(phi) P(phi -> phi') - pi(phi') P(phi' -> phi)| 的相对值

    P = q(phi'|phi) min(1, e^{-dS})，q 为对称高斯提议密度。

    Raises:
        ContractError: site 为钉扎点
    """
    lattice = spec.lattice
    if lattice.wrap(site) == lattice.wrap(spec.x0):
        raise ContractError("the pinned site is never proposed", site=list(site))
    i, j = lattice.wrap(site)
    values = np.array(state.values)
    values[i, j] = new_value
    moved = ScalarField(lattice, values)

    s_old = action_value(state, spec)
    s_new = action_value(moved, spec)
    floor = min(s_old, s_new)
    step = new_value - state.at(site)
    q = math.exp(-step ** 2 / (2.0 * width ** 2)) / math.sqrt(2.0 * math.pi * width ** 2)

    forward = math.exp(-(s_old - floor)) * q * min(1.0, math.exp(-(s_new - s_old)))
    backward = math.exp(-(s_new - floor)) * q * min(1.0, math.exp(-(s_old - s_new)))
    return abs(forward - backward) / max(forward, backward)

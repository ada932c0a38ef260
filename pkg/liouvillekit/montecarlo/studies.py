"""
T -> 无穷极限比较与 b = 0 平凡性检查
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from liouvillekit.exceptions import ContractError
from liouvillekit.logging_config import get_logger
from liouvillekit.montecarlo.action import action_difference_bound, interaction_volume, potential_weights
from liouvillekit.montecarlo.metropolis import McRun, metropolis_run
from liouvillekit.montecarlo.observables import Pair, default_pairs, measure_diff_correlators
from liouvillekit.schemas.montecarlo import ActionSpec, McConfig

logger = get_logger(__name__)

DEFAULT_T_VALUES = (1.0, 10.0, 100.0, 1000.0)
DEFAULT_G_VALUES = (1.0, 10.0, 100.0)
BOUND_RATIO_LIMIT = 1e-3
SLOPE_TOLERANCE = 0.1
INTERACTION_TOLERANCE = 1e-12


@dataclass
class TLimitReport:
    """T 极限比较结果"""

    t_values: List[float]
    bounds: List[float]
    bound_ratios: List[float]
    table: pd.DataFrame
    reference: pd.DataFrame
    deviations_decreasing: Dict[str, bool] = field(default_factory=dict)

    @property
    def bound_monotone(self) -> bool:
        return all(later < earlier for earlier, later in zip(self.bounds, self.bounds[1:]))

    @property
    def final_bound_ratio(self) -> float:
        return self.bound_ratios[-1]

    @property
    def within_3sigma(self) -> bool:
        last = self.table[self.table["tt"] == self.t_values[-1]]
        return bool((last["deviation"] <= 3.0 * last["sigma"]).all())

    @property
    def passed(self) -> bool:
        return self.bound_monotone and self.final_bound_ratio < BOUND_RATIO_LIMIT and self.within_3sigma

    def to_dict(self) -> dict:
        return {
            "t_values": self.t_values,
            "bounds": self.bounds,
            "bound_ratios": self.bound_ratios,
            "bound_monotone": self.bound_monotone,
            "final_bound_ratio": self.final_bound_ratio,
            "within_3sigma": self.within_3sigma,
            "deviations_decreasing": self.deviations_decreasing,
        }


def _correlators(run: McRun, pairs: Sequence[Pair]) -> pd.DataFrame:
    return measure_diff_correlators(
        run.samples, pairs, run.action.couplings.b, run.action.lattice, n_batches=run.config.batches
    )


def compare_T_limit(
    base: ActionSpec,
    t_values: Sequence[float] = DEFAULT_T_VALUES,
    mc: Optional[McConfig] = None,
    pairs: Optional[Sequence[Pair]] = None,
) -> TLimitReport:
    """
    mapped 作用量在一组 T 上与 liouville 参照比较

    所有链使用同一种子（配对比较）。确定性部分只依赖作用量窗口。

    Raises:
        ContractError: T 列表不是严格递增
    """
    t_values = [float(t) for t in t_values]
    if any(later <= earlier for earlier, later in zip(t_values, t_values[1:])):
        raise ContractError("T values must be strictly ascending", t_values=t_values)
    mc = mc or McConfig()
    pairs = list(pairs) if pairs is not None else default_pairs(base.lattice, base.x0)

    total = interaction_volume(base)
    bounds, ratios = [], []
    for tt in t_values:
        bound = action_difference_bound(base.with_couplings(tt=tt))
        bounds.append(bound)
        ratios.append(bound / total)

    reference = _correlators(metropolis_run(base.with_kind("liouville"), mc), pairs)
    frames = []
    for tt in t_values:
        mapped = base.with_kind("mapped").with_couplings(tt=tt)
        table = _correlators(metropolis_run(mapped, mc), pairs)
        merged = table.merge(reference, on=["observable", "pair"], suffixes=("", "_ref"))
        merged["deviation"] = (merged["mean"] - merged["mean_ref"]).abs()
        merged["sigma"] = np.sqrt(merged["stderr"] ** 2 + merged["stderr_ref"] ** 2)
        merged.insert(0, "tt", tt)
        frames.append(merged)
        logger.info(f"T={tt}: max deviation {merged['deviation'].max():.3e}")
    table = pd.concat(frames, ignore_index=True)

    decreasing = {}
    for (observable, pair), group in table.groupby(["observable", "pair"], sort=True):
        deviations = group.sort_values("tt")["deviation"].tolist()
        decreasing[f"{observable}:{pair}"] = deviations[-1] <= deviations[0]

    return TLimitReport(
        t_values=t_values,
        bounds=bounds,
        bound_ratios=ratios,
        table=table,
        reference=reference,
        deviations_decreasing=decreasing,
    )


@dataclass
class TrivialityReport:
    """b = 0 时相互作用项随 g 的标度"""

    g_values: List[float]
    interaction_means: List[float]
    expected: List[float]
    slope: float
    chains_identical: bool

    @property
    def max_rel_error(self) -> float:
        """链均值相对精确值 (1/(4 pi g^2)) sum_x w(x) a^2 的最大偏差"""
        return max(abs(mean - exact) / exact for mean, exact in zip(self.interaction_means, self.expected))

    @property
    def passed(self) -> bool:
        return (
            abs(self.slope + 2.0) <= SLOPE_TOLERANCE
            and self.chains_identical
            and self.max_rel_error <= INTERACTION_TOLERANCE
        )

    def to_dict(self) -> dict:
        return {
            "g_values": self.g_values,
            "interaction_means": self.interaction_means,
            "expected": self.expected,
            "max_rel_error": self.max_rel_error,
            "slope": self.slope,
            "chains_identical": self.chains_identical,
        }


def expected_interaction(base: ActionSpec, g: float) -> float:
    """b = 0 时与场无关的相互作用量"""
    return math.fsum(potential_weights(base.with_couplings(g=float(g))).reshape(-1))


def triviality_check(
    base: ActionSpec,
    mc: Optional[McConfig] = None,
    g_values: Sequence[float] = DEFAULT_G_VALUES,
) -> TrivialityReport:
    """
    b = 0 时 <S_int> = (1/(4 pi g^2)) V 与场无关，对数斜率为 -2

    Metropolis 比值中常数项相消，不同 g 的链逐位相同。

    Raises:
        ContractError: base 的 b 不为零
    """
    if base.couplings.b != 0.0:
        raise ContractError("triviality check needs b = 0", b=base.couplings.b)
    if base.kind == "free-gaussian":
        raise ContractError("free-gaussian action has no interaction term")
    mc = mc or McConfig()

    means, chains = [], []
    for g in g_values:
        run = metropolis_run(base.with_couplings(g=float(g)), mc)
        means.append(float(run.interaction_chain().mean()))
        chains.append(run.samples)
    slope = float(np.polyfit(np.log(g_values), np.log(means), 1)[0])
    identical = all(np.array_equal(chains[0], other) for other in chains[1:])
    logger.info(f"Triviality slope {slope:.6f} over g={list(g_values)} (chains identical: {identical})")
    return TrivialityReport(
        g_values=[float(g) for g in g_values],
        interaction_means=means,
        expected=[expected_interaction(base, g) for g in g_values],
        slope=slope,
        chains_identical=identical,
    )

"""
场差关联函数：<(phi(x) - phi(y))^2> 与 <e^{b(phi(x) - phi(y))}>
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from liouvillekit.schemas.lattice import LatticeSpec, Site
from liouvillekit.utils.statistics import batch_means, integrated_autocorrelation_time

Pair = Tuple[Site, Site]

OBSERVABLE_COLUMNS = ["observable", "pair", "mean", "stderr", "tau_int"]


def pair_label(pair: Pair) -> str:
    (i, j), (k, l) = pair
    return f"{i},{j}|{k},{l}"


def default_pairs(lattice: LatticeSpec, x0: Site, count: int = 5) -> List[Pair]:
    """沿对角线离开 x0 的若干点与 x0 组成的点对"""
    pairs = []
    for step in range(1, count + 1):
        i = (x0[0] + step) % lattice.nx
        j = (x0[1] + step // 2) % lattice.ny
        pairs.append(((i, j), x0))
    return pairs


def _summarize(name: str, label: str, chain: np.ndarray, n_batches: int) -> dict:
    mean, stderr = batch_means(chain, n_batches=n_batches)
    return {
        "observable": name,
        "pair": label,
        "mean": float(mean),
        "stderr": float(stderr),
        "tau_int": integrated_autocorrelation_time(chain),
    }


def measure_diff_correlators(
    samples: np.ndarray,
    pairs: Sequence[Pair],
    b: float,
    lattice: LatticeSpec,
    n_batches: Optional[int] = None,
) -> pd.DataFrame:
    """
    每个点对的两个场差关联函数及批均值误差

    Args:
        samples: 形状 (n, nx, ny) 的样本
        pairs: [(x, y)] 点对
        b: 指数关联函数的耦合
        lattice: 格点描述（用于坐标取模）
        n_batches: 批数，默认 settings.MIN_BATCHES

    Returns:
        列为 observable, pair, mean, stderr, tau_int 的表格
    """
    rows = []
    for pair in pairs:
        (xi, xj), (yi, yj) = lattice.wrap(pair[0]), lattice.wrap(pair[1])
        diff = samples[:, xi, xj] - samples[:, yi, yj]
        label = pair_label(pair)
        rows.append(_summarize("diff_sq", label, diff ** 2, n_batches))
        rows.append(_summarize("exp_diff", label, np.exp(b * diff), n_batches))
    return pd.DataFrame(rows, columns=OBSERVABLE_COLUMNS)

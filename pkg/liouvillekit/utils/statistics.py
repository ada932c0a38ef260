"""
马尔可夫链统计工具：自协方差、积分自相关时间、批均值误差
"""

from typing import Optional, Tuple

import numpy as np

from liouvillekit.config import settings
from liouvillekit.exceptions import ContractError


def autocovariance(chain: np.ndarray, max_lag: Optional[int] = None) -> np.ndarray:
    """
    链的自协方差函数（自然估计量，分母为 n）

    Args:
        chain: 一维样本序列
        max_lag: 最大滞后，默认 n-1

    Returns:
        gamma[k], k = 0..max_lag
    """
    x = np.asarray(chain, dtype=float)
    n = x.shape[0]
    if max_lag is None or max_lag >= n:
        max_lag = n - 1

    centered = x - x.mean()
    # FFT 计算，补零避免循环卷积
    size = 1 << (2 * n - 1).bit_length()
    spectrum = np.fft.rfft(centered, n=size)
    acov = np.fft.irfft(spectrum * np.conjugate(spectrum), n=size)[:max_lag + 1]
    return acov / n


def integrated_autocorrelation_time(chain: np.ndarray, window_factor: float = 5.0) -> float:
    """
    积分自相关时间 tau_int = 1/2 + sum_{k>=1} rho(k)

    使用自动窗口：取满足 W >= c * tau_int(W) 的最小 W。

    Args:
        chain: 一维样本序列
        window_factor: 窗口因子 c

    Returns:
        tau_int（常数链返回 0.5）
    """
    x = np.asarray(chain, dtype=float)
    if x.shape[0] < 2:
        return 0.5

    gamma = autocovariance(x)
    if gamma[0] <= 0.0:
        return 0.5

    rho = gamma / gamma[0]
    tau = 0.5
    for w in range(1, rho.shape[0]):
        tau += rho[w]
        if w >= window_factor * tau:
            break
    return float(max(tau, 0.5))


def batch_means(samples: np.ndarray, n_batches: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    批均值估计

    Args:
        samples: 形状 (n,) 或 (n, k) 的样本，沿第 0 轴为链方向
        n_batches: 批数，默认 settings.MIN_BATCHES

    Returns:
        (均值, 标准误差)，标量样本返回 0 维数组
    """
    n_batches = n_batches or settings.MIN_BATCHES
    x = np.asarray(samples, dtype=float)
    n = x.shape[0]
    if n_batches < 2:
        raise ContractError("batch means need at least 2 batches", n_batches=n_batches)
    if n < n_batches:
        raise ContractError(
            f"not enough samples ({n}) for {n_batches} batches",
            samples=n,
            n_batches=n_batches,
        )

    batch_size = n // n_batches
    used = x[:batch_size * n_batches]
    blocks = used.reshape((n_batches, batch_size) + x.shape[1:]).mean(axis=1)

    mean = x.mean(axis=0)
    stderr = blocks.std(axis=0, ddof=1) / np.sqrt(n_batches)
    return mean, stderr

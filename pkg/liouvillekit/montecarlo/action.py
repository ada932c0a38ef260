"""
格点作用量

    S = sum_x a^2 [ 1/2 sum_mu (grad_mu phi)^2 + (1/(4 pi g^2)) w(x) e^{b phi(x)} ]

w 为窗口：liouville 取 1，mapped 取 exp(-(x - x0)^2/(4gT))（周期最小像），
free-gaussian 没有势能项。
"""

import math

import numpy as np

from liouvillekit.exceptions import ContractError
from liouvillekit.lattice.fields import ScalarField, minimum_image_sq
from liouvillekit.schemas.montecarlo import ActionSpec


def window(spec: ActionSpec) -> np.ndarray:
    """势能窗口 w(x)，形状 (nx, ny)"""
    lattice = spec.lattice
    if spec.kind == "free-gaussian":
        return np.zeros(lattice.shape)
    if spec.kind == "mapped":
        c = spec.couplings
        return np.exp(-minimum_image_sq(lattice, spec.x0) / (4.0 * c.g * c.tt))
    return np.ones(lattice.shape)


def potential_weights(spec: ActionSpec) -> np.ndarray:
    """逐点势能系数 (1/(4 pi g^2)) w(x) a^2"""
    return spec.couplings.interaction_scale * window(spec) * spec.lattice.a ** 2


def kinetic_terms(configs: np.ndarray) -> np.ndarray:
    """
    动能项 1/2 sum_x sum_mu (phi(x+mu) - phi(x))^2，沿最后两轴

    a^2 与 1/a^2 相消，结果与格距无关。
    """
    total = 0.0
    for axis in (-2, -1):
        diff = np.roll(configs, -1, axis=axis) - configs
        total = total + 0.5 * (diff ** 2).sum(axis=(-2, -1))
    return total


def interaction_terms(configs: np.ndarray, spec: ActionSpec) -> np.ndarray:
    """势能项 sum_x (1/(4 pi g^2)) w(x) a^2 e^{b phi(x)}，沿最后两轴"""
    return (potential_weights(spec) * np.exp(spec.couplings.b * configs)).sum(axis=(-2, -1))


def check_pinned(phi: ScalarField, spec: ActionSpec) -> None:
    value = phi.at(spec.x0)
    if value != 0.0:
        raise ContractError(
            f"field is not pinned: phi{spec.x0} = {value!r}",
            x0=list(spec.x0),
            value=value,
        )


def action_value(phi: ScalarField, spec: ActionSpec) -> float:
    """
    作用量数值

    Raises:
        ContractError: phi(x0) != 0
    """
    check_pinned(phi, spec)
    return float(kinetic_terms(phi.values) + interaction_terms(phi.values, spec))


def interaction_value(phi: ScalarField, spec: ActionSpec) -> float:
    """相互作用部分 S_int"""
    check_pinned(phi, spec)
    return float(interaction_terms(phi.values, spec))


def action_difference_bound(spec: ActionSpec) -> float:
    """
    |S_mapped - S_liouville| 的上界 (1/(4 pi g^2)) sum_x a^2 (1 - w(x))

    对 e^{b phi} <= 1 的配置成立；一般配置乘以 max e^{b phi}。
    """
    mapped = spec.with_kind("mapped")
    c = spec.couplings
    return c.interaction_scale * math.fsum(((1.0 - window(mapped)) * spec.lattice.a ** 2).reshape(-1))


def interaction_volume(spec: ActionSpec) -> float:
    """phi = 0 时 liouville 相互作用总量 (1/(4 pi g^2)) V"""
    return spec.couplings.interaction_scale * spec.lattice.volume

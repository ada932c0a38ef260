"""
kernel 与 walk 子命令
"""

import argparse

import numpy as np

from liouvillekit.commands.router import CommandRouter, parse_bool, parse_site
from liouvillekit.diffusion.kernels import free_kernel_periodic
from liouvillekit.diffusion.solver import kernel_from_source
from liouvillekit.diffusion.studies import convergence_study, kernel_table
from liouvillekit.exceptions import ConfigFileError
from liouvillekit.lattice.fields import random_smooth
from liouvillekit.lattice.operators import grad
from liouvillekit.logging_config import get_logger
from liouvillekit.schemas.lattice import LatticeSpec
from liouvillekit.schemas.run_config import RunConfig
from liouvillekit.storage.artifacts import ArtifactKeyManager, ArtifactStore, digest
from liouvillekit.walkers.ensemble import estimate_psi
from liouvillekit.walkers.paths import walker_spec

logger = get_logger(__name__)

router = CommandRouter()


def resolve_timeline(config: RunConfig, t: float) -> LatticeSpec:
    """
    推进用的时空格点

    配置给出 nt >= 2 时原样使用；否则取 dt = dt_ratio * a^2 / g 并调整到 t 的整数分之一。
    """
    lattice = config.lattice
    if lattice.nt >= 2:
        return lattice
    dt_ratio = config.param("dt_ratio", float, 0.1)
    dt = dt_ratio * lattice.a ** 2 / config.couplings.g
    steps = max(1, int(round(t / dt)))
    return config.timeline(steps + 1, t / steps)


def _kernel_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t", type=float, help="比较时刻（默认 0.5）")
    parser.add_argument("--x0", type=str, help="源点 'i,j'")
    parser.add_argument("--mode", choices=["naive", "similarity"], help="协变拉普拉斯离散")
    parser.add_argument("--phi-amplitude", dest="phi_amplitude", type=float, help="A = grad(phi) 的随机光滑 phi 幅度")
    parser.add_argument("--dt-ratio", dest="dt_ratio", type=float, help="g dt / a^2（默认 0.1）")
    parser.add_argument("--tol-kernel", dest="tol_kernel", type=float, help="相对 L-inf 误差容差（默认 0.05）")
    parser.add_argument("--convergence", type=str, help="同时运行三级收敛研究 (true/false)")


@router.command("kernel", help="扩散方程推进并与闭式核比较", add_arguments=_kernel_arguments)
def run_kernel(config: RunConfig, store: ArtifactStore) -> int:
    c = config.couplings
    spec = resolve_timeline(config, config.param("t", float, 0.5))
    x0 = config.param("x0", parse_site, (spec.nx // 2, spec.ny // 2))
    mode = config.param("mode", str, "similarity")
    amplitude = config.param("phi_amplitude", float, 0.0)
    tolerance = config.param("tol_kernel", float, 0.05)

    phi = None
    if amplitude > 0.0:
        phi = random_smooth(spec, np.random.default_rng(config.seed or 0), amplitude)
    table = kernel_table(spec, c, x0, phi=phi, mode=mode)

    last = spec.nt - 1
    t_final = last * spec.dt
    exact = free_kernel_periodic(t_final, spec, x0, c.g)
    if phi is not None:
        exact = exact * np.exp(-c.b * (phi.values - phi.at(x0)))
    error = float(np.max(np.abs(table.values[last] - exact)) / np.max(np.abs(exact)))
    passed = error <= tolerance

    store.write_table(table.to_frame(include_exact=phi is None), ArtifactKeyManager.KERNEL_TABLE)
    report = {
        "t": t_final,
        "linf_rel_error": error,
        "tolerance": tolerance,
        "passed": passed,
        "mass": table.masses().tolist(),
        "mode": mode,
    }
    if config.param("convergence", parse_bool, False):
        study = convergence_study(t=0.5, g=c.g)
        store.write_table(study, ArtifactKeyManager.CONVERGENCE)
        report["convergence_ratios"] = study["ratio"].dropna().tolist()
    store.write_json(report, ArtifactKeyManager.REPORT)
    logger.info(f"Kernel comparison at t={t_final:.6g}: relative error {error:.3e}")
    return 0 if passed else 1


def _walk_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--walkers", type=int, help="行走者数量（必填）")
    parser.add_argument("--t", type=float, help="时间，须为 a^2/(4g) 的整数倍（默认 0.25）")
    parser.add_argument("--x0", type=str, help="起点 'i,j'")
    parser.add_argument("--gamma-amplitude", dest="gamma_amplitude", type=float, help="A = grad(gamma) 的随机光滑 gamma 幅度")
    parser.add_argument("--min-fraction", dest="min_fraction", type=float, help="3 倍标准误差内的最低格点比例（默认 0.95）")


@router.command("walk", help="路径积分蒙特卡洛与 PDE 比较", add_arguments=_walk_arguments, stochastic=True)
def run_walk(config: RunConfig, store: ArtifactStore) -> int:
    seed = config.require_seed()
    n_walkers = config.param("walkers", int)
    if n_walkers is None:
        raise ConfigFileError("--walkers is required for subcommand walk")
    c = config.couplings
    spec = config.lattice.with_time(0, 1.0)
    t = config.param("t", float, 0.25)
    x0 = config.param("x0", parse_site, (spec.nx // 2, spec.ny // 2))
    amplitude = config.param("gamma_amplitude", float, 0.3)
    min_fraction = config.param("min_fraction", float, 0.95)

    A = None
    if amplitude > 0.0 and c.b != 0.0:
        A = grad(random_smooth(spec, np.random.default_rng(seed), amplitude))
    estimate = estimate_psi(x0, t, A, c, n_walkers, seed, spec=spec)
    pde = kernel_from_source(walker_spec(spec, c, t), c, x0, A=A, mode="similarity").values[estimate.nsteps]

    frame = estimate.to_frame()
    frame["pde"] = pde.reshape(-1)
    store.write_table(frame, ArtifactKeyManager.WALK_ESTIMATE)

    occupied = estimate.counts > 50
    agree = np.abs(estimate.values - pde) <= 3.0 * estimate.stderr
    fraction = float(agree[occupied].mean()) if occupied.any() else 0.0
    passed = fraction >= min_fraction
    store.write_json({
        "nsteps": estimate.nsteps,
        "n_walkers": n_walkers,
        "seed": seed,
        "occupied_sites": int(occupied.sum()),
        "fraction_within_3se": fraction,
        "tolerance": min_fraction,
        "passed": passed,
        "inputs_digest": digest({"config": config.model_dump(mode="json")}),
    }, ArtifactKeyManager.REPORT)
    return 0 if passed else 1

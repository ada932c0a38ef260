"""
identity、detk 与 lambda 子命令
"""

import argparse

import numpy as np

from liouvillekit.commands.router import CommandRouter, parse_bool, parse_site
from liouvillekit.gaussian.determinant import det_ratio, loop_traces
from liouvillekit.gaussian.identity import (
    derived_prefactor,
    psi_sector_logz,
    random_sources,
    rhs_identity,
    special_closed_form,
    special_sources,
)
from liouvillekit.gaussian.multiplier import lambda_identity_check
from liouvillekit.gaussian.operator import check_dense_size
from liouvillekit.lattice.fields import ScalarField
from liouvillekit.logging_config import get_logger
from liouvillekit.schemas.lattice import LatticeSpec
from liouvillekit.schemas.run_config import DEFAULT_DT, RunConfig
from liouvillekit.storage.artifacts import ArtifactKeyManager, ArtifactStore, digest

logger = get_logger(__name__)

router = CommandRouter()


def dense_lattice(config: RunConfig, nt: int) -> LatticeSpec:
    """未给出时间轴时补上 nt 个时间片、dt = DEFAULT_DT"""
    lattice = config.lattice
    if lattice.nt >= 1:
        return lattice
    return config.timeline(nt, DEFAULT_DT)


def _identity_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--samples", type=int, help="随机 (phi, J1, J2) 组数（默认 10）")
    parser.add_argument("--variant", choices=["lattice", "continuum"], help="右侧格林函数")
    parser.add_argument("--special", type=str, help="使用特殊源 (true/false)")
    parser.add_argument("--x0", type=str, help="特殊源的源点 'i,j'")


@router.command("identity", help="中心恒等式残差报告", add_arguments=_identity_arguments)
def run_identity(config: RunConfig, store: ArtifactStore) -> int:
    spec = dense_lattice(config, 5)
    check_dense_size(spec)
    c = config.couplings
    seed = 0 if config.seed is None else config.seed
    rng = np.random.default_rng(seed)
    samples = config.param("samples", int, 10)
    variant = config.param("variant", str, "lattice")
    special = config.param("special", parse_bool, False)
    x0 = config.param("x0", parse_site, (0, 0))

    cases = []
    worst = 0.0
    for _ in range(samples):
        phi = ScalarField(spec, rng.normal(scale=0.5, size=spec.shape))
        sources = special_sources(spec, c, x0) if special else random_sources(spec, rng)
        lhs = psi_sector_logz(phi, sources, c, spec)
        rhs = rhs_identity(phi, sources, c, spec, variant=variant)
        residual = abs(lhs - rhs) / max(1.0, abs(lhs))
        worst = max(worst, residual)
        case = {"lhs": lhs, "rhs": rhs, "residual": residual}
        if special:
            case["closed_form"] = special_closed_form(phi, c, spec, x0)
        cases.append(case)

    passed = worst <= config.tol_identity
    report = {
        "inputs_digest": digest({"config": config.model_dump(mode="json"), "seed": seed}),
        "cases": cases,
        "residual": worst,
        "tolerance": config.tol_identity,
        "passed": passed,
        "variant": variant,
    }
    if special:
        report["derived_prefactor"] = derived_prefactor(c)
    store.write_json(report, ArtifactKeyManager.REPORT)
    logger.info(f"Identity residual {worst:.3e} over {samples} samples (tolerance {config.tol_identity:g})")
    return 0 if passed else 1


def _detk_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--samples", type=int, help="随机 phi 个数（默认 20）")
    parser.add_argument("--mode", choices=["dressed", "naive"], help="算子模式")
    parser.add_argument("--order", type=int, help="闭合圈迹的阶数（默认 4）")


@router.command("detk", help="行列式比 det K_phi / det K_0 报告", add_arguments=_detk_arguments)
def run_detk(config: RunConfig, store: ArtifactStore) -> int:
    spec = dense_lattice(config, 4)
    check_dense_size(spec)
    c = config.couplings
    seed = 0 if config.seed is None else config.seed
    rng = np.random.default_rng(seed)
    samples = config.param("samples", int, 20)
    mode = config.param("mode", str, "dressed")
    order = config.param("order", int, 4)

    ratios = []
    max_trace = 0.0
    for _ in range(samples):
        phi = ScalarField(spec, rng.uniform(-0.5, 0.5, size=spec.shape))
        ratios.append(det_ratio(phi, c, spec, mode=mode))
        traces = loop_traces(phi, c, spec, order=order, mode=mode)
        max_trace = max(max_trace, float(np.max(np.abs(traces.traces))))
    worst = float(np.max(np.abs(np.array(ratios) - 1.0)))
    passed = worst <= config.tol_det

    store.write_json({
        "inputs_digest": digest({"config": config.model_dump(mode="json"), "seed": seed}),
        "ratios": ratios,
        "residual": worst,
        "max_loop_trace": max_trace,
        "tolerance": config.tol_det,
        "passed": passed,
        "mode": mode,
    }, ArtifactKeyManager.REPORT)
    return 0 if passed else 1


def _lambda_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--f", type=float, help="场强 F（默认 1）")


@router.command("lambda", help="乘子高斯恒等式检查", add_arguments=_lambda_arguments)
def run_lambda(config: RunConfig, store: ArtifactStore) -> int:
    alpha = config.couplings.alpha if config.couplings.alpha is not None else 2.0
    f = config.param("f", float, 1.0)
    result = lambda_identity_check(f, alpha)
    passed = result.residual < config.tol_lambda and abs(result.imag) < config.tol_lambda
    store.write_json({
        "alpha": alpha,
        "F": f,
        "lhs": result.lhs,
        "rhs": result.rhs,
        "imag": result.imag,
        "residual": result.residual,
        "tolerance": config.tol_lambda,
        "passed": passed,
    }, ArtifactKeyManager.REPORT)
    logger.info(f"lambda identity alpha={alpha} F={f}: lhs={result.lhs:.6f} rhs={result.rhs:.6f}")
    return 0 if passed else 1

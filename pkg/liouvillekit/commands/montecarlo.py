"""
mc-liouville、mc-mapped 与 compare 子命令
"""

import argparse

from liouvillekit.commands.router import CommandRouter, add_mc_arguments, parse_site
from liouvillekit.montecarlo.metropolis import metropolis_run
from liouvillekit.montecarlo.observables import default_pairs, measure_diff_correlators
from liouvillekit.montecarlo.studies import DEFAULT_T_VALUES, compare_T_limit
from liouvillekit.schemas.montecarlo import ActionKind, ActionSpec, McConfig
from liouvillekit.schemas.run_config import RunConfig, build_model
from liouvillekit.storage.artifacts import ArtifactKeyManager, ArtifactStore

router = CommandRouter()


def action_from_config(config: RunConfig, kind: ActionKind) -> ActionSpec:
    return build_model(
        ActionSpec,
        kind=kind,
        couplings=config.couplings,
        x0=config.param("x0", parse_site, (0, 0)),
        lattice=config.lattice.with_time(0, 1.0),
    )


def mc_from_config(config: RunConfig) -> McConfig:
    """McConfig 默认值之上覆盖配置中出现的键"""
    updates = {
        "sweeps": config.param("sweeps", int),
        "thermalization": config.param("thermalization", int),
        "width": config.param("width", float),
        "stride": config.param("stride", int),
        "batches": config.param("batches", int),
    }
    return build_model(McConfig, seed=config.require_seed(), **{k: v for k, v in updates.items() if v is not None})


def _run_chain(config: RunConfig, store: ArtifactStore, kind: ActionKind) -> int:
    action = action_from_config(config, kind)
    mc = mc_from_config(config)
    run = metropolis_run(action, mc)
    pairs = default_pairs(action.lattice, action.x0, config.param("pairs", int, 5))
    table = measure_diff_correlators(run.samples, pairs, action.couplings.b, action.lattice, n_batches=mc.batches)
    store.write_table(table, ArtifactKeyManager.OBSERVABLES)
    store.write_json({
        "kind": kind,
        "acceptance": run.acceptance,
        "width": run.width,
        "tau_int_action": run.tau_int,
        "n_samples": run.n_samples,
        "seed": mc.seed,
        "mc": mc.model_dump(),
    }, ArtifactKeyManager.REPORT)
    return 0


@router.command("mc-liouville", help="Liouville 作用量的 Metropolis 采样", add_arguments=add_mc_arguments, stochastic=True)
def run_mc_liouville(config: RunConfig, store: ArtifactStore) -> int:
    return _run_chain(config, store, "liouville")


@router.command("mc-mapped", help="有限 T 映射作用量的 Metropolis 采样", add_arguments=add_mc_arguments, stochastic=True)
def run_mc_mapped(config: RunConfig, store: ArtifactStore) -> int:
    return _run_chain(config, store, "mapped")


def _compare_arguments(parser: argparse.ArgumentParser) -> None:
    add_mc_arguments(parser)
    parser.add_argument("--t-values", dest="t_values", type=str, help="逗号分隔的递增 T 列表")


@router.command("compare", help="T -> 无穷极限比较", add_arguments=_compare_arguments, stochastic=True)
def run_compare(config: RunConfig, store: ArtifactStore) -> int:
    base = action_from_config(config, "mapped")
    mc = mc_from_config(config)
    t_values = config.param_list("t_values", float, list(DEFAULT_T_VALUES))
    pairs = default_pairs(base.lattice, base.x0, config.param("pairs", int, 5))
    report = compare_T_limit(base, t_values, mc, pairs)
    store.write_table(report.table, ArtifactKeyManager.OBSERVABLES)
    store.write_json({**report.to_dict(), "passed": report.passed}, ArtifactKeyManager.REPORT)
    return 0 if report.passed else 1

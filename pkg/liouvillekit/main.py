"""
liouvillekit - 命令行入口
"""

import argparse
import sys
import time
from typing import List, Optional

from liouvillekit import __version__
from liouvillekit.commands import command_router
from liouvillekit.config import get_log_dir, settings
from liouvillekit.exceptions import ConfigFileError, LiouvilleKitError
from liouvillekit.logging_config import get_logger, setup_logging
from liouvillekit.schemas.run_config import RunConfig, load_run_config
from liouvillekit.storage.artifacts import ArtifactStore

logger = get_logger(__name__)

# 不进入 RunConfig 的 argparse 字段
_META_KEYS = ("subcommand", "config", "log_level")


def common_arguments() -> argparse.ArgumentParser:
    """所有子命令共享的参数，名称与配置键一一对应"""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", type=str, help="INI 配置文件")
    parser.add_argument("--seed", type=int, help="随机种子（随机子命令必填）")
    parser.add_argument("--out", type=str, help=f"输出目录（默认 {settings.OUTPUT_DIR}）")
    parser.add_argument("--log-level", dest="log_level", type=str, help="日志级别")

    tolerances = parser.add_argument_group("tolerances")
    tolerances.add_argument("--tol-identity", dest="tol_identity", type=float, help=f"默认 {settings.TOL_IDENTITY:g}")
    tolerances.add_argument("--tol-det", dest="tol_det", type=float, help=f"默认 {settings.TOL_DET:g}")
    tolerances.add_argument("--tol-gauge", dest="tol_gauge", type=float, help=f"默认 {settings.TOL_GAUGE:g}")
    tolerances.add_argument("--tol-lambda", dest="tol_lambda", type=float, help=f"默认 {settings.TOL_LAMBDA:g}")
    tolerances.add_argument("--tol-series", dest="tol_series", type=float, help=f"默认 {settings.TOL_SERIES:g}")

    lattice = parser.add_argument_group("lattice")
    lattice.add_argument("--nx", type=int)
    lattice.add_argument("--ny", type=int)
    lattice.add_argument("--a", type=float, help="格距")
    lattice.add_argument("--nt", type=int, help="时间片数")
    lattice.add_argument("--dt", type=float, help="时间步长")

    couplings = parser.add_argument_group("couplings")
    couplings.add_argument("--g", type=float)
    couplings.add_argument("--b", type=float)
    couplings.add_argument("--tt", type=float, help="映射作用量中的 T")
    couplings.add_argument("--mu", type=float)
    couplings.add_argument("--alpha", type=float)
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liouvillekit",
        description="Liouville 场论映射的格点验证工具包",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    common = common_arguments()
    for name in command_router.names():
        command = command_router.get(name)
        sub = subparsers.add_parser(name, help=command.help, parents=[common])
        if command.add_arguments is not None:
            command.add_arguments(sub)
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in _META_KEYS and v is not None}


def execute(config: RunConfig, store: ArtifactStore) -> int:
    """
    执行子命令并写入清单

    清单与 config.ini 在执行前写出，失败的运行同样可以重跑。
    """
    command = command_router.get(config.subcommand)
    if command.stochastic:
        config.require_seed()

    snapshot = config.model_dump(mode="json")
    store.write_run_config(config.to_ini())
    store.write_manifest(config.subcommand, snapshot, {"status": "running"})

    start = time.perf_counter()
    status = command.handler(config, store)
    duration = (time.perf_counter() - start) * 1000
    store.write_manifest(config.subcommand, snapshot, {"status": "passed" if status == 0 else "failed", "exit_code": status})
    logger.info(
        f"Subcommand {config.subcommand} finished with exit code {status} in {duration:.2f}ms",
        extra={"duration_ms": duration, "seed": config.seed},
    )
    return status


def main(argv: Optional[List[str]] = None) -> int:
    """
    CLI 主函数

    Returns:
        退出码：0 通过，1 容差失败，2 用法/尺寸上限/前置条件，3 配置无效
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        return 2

    setup_logging(log_level=args.log_level, enable_file_logging=False,
                  enable_console_logging=settings.ENABLE_CONSOLE_LOGGING)
    try:
        config = load_run_config(args.subcommand, args.config, _overrides(args))
    except ConfigFileError as e:
        logger.error(f"Invalid configuration: {e.detail}")
        return e.exit_code

    setup_logging(
        log_dir=get_log_dir(config.out),
        log_level=args.log_level,
        enable_file_logging=settings.ENABLE_FILE_LOGGING,
        enable_console_logging=settings.ENABLE_CONSOLE_LOGGING,
    )
    store = ArtifactStore(config.out)
    try:
        return execute(config, store)
    except LiouvilleKitError as e:
        logger.error(f"{config.subcommand} failed: {e.detail}", extra={"seed": config.seed})
        store.write_json(e.to_dict(), store.key_manager.REPORT)
        store.write_manifest(config.subcommand, config.model_dump(mode="json"),
                             {"status": "failed", "exit_code": e.exit_code})
        return e.exit_code
    except Exception as e:
        logger.error(f"Unhandled exception in {config.subcommand}: {type(e).__name__}: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""
verify-all 子命令
"""

import argparse

from liouvillekit.commands.router import CommandRouter
from liouvillekit.pipeline import VerificationPipeline
from liouvillekit.schemas.run_config import RunConfig
from liouvillekit.storage.artifacts import ArtifactKeyManager, ArtifactStore

router = CommandRouter()


def _verify_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--checks", type=str, help="逗号分隔的检查名，默认全部")
    parser.add_argument("--workers", type=int, help="并发进程数")


@router.command("verify-all", help="运行全部验收检查", add_arguments=_verify_arguments)
def run_verify_all(config: RunConfig, store: ArtifactStore) -> int:
    names = config.param_list("checks", str) or None
    pipeline = VerificationPipeline(names, max_workers=config.param("workers", int))
    report = pipeline.run(config)
    store.write_json(
        {"summary": report.summary(), "checks": [r.model_dump() for r in report.checks]},
        ArtifactKeyManager.REPORT,
    )
    return 0 if report.passed else 1

"""
验收流水线

并发执行所选检查，报告按检查名排序组装，与完成顺序无关。
"""

import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import List, Optional

from liouvillekit.checks import build_checks
from liouvillekit.config import settings
from liouvillekit.logging_config import get_logger
from liouvillekit.schemas.reports import CheckReport, VerifyReport
from liouvillekit.schemas.run_config import RunConfig

logger = get_logger(__name__)


def _run_named_check(name: str, config: RunConfig) -> CheckReport:
    """在工作进程中按名称重建并运行检查"""
    return build_checks([name])[0].run(config)


class VerificationPipeline:
    """验收流水线"""

    def __init__(self, names: Optional[List[str]] = None, max_workers: Optional[int] = None):
        self.checks = build_checks(names)
        self.max_workers = settings.MAX_WORKERS if max_workers is None else max_workers
        self.logger = get_logger(__name__)

    def run(self, config: RunConfig) -> VerifyReport:
        """
        执行全部检查

        Args:
            config: 运行配置（容差、种子）

        Returns:
            VerifyReport
        """
        start = time.perf_counter()
        names = [check.name for check in self.checks]
        self.logger.info(f"Starting verification of {len(names)} checks with {self.max_workers} workers")

        if self.max_workers <= 1 or len(names) <= 1:
            reports = [check.run(config) for check in self.checks]
        else:
            reports = []
            with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
                futures = {executor.submit(_run_named_check, name, config): name for name in names}
                for future in as_completed(futures):
                    name = futures[future]
                    try:
                        reports.append(future.result())
                    except Exception as e:
                        self.logger.error(f"Worker for check {name} failed: {e}", exc_info=True)
                        reports.append(CheckReport(
                            name=name,
                            passed=False,
                            error={"error": e.__class__.__name__, "detail": str(e)},
                        ))

        report = VerifyReport.assemble(reports)
        total = (time.perf_counter() - start) * 1000
        self.logger.info(
            f"Verification completed: {len(names) - len(report.failed)}/{len(names)} passed "
            f"in {total:.2f}ms",
            extra={"duration_ms": total, "passed": report.passed},
        )
        if report.failed:
            self.logger.warning(f"Failed checks: {report.failed}")
        return report

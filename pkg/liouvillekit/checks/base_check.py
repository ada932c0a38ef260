"""
验收检查基类
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from liouvillekit.exceptions import LiouvilleKitError
from liouvillekit.schemas.reports import CheckReport
from liouvillekit.schemas.run_config import RunConfig
from liouvillekit.utils.logger import log_check

# 未指定 --seed 时检查使用的种子
DEFAULT_SEED = 20240917


@dataclass
class CheckOutcome:
    """检查的数值结果"""

    passed: bool
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)


class BaseCheck(ABC):
    """验收检查基类"""

    # 预期运行时间上限（秒），超出时记录警告
    budget_s: float = 60.0

    def __init__(self, name: str):
        self.name = name
        self.logger = logging.getLogger(f"{__name__}.{name}")

    @abstractmethod
    def evaluate(self, config: RunConfig) -> CheckOutcome:
        """
        执行检查

        Args:
            config: 运行配置（容差与种子）

        Returns:
            CheckOutcome
        """
        pass

    def seed(self, config: RunConfig) -> int:
        return DEFAULT_SEED if config.seed is None else config.seed

    def rng(self, config: RunConfig) -> np.random.Generator:
        return np.random.default_rng(self.seed(config))

    def run(self, config: RunConfig) -> CheckReport:
        """执行检查并生成报告；异常被记录并标记为失败"""
        start = time.perf_counter()
        try:
            outcome = self.evaluate(config)
            error = None
        except LiouvilleKitError as e:
            self.logger.error(f"Check {self.name} raised: {e.detail}", exc_info=True)
            outcome = CheckOutcome(passed=False)
            error = e.to_dict()
        except Exception as e:
            self.logger.error(f"Check {self.name} crashed: {e}", exc_info=True)
            outcome = CheckOutcome(passed=False)
            error = {"error": e.__class__.__name__, "detail": str(e)}
        duration = (time.perf_counter() - start) * 1000

        log_check(self.name, outcome.passed, outcome.residual, outcome.tolerance, duration)
        if duration > self.budget_s * 1000:
            self.logger.warning(f"Check {self.name} exceeded its {self.budget_s:.0f}s budget")

        return CheckReport(
            name=self.name,
            passed=outcome.passed,
            residual=outcome.residual,
            tolerance=outcome.tolerance,
            details=outcome.details,
            duration_ms=duration,
            error=error,
        )

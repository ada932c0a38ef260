"""
检查报告的 Pydantic 模式
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CheckReport(BaseModel):
    """单项验收检查结果"""

    name: str
    passed: bool
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    details: Dict[str, Any] = Field(default_factory=dict)
    duration_ms: float = 0.0
    error: Optional[Dict[str, Any]] = None


class VerifyReport(BaseModel):
    """verify-all 汇总报告，检查按名称排序"""

    checks: List[CheckReport]

    @classmethod
    def assemble(cls, reports: List[CheckReport]) -> "VerifyReport":
        return cls(checks=sorted(reports, key=lambda r: r.name))

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.checks)

    @property
    def failed(self) -> List[str]:
        return [r.name for r in self.checks if not r.passed]

    def summary(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "total": len(self.checks),
            "failed": self.failed,
            "residuals": {r.name: r.residual for r in self.checks},
        }

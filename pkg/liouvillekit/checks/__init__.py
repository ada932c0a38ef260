"""
验收检查注册表
"""

from typing import Dict, List, Optional, Type

from liouvillekit.checks.base_check import BaseCheck, CheckOutcome
from liouvillekit.checks.diffusion_checks import GaugeCovarianceCheck, KernelConvergenceCheck
from liouvillekit.checks.gaussian_checks import CentralIdentityCheck, DeterminantCheck, LambdaIdentityCheck
from liouvillekit.checks.mc_checks import SamplerExactnessCheck, TLimitCheck, TrivialityCheck
from liouvillekit.checks.walker_checks import EnumerationCheck, GrandCanonicalSeriesCheck, PathVsPdeCheck
from liouvillekit.exceptions import ConfigurationError

CHECK_CLASSES: List[Type[BaseCheck]] = [
    GaugeCovarianceCheck,
    KernelConvergenceCheck,
    CentralIdentityCheck,
    DeterminantCheck,
    LambdaIdentityCheck,
    GrandCanonicalSeriesCheck,
    PathVsPdeCheck,
    SamplerExactnessCheck,
    TLimitCheck,
    TrivialityCheck,
    EnumerationCheck,
]


def build_checks(names: Optional[List[str]] = None) -> List[BaseCheck]:
    """
    按名称实例化检查，None 表示全部

    Raises:
        ConfigurationError: 未知检查名
    """
    registry: Dict[str, BaseCheck] = {}
    for cls in CHECK_CLASSES:
        check = cls()
        registry[check.name] = check
    if names is None:
        return list(registry.values())
    unknown = [n for n in names if n not in registry]
    if unknown:
        raise ConfigurationError(f"unknown checks: {unknown}", available=sorted(registry))
    return [registry[n] for n in names]


__all__ = ["BaseCheck", "CheckOutcome", "CHECK_CLASSES", "build_checks"]

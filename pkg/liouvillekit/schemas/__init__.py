"""
Pydantic 模式定义
"""

from liouvillekit.schemas.lattice import Couplings, LatticeSpec, Site
from liouvillekit.schemas.montecarlo import ActionKind, ActionSpec, McConfig
from liouvillekit.schemas.reports import CheckReport, VerifyReport
from liouvillekit.schemas.run_config import RunConfig, load_run_config

__all__ = [
    "Couplings",
    "LatticeSpec",
    "Site",
    "ActionKind",
    "ActionSpec",
    "McConfig",
    "CheckReport",
    "VerifyReport",
    "RunConfig",
    "load_run_config",
]

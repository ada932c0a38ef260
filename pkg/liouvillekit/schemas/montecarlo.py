"""
Monte Carlo 相关的 Pydantic 模式
"""

from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from liouvillekit.schemas.lattice import Couplings, LatticeSpec, Site

ActionKind = Literal["liouville", "mapped", "free-gaussian"]


class ActionSpec(BaseModel):
    """作用量类型、耦合、钉扎点与格点"""

    kind: ActionKind = "liouville"
    couplings: Couplings = Field(default_factory=Couplings)
    x0: Site = (0, 0)
    lattice: LatticeSpec

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def validate_pinned_site(self):
        i, j = self.x0
        if not (0 <= i < self.lattice.nx and 0 <= j < self.lattice.ny):
            raise ValueError(f"pinned site {self.x0} outside {self.lattice.nx}x{self.lattice.ny} lattice")
        return self

    def with_kind(self, kind: ActionKind) -> "ActionSpec":
        return self.model_copy(update={"kind": kind})

    def with_couplings(self, **updates) -> "ActionSpec":
        return self.model_copy(update={"couplings": self.couplings.model_copy(update=updates)})


class McConfig(BaseModel):
    """Metropolis 链配置"""

    sweeps: int = Field(20000, gt=0, description="总扫描次数（含热化）")
    thermalization: int = Field(2000, ge=0, description="热化扫描次数")
    width: float = Field(1.0, ge=0.0, description="初始提议宽度")
    seed: int = Field(0, ge=0)
    stride: int = Field(1, ge=1, description="测量间隔（扫描）")
    batches: int = Field(20, ge=20, description="批均值误差的批数")
    tune: bool = Field(True, description="热化期间自动调节提议宽度")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def validate_sweeps(self):
        if self.sweeps <= self.thermalization:
            raise ValueError("sweeps must exceed thermalization")
        if (self.sweeps - self.thermalization) // self.stride < self.batches:
            raise ValueError("not enough measurements for the requested number of batches")
        return self

    @field_validator("width")
    @classmethod
    def validate_width(cls, v):
        if v != v:
            raise ValueError("width must be a number")
        return v

    @property
    def n_measurements(self) -> int:
        return -(-(self.sweeps - self.thermalization) // self.stride)

"""
格点几何与耦合常数的 Pydantic 模式
"""

import math
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

Site = Tuple[int, int]


class LatticeSpec(BaseModel):
    """周期二维空间格点加离散时间轴"""

    nx: int = Field(..., ge=2, description="x1 方向格点数")
    ny: int = Field(..., ge=2, description="x2 方向格点数")
    a: float = Field(1.0, gt=0.0, description="格距")
    nt: int = Field(0, ge=0, description="时间片数")
    dt: float = Field(1.0, gt=0.0, description="时间步长")
    bc: Literal["periodic"] = "periodic"

    model_config = {"frozen": True}

    @property
    def n_sites(self) -> int:
        return self.nx * self.ny

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def spacetime_shape(self) -> Tuple[int, int, int]:
        return (self.nt, self.nx, self.ny)

    @property
    def volume(self) -> float:
        """空间体积 nx*ny*a^2"""
        return self.n_sites * self.a ** 2

    def index(self, site: Site) -> int:
        """行优先索引，坐标按周期取模"""
        i, j = site
        return (i % self.nx) * self.ny + (j % self.ny)

    def site(self, index: int) -> Site:
        """索引 -> 坐标"""
        index = index % self.n_sites
        return (index // self.ny, index % self.ny)

    def wrap(self, site: Site) -> Site:
        i, j = site
        return (i % self.nx, j % self.ny)

    def with_time(self, nt: int, dt: float) -> "LatticeSpec":
        """同一空间格点，换一条时间轴"""
        return LatticeSpec.model_validate({**self.model_dump(), "nt": nt, "dt": dt})


class Couplings(BaseModel):
    """耦合常数 g, b, T, mu, alpha"""

    g: float = Field(1.0, gt=0.0, description="扩散耦合（长度量纲）")
    b: float = Field(0.0, description="规范耦合")
    tt: float = Field(1.0, gt=0.0, description="参数 T（长度量纲）")
    mu: float = Field(0.0, description="化学势")
    alpha: Optional[float] = Field(None, description="横向刚度，仅用于 lambda 恒等式检查")

    model_config = {"frozen": True}

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v):
        if v is not None and v <= 0:
            raise ValueError("alpha must be positive when given")
        return v

    @property
    def interaction_scale(self) -> float:
        """相互作用项系数 1/(4*pi*g^2)"""
        return 1.0 / (4.0 * math.pi * self.g ** 2)

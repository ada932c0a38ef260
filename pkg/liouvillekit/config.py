"""
应用配置管理
"""

from pathlib import Path
from typing import Optional
from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """应用配置"""

    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # 日志配置
    LOG_DIR: Optional[str] = None  # 日志目录，默认写到输出目录下的 logs
    ENABLE_FILE_LOGGING: bool = True
    ENABLE_CONSOLE_LOGGING: bool = True
    SLOW_CHECK_THRESHOLD: float = 30.0  # 慢检查阈值（秒）

    # 输出配置
    OUTPUT_DIR: str = "runs"

    # 稠密线性代数的尺寸上限 nt*nx*ny
    DENSE_SIZE_GUARD: int = 4096

    # 默认容差
    TOL_IDENTITY: float = 1e-10
    TOL_DET: float = 1e-12
    TOL_GAUGE: float = 1e-12
    TOL_LAMBDA: float = 1e-12
    TOL_SERIES: float = 1e-10

    # 像和截断
    IMAGE_SUM_CUTOFF: float = 1e-16

    # 统计配置
    MIN_BATCHES: int = 20
    WALKER_BLOCK_SIZE: int = 4096  # 每个确定性种子块中的行走者数量

    # 并发配置
    MAX_WORKERS: int = 4

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        if isinstance(v, str):
            return v.strip().upper()
        return v

    @field_validator("MIN_BATCHES")
    @classmethod
    def validate_min_batches(cls, v):
        if v < 2:
            raise ValueError("MIN_BATCHES must be at least 2")
        return v

    model_config = {
        "env_file": ".env",
        "case_sensitive": True,
        "extra": "ignore",
    }


# 全局配置实例
settings = Settings()


def get_log_dir(output_dir: Optional[str] = None) -> Path:
    """
    获取日志目录

    优先级：
    1. 如果设置了 LOG_DIR，直接使用
    2. 否则使用本次运行输出目录下的 logs
    3. 都没有时使用项目根目录下的 logs
    """
    if settings.LOG_DIR:
        return Path(settings.LOG_DIR)
    if output_dir:
        return Path(output_dir) / "logs"
    return Path(__file__).parent.parent / "logs"

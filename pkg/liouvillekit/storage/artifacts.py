"""
运行产物管理：文件命名与写入
"""

import hashlib
import json
import platform
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from liouvillekit import __version__
from liouvillekit.logging_config import get_logger

logger = get_logger(__name__)


class ArtifactKeyManager:
    """产物文件名管理器"""

    MANIFEST = "manifest.json"
    REPORT = "report.json"
    KERNEL_TABLE = "kernel"
    WALK_ESTIMATE = "walk"
    OBSERVABLES = "observables"
    CONVERGENCE = "convergence"
    RUN_CONFIG = "config.ini"

    @staticmethod
    def data_file(prefix: str, tag: Optional[str] = None) -> str:
        """数据 CSV 文件名"""
        return f"{prefix}_{tag}.csv" if tag else f"{prefix}.csv"


def _json_default(value: Any):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps(payload: Any) -> str:
    """确定性 JSON 序列化"""
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default)


def digest(payload: Any) -> str:
    """输入摘要（sha256 前 16 位）"""
    return hashlib.sha256(dumps(payload).encode("utf-8")).hexdigest()[:16]


class ArtifactStore:
    """单次运行的输出目录"""

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = Path(out_dir)
        self.key_manager = ArtifactKeyManager()
        self.out_dir.mkdir(parents=True, exist_ok=True)

    def write_table(self, frame: pd.DataFrame, prefix: str, tag: Optional[str] = None) -> Path:
        """
        写入 CSV 表格

        浮点数统一用 17 位有效数字，换行符固定，保证相同输入逐字节一致。
        """
        path = self.out_dir / self.key_manager.data_file(prefix, tag)
        frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
        logger.debug(f"Wrote table {path} ({len(frame)} rows)")
        return path

    def write_json(self, payload: Any, name: str) -> Path:
        """写入 JSON 文件"""
        path = self.out_dir / name
        path.write_text(dumps(payload) + "\n", encoding="utf-8")
        logger.debug(f"Wrote {path}")
        return path

    def write_run_config(self, ini_text: str) -> Path:
        """写入可直接用 --config 重跑的 INI 配置"""
        path = self.out_dir / self.key_manager.RUN_CONFIG
        path.write_text(ini_text, encoding="utf-8")
        return path

    def write_manifest(self, subcommand: str, config: Dict[str, Any], extra: Optional[Dict[str, Any]] = None) -> Path:
        """
        写入运行清单

        清单包含重跑所需的全部配置；时间戳单独存放，不参与确定性比较。
        """
        manifest = {
            "subcommand": subcommand,
            "config": config,
            "config_digest": digest(config),
            "version": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "created_at": datetime.now(timezone.utc).isoformat(),
        }
        if extra:
            manifest.update(extra)
        return self.write_json(manifest, self.key_manager.MANIFEST)

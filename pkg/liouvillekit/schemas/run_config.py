"""
运行配置：默认值 < INI 文件 < 命令行参数
"""

import configparser
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Type, TypeVar, Union

from pydantic import BaseModel, Field, ValidationError

from liouvillekit.config import settings
from liouvillekit.exceptions import ConfigFileError
from liouvillekit.logging_config import get_logger
from liouvillekit.schemas.lattice import Couplings, LatticeSpec

logger = get_logger(__name__)

RUN_KEYS = ("seed", "out", "tol_identity", "tol_det", "tol_gauge", "tol_lambda", "tol_series")
SHARED_SECTIONS = ("lattice", "couplings", "run")
DEFAULT_DT = 0.1

M = TypeVar("M", bound=BaseModel)


def build_model(model: Type[M], **fields: Any) -> M:
    """
    用配置中的值构造模型

    Raises:
        ConfigFileError: 校验失败（参数组合无效同样按配置无效处理）
    """
    try:
        return model(**fields)
    except ValidationError as e:
        raise ConfigFileError(
            f"invalid {model.__name__}: {e}", errors=[err["msg"] for err in e.errors()]
        ) from e


class RunConfig(BaseModel):
    """单次运行的完整配置"""

    subcommand: str
    lattice: LatticeSpec = Field(default_factory=lambda: LatticeSpec(nx=8, ny=8))
    couplings: Couplings = Field(default_factory=Couplings)
    seed: Optional[int] = Field(None, ge=0)
    out: str = Field(default_factory=lambda: settings.OUTPUT_DIR)
    tol_identity: float = Field(default_factory=lambda: settings.TOL_IDENTITY, gt=0.0)
    tol_det: float = Field(default_factory=lambda: settings.TOL_DET, gt=0.0)
    tol_gauge: float = Field(default_factory=lambda: settings.TOL_GAUGE, gt=0.0)
    tol_lambda: float = Field(default_factory=lambda: settings.TOL_LAMBDA, gt=0.0)
    tol_series: float = Field(default_factory=lambda: settings.TOL_SERIES, gt=0.0)
    params: Dict[str, str] = Field(default_factory=dict, description="子命令专用参数（原始字符串）")

    model_config = {"frozen": True}

    def param(self, key: str, cast: Callable[[str], Any], default: Any = None) -> Any:
        """读取子命令参数并转换类型"""
        raw = self.params.get(key)
        if raw is None:
            return default
        try:
            return cast(raw)
        except (TypeError, ValueError) as e:
            raise ConfigFileError(f"invalid value for {key}: {raw!r} ({e})", key=key) from e

    def param_list(self, key: str, cast: Callable[[str], Any], default: Optional[List[Any]] = None) -> List[Any]:
        """逗号分隔的参数列表"""
        raw = self.params.get(key)
        if raw is None:
            return list(default or [])
        try:
            return [cast(item.strip()) for item in raw.split(",") if item.strip()]
        except (TypeError, ValueError) as e:
            raise ConfigFileError(f"invalid list for {key}: {raw!r} ({e})", key=key) from e

    def require_seed(self) -> int:
        if self.seed is None:
            raise ConfigFileError(f"--seed is required for subcommand {self.subcommand}")
        return self.seed

    def timeline(self, nt: int, dt: float) -> LatticeSpec:
        """配置的空间格点换上由参数推出的时间轴"""
        return build_model(LatticeSpec, **{**self.lattice.model_dump(), "nt": nt, "dt": dt})

    def to_ini(self) -> str:
        """等价的 INI 文本，可直接用 --config 重跑"""
        parser = configparser.ConfigParser()
        parser["lattice"] = {k: repr(v) if isinstance(v, float) else str(v)
                             for k, v in self.lattice.model_dump().items() if k != "bc"}
        parser["couplings"] = {k: repr(v) for k, v in self.couplings.model_dump().items() if v is not None}
        run = {k: getattr(self, k) for k in RUN_KEYS if getattr(self, k) is not None}
        parser["run"] = {k: repr(v) if isinstance(v, float) else str(v) for k, v in run.items()}
        parser[self.subcommand] = dict(sorted(self.params.items()))
        lines = []
        for section in parser.sections():
            lines.append(f"[{section}]")
            lines.extend(f"{key} = {value}" for key, value in parser[section].items())
            lines.append("")
        return "\n".join(lines)


def _route(values: Mapping[str, Any], target: Dict[str, Dict[str, Any]]) -> None:
    """按键名分发到 lattice / couplings / run / params"""
    for key, value in values.items():
        if value is None:
            continue
        if key in LatticeSpec.model_fields:
            target["lattice"][key] = value
        elif key in Couplings.model_fields:
            target["couplings"][key] = value
        elif key in RUN_KEYS:
            target["run"][key] = value
        else:
            target["params"][key] = str(value)


def read_ini(path: Union[str, Path]) -> configparser.ConfigParser:
    """
    读取 INI 配置

    Raises:
        ConfigFileError: 文件不存在或无法解析
    """
    path = Path(path)
    parser = configparser.ConfigParser()
    try:
        with path.open(encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as e:
        raise ConfigFileError(f"cannot read config file {path}: {e}", path=str(path)) from e
    except configparser.Error as e:
        raise ConfigFileError(f"cannot parse config file {path}: {e}", path=str(path)) from e
    return parser


def load_run_config(
    subcommand: str,
    config_file: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """
    组装运行配置

    文件中 [lattice] [couplings] [run] 与 [<subcommand>] 节按键名分发，
    命令行参数最后覆盖。只给出 nt 时 dt 取 DEFAULT_DT。

    Raises:
        ConfigFileError: 文件无法解析或校验失败
    """
    target: Dict[str, Dict[str, Any]] = {"lattice": {}, "couplings": {}, "run": {}, "params": {}}
    if config_file is not None:
        parser = read_ini(config_file)
        for section in SHARED_SECTIONS + (subcommand,):
            if parser.has_section(section):
                _route(dict(parser[section]), target)
        logger.debug(f"Loaded config file {config_file} for {subcommand}")
    if overrides:
        _route(overrides, target)

    lattice = {"nx": 8, "ny": 8, **target["lattice"]}
    if "nt" in lattice and "dt" not in lattice:
        lattice["dt"] = DEFAULT_DT
    try:
        return RunConfig(
            subcommand=subcommand,
            lattice=LatticeSpec(**lattice),
            couplings=Couplings(**target["couplings"]),
            params=target["params"],
            **target["run"],
        )
    except ValidationError as e:
        raise ConfigFileError(f"invalid run configuration: {e}", errors=[err["msg"] for err in e.errors()]) from e

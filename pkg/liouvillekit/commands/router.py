"""
子命令路由
"""

import argparse
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from liouvillekit.schemas.lattice import Site
from liouvillekit.schemas.run_config import RunConfig
from liouvillekit.storage.artifacts import ArtifactStore

Handler = Callable[[RunConfig, ArtifactStore], int]
ArgumentAdder = Callable[[argparse.ArgumentParser], None]


@dataclass
class Command:
    name: str
    handler: Handler
    help: str
    add_arguments: Optional[ArgumentAdder] = None
    stochastic: bool = False


class CommandRouter:
    """子命令注册表"""

    def __init__(self):
        self.commands: Dict[str, Command] = {}

    def command(
        self,
        name: str,
        help: str,
        add_arguments: Optional[ArgumentAdder] = None,
        stochastic: bool = False,
    ) -> Callable[[Handler], Handler]:
        """注册子命令处理函数的装饰器"""
        def decorator(handler: Handler) -> Handler:
            self.commands[name] = Command(name, handler, help, add_arguments, stochastic)
            return handler
        return decorator

    def include_router(self, other: "CommandRouter") -> None:
        self.commands.update(other.commands)

    def names(self) -> List[str]:
        return list(self.commands)

    def get(self, name: str) -> Command:
        return self.commands[name]


def parse_site(text: str) -> Site:
    """'i,j' -> (i, j)"""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 2:
        raise ValueError(f"site must look like 'i,j', got {text!r}")
    return (int(parts[0]), int(parts[1]))


def parse_bool(text: str) -> bool:
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def add_mc_arguments(parser: argparse.ArgumentParser) -> None:
    """Metropolis 相关参数"""
    parser.add_argument("--sweeps", type=int, help="总扫描次数")
    parser.add_argument("--thermalization", type=int, help="热化扫描次数")
    parser.add_argument("--width", type=float, help="初始提议宽度")
    parser.add_argument("--stride", type=int, help="测量间隔")
    parser.add_argument("--batches", type=int, help="批均值批数（>= 20）")
    parser.add_argument("--x0", type=str, help="钉扎点 'i,j'")
    parser.add_argument("--pairs", type=int, help="关联函数点对数量")

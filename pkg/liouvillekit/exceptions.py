"""
异常定义

每个异常携带一个退出码，CLI 根据退出码结束进程（类似 HTTP 异常携带状态码）。
"""

from typing import Any, Optional


class LiouvilleKitError(Exception):
    """工具包异常基类"""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None, **context: Any):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code
        self.context = context

    def to_dict(self) -> dict:
        """序列化为报告字段"""
        return {
            "error": self.__class__.__name__,
            "detail": self.detail,
            "exit_code": self.exit_code,
            **{k: v for k, v in self.context.items()},
        }


class ConfigurationError(LiouvilleKitError):
    """参数组合不可用：尺寸上限、稳定性条件、非梯度矢量场等"""

    exit_code = 2


class ConfigFileError(LiouvilleKitError):
    """运行配置无法解析或校验失败"""

    exit_code = 3


class ContractError(LiouvilleKitError):
    """调用方违反前置条件（钉扎、场形状）"""

    exit_code = 2


class DomainError(LiouvilleKitError):
    """参数落在函数定义域之外"""

    exit_code = 2


class NumericError(LiouvilleKitError):
    """数值失败：奇异分解、积分不收敛"""

    exit_code = 1

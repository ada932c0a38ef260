"""
统一日志配置模块
"""

import logging
import logging.handlers
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

from liouvillekit.config import settings, get_log_dir


class ColoredFormatter(logging.Formatter):
    """带颜色的日志格式化器（用于控制台输出）"""

    COLORS = {
        'DEBUG': '\033[36m',      # 青色
        'INFO': '\033[32m',       # 绿色
        'WARNING': '\033[33m',    # 黄色
        'ERROR': '\033[31m',      # 红色
        'CRITICAL': '\033[35m',   # 紫色
    }
    RESET = '\033[0m'

    def format(self, record):
        log_color = self.COLORS.get(record.levelname, self.RESET)
        record = logging.makeLogRecord(record.__dict__)
        record.levelname = f"{log_color}{record.levelname}{self.RESET}"
        return super().format(record)


class StructuredFormatter(logging.Formatter):
    """结构化日志格式化器（用于文件输出）"""

    EXTRA_FIELDS = (
        'check', 'subcommand', 'seed', 'duration_ms', 'residual',
        'tolerance', 'passed', 'acceptance', 'sweeps', 'n_walkers',
    )

    def format(self, record):
        log_data = {
            'timestamp': datetime.now(timezone.utc).isoformat().replace('+00:00', 'Z'),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
        }

        if record.exc_info:
            log_data['exception'] = self.formatException(record.exc_info)

        for field in self.EXTRA_FIELDS:
            if hasattr(record, field):
                log_data[field] = getattr(record, field)

        parts = [f"{k}={v}" for k, v in log_data.items()]
        return " | ".join(parts)


def _rotating_handler(path: Path, level: int, backup_count: int = 5) -> logging.Handler:
    handler = logging.handlers.RotatingFileHandler(
        filename=str(path),
        maxBytes=20 * 1024 * 1024,  # 20MB
        backupCount=backup_count,
        encoding='utf-8'
    )
    handler.setLevel(level)
    handler.setFormatter(StructuredFormatter())
    return handler


def setup_logging(
    log_dir: Optional[Union[str, Path]] = None,
    log_level: Optional[str] = None,
    enable_file_logging: bool = True,
    enable_console_logging: bool = True
) -> None:
    """
    设置日志系统

    Args:
        log_dir: 日志目录路径，默认由配置决定
        log_level: 日志级别，默认从配置读取
        enable_file_logging: 是否启用文件日志
        enable_console_logging: 是否启用控制台日志
    """
    level = log_level or settings.LOG_LEVEL
    numeric_level = getattr(logging, level.upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    root_logger.handlers.clear()

    # 控制台处理器（stderr，保持 stdout 只输出报告）
    if enable_console_logging:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(numeric_level)
        fmt = '%(asctime)s | %(levelname)s | %(name)s | %(message)s'
        if settings.DEBUG:
            console_formatter = ColoredFormatter(fmt, datefmt='%Y-%m-%d %H:%M:%S')
        else:
            console_formatter = logging.Formatter(fmt, datefmt='%Y-%m-%d %H:%M:%S')
        console_handler.setFormatter(console_formatter)
        root_logger.addHandler(console_handler)

    if enable_file_logging:
        log_path = Path(log_dir) if log_dir is not None else get_log_dir()
        log_path.mkdir(parents=True, exist_ok=True)

        # 业务日志
        root_logger.addHandler(_rotating_handler(log_path / "liouvillekit.log", logging.INFO))

        # 错误日志
        root_logger.addHandler(
            _rotating_handler(log_path / "error.log", logging.ERROR, backup_count=10)
        )

        # 性能日志
        performance_handler = _rotating_handler(log_path / "performance.log", logging.INFO)
        performance_handler.addFilter(lambda record: hasattr(record, 'duration_ms'))
        root_logger.addHandler(performance_handler)

        # 验收检查日志
        checks_handler = _rotating_handler(log_path / "checks.log", logging.INFO, backup_count=10)
        checks_handler.addFilter(lambda record: record.name.startswith('liouvillekit.checks'))
        root_logger.addHandler(checks_handler)

    # 第三方库日志级别
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
    logging.getLogger("numexpr").setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """
    获取日志记录器

    Args:
        name: 日志记录器名称，通常使用 __name__

    Returns:
        日志记录器实例
    """
    return logging.getLogger(name)

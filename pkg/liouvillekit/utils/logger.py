"""
日志工具类
提供便捷的日志记录方法
"""

import functools
import logging
import time
from contextlib import contextmanager
from typing import Callable, Optional

from liouvillekit.config import settings
from liouvillekit.logging_config import get_logger


def log_function_call(log_args: bool = False, log_result: bool = False, log_duration: bool = True):
    """
    函数调用日志装饰器

    Args:
        log_args: 是否记录函数参数
        log_result: 是否记录函数返回值
        log_duration: 是否记录执行时间
    """
    def decorator(func: Callable) -> Callable:
        logger = get_logger(func.__module__)

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            func_name = f"{func.__module__}.{func.__name__}"

            try:
                if log_args:
                    logger.debug(f"Calling {func_name} with args={args}, kwargs={kwargs}")
                else:
                    logger.debug(f"Calling {func_name}")

                result = func(*args, **kwargs)

                if log_duration:
                    duration = (time.perf_counter() - start_time) * 1000
                    logger.debug(f"{func_name} completed in {duration:.2f}ms")

                if log_result:
                    logger.debug(f"{func_name} returned: {result}")

                return result
            except Exception as e:
                duration = (time.perf_counter() - start_time) * 1000
                logger.error(
                    f"{func_name} failed after {duration:.2f}ms: {str(e)}",
                    exc_info=True
                )
                raise

        return wrapper

    return decorator


@contextmanager
def log_performance(operation_name: str, logger: Optional[logging.Logger] = None, **extra_fields):
    """
    性能日志上下文管理器

    Usage:
        with log_performance("dense_lu", check="detk"):
            lu, piv = lu_factor(matrix)
    """
    if logger is None:
        logger = get_logger(__name__)

    start_time = time.perf_counter()
    logger.debug(f"Starting {operation_name}", extra=extra_fields)

    try:
        yield
    except Exception as e:
        duration = (time.perf_counter() - start_time) * 1000
        logger.error(
            f"{operation_name} failed after {duration:.2f}ms: {str(e)}",
            exc_info=True,
            extra={**extra_fields, 'duration_ms': duration}
        )
        raise
    else:
        duration = (time.perf_counter() - start_time) * 1000
        logger.info(
            f"{operation_name} completed in {duration:.2f}ms",
            extra={**extra_fields, 'duration_ms': duration}
        )


def log_check(
    check: str,
    passed: bool,
    residual: Optional[float],
    tolerance: Optional[float],
    duration_ms: float,
    **kwargs
):
    """
    记录验收检查日志

    Args:
        check: 检查名称
        passed: 是否通过
        residual: 残差
        tolerance: 容差
        duration_ms: 耗时（毫秒）
        **kwargs: 其他字段
    """
    logger = get_logger('liouvillekit.checks.result')

    extra = {
        'check': check,
        'passed': passed,
        'duration_ms': duration_ms,
        **kwargs
    }
    if residual is not None:
        extra['residual'] = residual
    if tolerance is not None:
        extra['tolerance'] = tolerance

    status = "PASS" if passed else "FAIL"
    message = f"Check {check} - {status} - residual={residual} tolerance={tolerance} - {duration_ms:.2f}ms"

    if passed:
        logger.info(message, extra=extra)
    else:
        logger.warning(message, extra=extra)

    if duration_ms > settings.SLOW_CHECK_THRESHOLD * 1000:
        logger.warning(
            f"Slow check: {check} took {duration_ms:.2f}ms "
            f"(threshold: {settings.SLOW_CHECK_THRESHOLD * 1000:.0f}ms)",
            extra=extra
        )


def log_mc_run(
    kind: str,
    seed: int,
    sweeps: int,
    acceptance: float,
    width: float,
    duration_ms: float,
    **kwargs
):
    """
    记录 Metropolis 链日志

    Args:
        kind: 作用量类型
        seed: 随机种子
        sweeps: 扫描次数
        acceptance: 接受率
        width: 冻结后的提议宽度
        duration_ms: 耗时（毫秒）
    """
    logger = get_logger('liouvillekit.montecarlo.run')
    logger.info(
        f"Chain {kind} seed={seed}: {sweeps} sweeps, acceptance={acceptance:.3f}, "
        f"width={width:.4f} in {duration_ms:.2f}ms",
        extra={
            'seed': seed,
            'sweeps': sweeps,
            'acceptance': acceptance,
            'duration_ms': duration_ms,
            **kwargs
        }
    )


def log_walk(
    seed: int,
    n_walkers: int,
    nsteps: int,
    duration_ms: float,
    **kwargs
):
    """记录行走者系综日志"""
    logger = get_logger('liouvillekit.walkers.ensemble')
    logger.info(
        f"Walker ensemble seed={seed}: {n_walkers} walkers x {nsteps} steps in {duration_ms:.2f}ms",
        extra={'seed': seed, 'n_walkers': n_walkers, 'duration_ms': duration_ms, **kwargs}
    )

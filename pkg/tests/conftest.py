"""
共享测试夹具
"""

import numpy as np
import pytest

from liouvillekit.schemas.lattice import Couplings, LatticeSpec


@pytest.fixture
def rng():
    """固定种子的随机数生成器"""
    return np.random.default_rng(12345)


@pytest.fixture
def small_spec():
    """4x4 空间格点，无时间轴"""
    return LatticeSpec(nx=4, ny=4, a=1.0)


@pytest.fixture
def spec_8x8():
    return LatticeSpec(nx=8, ny=8, a=1.0)


@pytest.fixture
def dense_spec():
    """稠密线性代数用的 3x3x5 时空格点"""
    return LatticeSpec(nx=3, ny=3, a=1.0, nt=5, dt=0.1)


@pytest.fixture
def couplings():
    return Couplings(g=1.0, b=0.5, tt=0.3, mu=0.2)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 运行时间较长的完整验收测试（-m 'not slow' 跳过）")

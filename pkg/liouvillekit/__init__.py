"""
liouvillekit - Liouville 场论映射的格点验证工具包

把 Liouville 场论到“双分量标量场 + 纵向有质量矢量场”映射的每一步
（扩散核、规范协变、高斯恒等式、行列式平凡性、两个配分函数）
实现为可独立执行、可测试的数值操作。
"""

__version__ = "1.0.0"
__author__ = "liouvillekit Team"

"""
规范耦合扩散方程：显式推进、闭式核、规范协变
"""

from liouvillekit.diffusion.kernels import (
    KernelTable,
    dressed_kernel,
    free_kernel_exact,
    free_kernel_periodic,
    lattice_free_kernel,
)
from liouvillekit.diffusion.solver import (
    canonical_Z,
    check_stability,
    covariant_laplacian,
    evolve,
    gauge_transform,
    kernel_from_source,
)

__all__ = [
    "KernelTable",
    "dressed_kernel",
    "free_kernel_exact",
    "free_kernel_periodic",
    "lattice_free_kernel",
    "canonical_Z",
    "check_stability",
    "covariant_laplacian",
    "evolve",
    "gauge_transform",
    "kernel_from_source",
]

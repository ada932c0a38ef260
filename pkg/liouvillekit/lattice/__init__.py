"""
周期二维格点、场容器与离散微分算子
"""

from liouvillekit.lattice.fields import (
    ScalarField,
    SpaceTimeField,
    VectorField,
    coordinates,
    minimum_image_sq,
    random_smooth,
)
from liouvillekit.lattice.operators import (
    curl,
    divergence,
    grad,
    integrate_gradient,
    laplacian,
    laplacian_matrix,
)

__all__ = [
    "ScalarField",
    "SpaceTimeField",
    "VectorField",
    "coordinates",
    "minimum_image_sq",
    "random_smooth",
    "curl",
    "divergence",
    "grad",
    "integrate_gradient",
    "laplacian",
    "laplacian_matrix",
]

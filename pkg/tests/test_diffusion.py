"""
扩散方程推进、闭式核与规范协变测试
"""

import numpy as np
import pytest

from liouvillekit.diffusion import (
    canonical_Z,
    check_stability,
    covariant_laplacian,
    dressed_kernel,
    evolve,
    free_kernel_exact,
    free_kernel_periodic,
    gauge_transform,
    kernel_from_source,
    lattice_free_kernel,
)
from liouvillekit.diffusion.studies import (
    convergence_study,
    gauge_covariance_residual,
    kernel_table,
    mass_history,
)
from liouvillekit.exceptions import ConfigurationError, DomainError
from liouvillekit.lattice import ScalarField, SpaceTimeField, VectorField, grad, laplacian, random_smooth
from liouvillekit.schemas.lattice import Couplings, LatticeSpec


class TestFreeKernel:
    """闭式自由核测试"""

    def test_peak_value(self):
        assert free_kernel_exact(1.0, (0.0, 0.0), (0.0, 0.0), 1.0) == pytest.approx(1.0 / (4 * np.pi))

    def test_rejects_non_positive_time(self):
        with pytest.raises(DomainError):
            free_kernel_exact(0.0, (0.0, 0.0), (0.0, 0.0), 1.0)
        with pytest.raises(DomainError):
            free_kernel_periodic(-1.0, LatticeSpec(nx=4, ny=4), (0, 0), 1.0)

    def test_periodic_kernel_normalized(self):
        spec = LatticeSpec(nx=32, ny=32, a=0.25)
        kernel = free_kernel_periodic(0.5, spec, (16, 16), 1.0)
        assert kernel.sum() * spec.a ** 2 == pytest.approx(1.0, rel=1e-6)

    def test_periodic_kernel_symmetric_about_source(self):
        spec = LatticeSpec(nx=16, ny=16, a=0.5)
        kernel = free_kernel_periodic(0.3, spec, (8, 8), 1.0)
        np.testing.assert_allclose(kernel[8 + 3, 8], kernel[8 - 3, 8], rtol=1e-12)
        np.testing.assert_allclose(kernel[8, 8 + 2], kernel[8 + 2, 8], rtol=1e-12)


class TestDressedKernel:
    """修饰双点函数"""

    def test_zero_field_is_free(self, small_spec):
        phi = ScalarField.zeros(small_spec)
        value = dressed_kernel(0.5, (1, 0), (0, 0), phi, Couplings(b=0.3))
        assert value == pytest.approx(free_kernel_exact(0.5, (1.0, 0.0), (0.0, 0.0), 1.0))

    def test_constant_shift_unchanged(self, small_spec, rng):
        phi = ScalarField(small_spec, rng.normal(size=small_spec.shape))
        c = Couplings(b=0.3)
        base = dressed_kernel(0.5, (2, 1), (0, 0), phi, c)
        assert dressed_kernel(0.5, (2, 1), (0, 0), phi.shifted(1.7), c) == pytest.approx(base, rel=1e-12)

    def test_retarded(self, small_spec):
        phi = ScalarField.zeros(small_spec)
        assert dressed_kernel(0.0, (0, 0), (0, 0), phi, Couplings()) == 0.0
        assert dressed_kernel(-1.0, (0, 0), (0, 0), phi, Couplings()) == 0.0

    def test_lattice_variant_matches_similarity_evolve(self, rng):
        spec = LatticeSpec(nx=4, ny=4, a=1.0, nt=6, dt=0.1)
        c = Couplings(g=1.0, b=0.3)
        phi = ScalarField(spec, rng.normal(size=spec.shape))
        gamma = ScalarField(spec, -phi.values)
        psi = kernel_from_source(spec, c, (0, 0), A=grad(gamma), mode="similarity").values[5]
        for x in [(0, 0), (1, 2), (3, 3)]:
            value = dressed_kernel(0.5, x, (0, 0), phi, c, free="lattice")
            assert value == pytest.approx(psi[x], rel=1e-10)


class TestEvolve:
    """显式推进测试"""

    def test_stability_bound(self):
        spec = LatticeSpec(nx=4, ny=4, a=1.0, nt=2, dt=0.25)
        assert check_stability(spec, 1.0) == pytest.approx(1.0)
        with pytest.raises(ConfigurationError):
            check_stability(spec.with_time(2, 0.26), 1.0)

    def test_unstable_evolve_raises(self):
        spec = LatticeSpec(nx=4, ny=4, a=1.0, nt=3, dt=0.5)
        with pytest.raises(ConfigurationError):
            kernel_from_source(spec, Couplings(), (0, 0))

    def test_first_slice_is_source(self):
        spec = LatticeSpec(nx=4, ny=4, a=0.5, nt=3, dt=0.05)
        psi = kernel_from_source(spec, Couplings(), (1, 2))
        assert psi.values[0, 1, 2] == pytest.approx(1.0 / spec.a ** 2)
        assert psi.values[0].sum() == pytest.approx(1.0 / spec.a ** 2)

    def test_mass_conserved(self):
        spec = LatticeSpec(nx=6, ny=6, a=1.0, nt=20, dt=0.2)
        psi = kernel_from_source(spec, Couplings(g=1.0), (0, 0))
        np.testing.assert_allclose(mass_history(psi), 1.0, rtol=1e-12)
        assert canonical_Z(psi.slice(19)) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("dt", [0.0625, 0.02])
    def test_free_evolution_stays_positive(self, rng, dt):
        spec = LatticeSpec(nx=6, ny=6, a=0.5, nt=30, dt=dt)
        source = SpaceTimeField(spec, rng.uniform(0.0, 1.0, size=spec.spacetime_shape))
        psi = evolve(source, None, Couplings(g=1.0), spec)
        assert np.all(psi.values >= 0.0)
        kernel = kernel_from_source(spec, Couplings(g=1.0), (3, 3))
        assert np.all(kernel.values >= 0.0)

    def test_retarded(self):
        spec = LatticeSpec(nx=4, ny=4, a=1.0, nt=5, dt=0.1)
        psi = kernel_from_source(spec, Couplings(), (0, 0), source_slice=2)
        assert np.all(psi.values[:2] == 0.0)

    def test_lattice_free_kernel_matches_evolve(self):
        spec = LatticeSpec(nx=5, ny=5, a=1.0, nt=4, dt=0.2)
        psi = kernel_from_source(spec, Couplings(), (2, 2))
        np.testing.assert_allclose(lattice_free_kernel(0.6, spec, (2, 2), 1.0), psi.values[3], rtol=1e-12)

    def test_source_on_other_lattice(self):
        spec = LatticeSpec(nx=4, ny=4, nt=2, dt=0.1)
        source = SpaceTimeField.point_source(spec, (0, 0))
        with pytest.raises(ConfigurationError):
            evolve(source, None, Couplings(), spec.with_time(3, 0.1))

    def test_similarity_requires_gradient(self):
        spec = LatticeSpec(nx=4, ny=4, nt=3, dt=0.1)
        source = SpaceTimeField.point_source(spec, (0, 0))
        values = np.zeros((2, 4, 4))
        values[0, 1, 1] = 1.0
        with pytest.raises(ConfigurationError):
            evolve(source, VectorField(spec, values), Couplings(b=0.5), spec, mode="similarity")


class TestCovariantLaplacian:
    """协变拉普拉斯的两种离散"""

    def test_reduces_to_laplacian_without_field(self, spec_8x8, rng):
        f = ScalarField(spec_8x8, rng.normal(size=spec_8x8.shape))
        for mode in ("naive", "similarity"):
            np.testing.assert_array_equal(covariant_laplacian(f, None, 0.7, mode).values, laplacian(f).values)

    def test_modes_agree_to_leading_order(self):
        spec = LatticeSpec(nx=64, ny=64, a=1.0 / 16)
        gamma = ScalarField.from_function(spec, lambda x, y: 0.3 * np.sin(2 * np.pi * x / 4.0))
        f = ScalarField.from_function(spec, lambda x, y: np.cos(2 * np.pi * y / 4.0) + 2.0)
        naive = covariant_laplacian(f, grad(gamma), 0.5, "naive").values
        similar = covariant_laplacian(f, grad(gamma), 0.5, "similarity").values
        assert np.max(np.abs(naive - similar)) < 0.05 * np.max(np.abs(similar))

    def test_naive_mode_is_not_exactly_covariant(self, spec_8x8, rng):
        gamma = random_smooth(spec_8x8, rng, 0.5)
        spec = spec_8x8.with_time(11, 0.2)
        c = Couplings(b=0.8)
        source = SpaceTimeField.point_source(spec, (4, 4))
        naive = evolve(source, grad(gamma), c, spec, mode="naive")
        transformed = gauge_transform(evolve(source, None, c, spec), gamma, c.b, (4, 4))
        assert np.max(np.abs(naive.values - transformed.values)) > 1e-8


class TestGaugeCovariance:
    """规范协变的精确性"""

    def test_similarity_mode_exact(self, spec_8x8, rng):
        spec = spec_8x8.with_time(21, 0.2)
        c = Couplings(g=1.0, b=0.5)
        for _ in range(5):
            gamma = ScalarField(spec_8x8, rng.normal(size=spec_8x8.shape))
            assert gauge_covariance_residual(spec, c, (3, 4), gamma) <= 1e-12

    def test_pure_gauge_constant_shift(self, spec_8x8):
        spec = spec_8x8.with_time(4, 0.1)
        c = Couplings(b=1.0)
        gamma = ScalarField.constant(spec_8x8, 2.0)
        psi = kernel_from_source(spec, c, (0, 0), A=grad(gamma), mode="similarity")
        free = kernel_from_source(spec, c, (0, 0))
        np.testing.assert_allclose(psi.values, free.values, atol=1e-14)


class TestStudies:
    """数值研究"""

    def test_kernel_table_frame(self):
        spec = LatticeSpec(nx=4, ny=4, a=0.5, nt=3, dt=0.05)
        table = kernel_table(spec, Couplings(), (1, 1))
        frame = table.to_frame(include_exact=True)
        assert list(frame.columns) == ["t", "x1", "x2", "value", "exact"]
        assert len(frame) == 3 * 16
        np.testing.assert_allclose(table.masses(), 1.0, rtol=1e-12)

    @pytest.mark.slow
    def test_convergence_ratio(self):
        study = convergence_study(t=0.5, g=1.0, levels=3)
        ratios = study["ratio"].dropna()
        assert len(ratios) == 2
        assert ratios.min() >= 3.5

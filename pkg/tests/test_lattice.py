"""
格点几何、场容器与离散算子测试
"""

import numpy as np
import pytest
from pydantic import ValidationError

from liouvillekit.exceptions import ConfigurationError, ContractError
from liouvillekit.lattice import (
    ScalarField,
    SpaceTimeField,
    VectorField,
    curl,
    divergence,
    grad,
    integrate_gradient,
    laplacian,
    laplacian_matrix,
    minimum_image_sq,
    random_smooth,
)
from liouvillekit.schemas.lattice import Couplings, LatticeSpec


class TestLatticeSpec:
    """格点描述测试"""

    def test_rejects_tiny_lattice(self):
        with pytest.raises(ValidationError):
            LatticeSpec(nx=1, ny=4)

    def test_rejects_non_positive_spacing(self):
        with pytest.raises(ValidationError):
            LatticeSpec(nx=4, ny=4, a=0.0)

    def test_index_round_trip_with_wrapping(self, small_spec):
        for index in range(small_spec.n_sites):
            assert small_spec.index(small_spec.site(index)) == index
        assert small_spec.index((-1, 0)) == small_spec.index((3, 0))

    def test_with_time_keeps_space(self, small_spec):
        timeline = small_spec.with_time(6, 0.05)
        assert timeline.shape == small_spec.shape
        assert timeline.spacetime_shape == (6, 4, 4)

    def test_with_time_validates(self, small_spec):
        with pytest.raises(ValidationError):
            small_spec.with_time(-1, 0.1)
        with pytest.raises(ValidationError):
            small_spec.with_time(3, 0.0)

    def test_couplings_validation(self):
        with pytest.raises(ValidationError):
            Couplings(g=0.0)
        with pytest.raises(ValidationError):
            Couplings(alpha=-1.0)
        assert Couplings(g=2.0).interaction_scale == pytest.approx(1.0 / (16.0 * np.pi))


class TestFields:
    """场容器测试"""

    def test_shape_mismatch_is_contract_error(self, small_spec):
        with pytest.raises(ContractError):
            ScalarField(small_spec, np.zeros((3, 4)))

    def test_non_finite_rejected(self, small_spec):
        values = np.zeros(small_spec.shape)
        values[0, 0] = np.nan
        with pytest.raises(ContractError):
            ScalarField(small_spec, values)

    def test_values_are_read_only(self, small_spec):
        field = ScalarField.zeros(small_spec)
        with pytest.raises(ValueError):
            field.values[0, 0] = 1.0

    def test_pinned_vanishes_at_site(self, small_spec, rng):
        field = ScalarField(small_spec, rng.normal(size=small_spec.shape))
        assert field.pinned((1, 2)).at((1, 2)) == 0.0

    def test_point_source_normalization(self):
        spec = LatticeSpec(nx=4, ny=4, a=0.5, nt=3, dt=0.1)
        source = SpaceTimeField.point_source(spec, (1, 1), slice_index=2)
        assert source.values.sum() * spec.a ** 2 * spec.dt == pytest.approx(1.0)
        assert source.values[2, 1, 1] > 0.0

    def test_point_source_outside_axis(self):
        spec = LatticeSpec(nx=4, ny=4, nt=2)
        with pytest.raises(ContractError):
            SpaceTimeField.point_source(spec, (0, 0), slice_index=2)

    def test_minimum_image_distance(self, spec_8x8):
        d2 = minimum_image_sq(spec_8x8, (0, 0))
        assert d2[0, 0] == 0.0
        assert d2[7, 0] == 1.0
        assert d2[4, 4] == 32.0

    def test_random_smooth_is_deterministic(self, spec_8x8):
        first = random_smooth(spec_8x8, np.random.default_rng(3), 0.3)
        second = random_smooth(spec_8x8, np.random.default_rng(3), 0.3)
        np.testing.assert_array_equal(first.values, second.values)


class TestOperators:
    """离散微分算子测试"""

    def test_laplacian_is_divergence_of_gradient(self, spec_8x8, rng):
        f = ScalarField(spec_8x8, rng.normal(size=spec_8x8.shape))
        np.testing.assert_array_equal(laplacian(f).values, divergence(grad(f)).values)

    def test_laplacian_of_constant_vanishes(self, spec_8x8):
        assert np.all(laplacian(ScalarField.constant(spec_8x8, 3.0)).values == 0.0)

    def test_gradient_is_curl_free(self, spec_8x8, rng):
        f = ScalarField(spec_8x8, rng.normal(size=spec_8x8.shape))
        assert np.max(np.abs(curl(grad(f)).values)) < 1e-12

    def test_divergence_is_negative_adjoint_of_gradient(self, spec_8x8, rng):
        f = ScalarField(spec_8x8, rng.normal(size=spec_8x8.shape))
        v = VectorField(spec_8x8, rng.normal(size=(2,) + spec_8x8.shape))
        lhs = np.sum(grad(f).values * v.values)
        rhs = -np.sum(f.values * divergence(v).values)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("k1,k2", [(1, 0), (1, 2), (3, 1)])
    def test_laplacian_fourier_eigenvalue(self, k1, k2):
        spec = LatticeSpec(nx=8, ny=6, a=0.5)
        i, j = np.meshgrid(np.arange(spec.nx), np.arange(spec.ny), indexing="ij")
        wave = ScalarField(spec, np.cos(2 * np.pi * (k1 * i / spec.nx + k2 * j / spec.ny)))
        eigenvalue = -4.0 / spec.a ** 2 * (np.sin(np.pi * k1 / spec.nx) ** 2 + np.sin(np.pi * k2 / spec.ny) ** 2)
        np.testing.assert_allclose(laplacian(wave).values, eigenvalue * wave.values, atol=1e-12)

    def test_unit_link_along_x1(self):
        spec = LatticeSpec(nx=6, ny=6, a=0.5)
        A = VectorField.unit_link(spec, (2, 0), 0)
        expected_curl = np.zeros(spec.shape)
        expected_curl[2, 0] = 1.0 / spec.a
        expected_curl[2, 5] = -1.0 / spec.a
        np.testing.assert_array_equal(curl(A).values, expected_curl)
        expected_div = np.zeros(spec.shape)
        expected_div[2, 0] = 1.0 / spec.a
        expected_div[3, 0] = -1.0 / spec.a
        np.testing.assert_array_equal(divergence(A).values, expected_div)

    def test_unit_link_along_x2(self):
        spec = LatticeSpec(nx=6, ny=6, a=0.5)
        A = VectorField.unit_link(spec, (0, 3), 1)
        expected_curl = np.zeros(spec.shape)
        expected_curl[5, 3] = 1.0 / spec.a
        expected_curl[0, 3] = -1.0 / spec.a
        np.testing.assert_array_equal(curl(A).values, expected_curl)
        expected_div = np.zeros(spec.shape)
        expected_div[0, 3] = 1.0 / spec.a
        expected_div[0, 4] = -1.0 / spec.a
        np.testing.assert_array_equal(divergence(A).values, expected_div)

    def test_operators_are_linear(self, spec_8x8, rng):
        u = VectorField(spec_8x8, rng.normal(size=(2,) + spec_8x8.shape))
        v = VectorField(spec_8x8, rng.normal(size=(2,) + spec_8x8.shape))
        combined = VectorField(spec_8x8, 2.5 * u.values - 0.7 * v.values)
        np.testing.assert_allclose(curl(combined).values, 2.5 * curl(u).values - 0.7 * curl(v).values, atol=1e-12)
        np.testing.assert_allclose(
            divergence(combined).values, 2.5 * divergence(u).values - 0.7 * divergence(v).values, atol=1e-12
        )

    def test_laplacian_matrix_matches_stencil(self, rng):
        spec = LatticeSpec(nx=4, ny=3, a=0.5)
        L = laplacian_matrix(spec)
        f = ScalarField(spec, rng.normal(size=spec.shape))
        np.testing.assert_allclose(L @ f.flat(), laplacian(f).flat(), rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(L, L.T, atol=1e-12)
        np.testing.assert_allclose(L.sum(axis=1), 0.0, atol=1e-12)

    def test_integrate_gradient_recovers_potential(self, spec_8x8, rng):
        gamma = ScalarField(spec_8x8, rng.normal(size=spec_8x8.shape))
        recovered = integrate_gradient(grad(gamma))
        np.testing.assert_allclose(recovered.values, gamma.pinned((0, 0)).values, atol=1e-12)

    def test_integrate_gradient_rejects_circulation(self, spec_8x8):
        with pytest.raises(ConfigurationError):
            integrate_gradient(VectorField.unit_link(spec_8x8, (2, 2), 0))

    def test_integrate_gradient_rejects_winding(self, spec_8x8):
        values = np.zeros((2,) + spec_8x8.shape)
        values[0] = 1.0
        with pytest.raises(ConfigurationError):
            integrate_gradient(VectorField(spec_8x8, values))

"""
场序列化、产物写入与统计工具测试
"""

import json

import numpy as np
import pandas as pd
import pytest

from liouvillekit.exceptions import ContractError
from liouvillekit.lattice import ScalarField, SpaceTimeField, VectorField
from liouvillekit.schemas.lattice import LatticeSpec
from liouvillekit.storage.artifacts import ArtifactKeyManager, ArtifactStore, digest
from liouvillekit.storage.field_io import from_csv, from_json, save_field, to_csv, to_json
from liouvillekit.utils.statistics import (
    autocovariance,
    batch_means,
    integrated_autocorrelation_time,
)


class TestFieldIO:
    """场序列化测试"""

    def test_csv_is_bit_exact(self, rng):
        spec = LatticeSpec(nx=3, ny=4, nt=2, a=0.25, dt=0.01)
        field = SpaceTimeField(spec, rng.normal(size=spec.spacetime_shape) * 1e-7)
        restored = from_csv(to_csv(field), "spacetime", a=0.25, dt=0.01)
        np.testing.assert_array_equal(restored.values, field.values)
        assert restored.spec == field.spec

    def test_json_keeps_spec(self, rng):
        spec = LatticeSpec(nx=3, ny=3, a=0.5)
        field = VectorField(spec, rng.normal(size=(2, 3, 3)))
        restored = from_json(to_json(field))
        assert isinstance(restored, VectorField)
        assert restored.spec.a == 0.5
        np.testing.assert_array_equal(restored.values, field.values)

    def test_csv_size_mismatch(self):
        text = "3,3,0\n1\n2\n"
        with pytest.raises(ContractError):
            from_csv(text, "scalar")

    def test_csv_header_malformed(self):
        with pytest.raises(ContractError):
            from_csv("three,3,0\n1\n", "scalar")

    def test_save_field_by_suffix(self, tmp_path, small_spec):
        field = ScalarField.constant(small_spec, 1.5)
        path = save_field(field, tmp_path / "phi.json")
        assert json.loads(path.read_text())["kind"] == "scalar"


class TestArtifactStore:
    """产物写入测试"""

    def test_tables_are_deterministic(self, tmp_path):
        frame = pd.DataFrame({"x": [0.1, 1.0 / 3.0], "y": [1, 2]})
        first = ArtifactStore(tmp_path / "a").write_table(frame, ArtifactKeyManager.KERNEL_TABLE)
        second = ArtifactStore(tmp_path / "b").write_table(frame, ArtifactKeyManager.KERNEL_TABLE)
        assert first.read_bytes() == second.read_bytes()
        assert first.name == "kernel.csv"

    def test_manifest_contains_digest(self, tmp_path):
        store = ArtifactStore(tmp_path)
        path = store.write_manifest("lambda", {"alpha": 2.0}, {"status": "passed"})
        manifest = json.loads(path.read_text())
        assert manifest["config_digest"] == digest({"alpha": 2.0})
        assert manifest["status"] == "passed"

    def test_digest_is_order_independent(self):
        assert digest({"a": 1, "b": 2}) == digest({"b": 2, "a": 1})

    def test_numpy_values_serialize(self, tmp_path):
        store = ArtifactStore(tmp_path)
        path = store.write_json({"value": np.float64(0.5), "array": np.arange(3)}, "extra.json")
        assert json.loads(path.read_text()) == {"array": [0, 1, 2], "value": 0.5}


class TestStatistics:
    """链统计测试"""

    def test_autocovariance_lag_zero_is_variance(self, rng):
        chain = rng.normal(size=1000)
        assert autocovariance(chain)[0] == pytest.approx(chain.var())

    def test_tau_int_of_white_noise(self, rng):
        tau = integrated_autocorrelation_time(rng.normal(size=20000))
        assert 0.4 < tau < 0.7

    def test_tau_int_of_ar1_chain(self, rng):
        rho = 0.8
        chain = np.zeros(50000)
        noise = rng.normal(size=chain.size)
        for k in range(1, chain.size):
            chain[k] = rho * chain[k - 1] + noise[k]
        expected = 0.5 * (1 + rho) / (1 - rho)
        assert integrated_autocorrelation_time(chain) == pytest.approx(expected, rel=0.2)

    def test_constant_chain(self):
        assert integrated_autocorrelation_time(np.ones(100)) == 0.5

    def test_batch_means_vectorized(self, rng):
        samples = rng.normal(loc=[1.0, -2.0], size=(4000, 2))
        mean, stderr = batch_means(samples, 20)
        assert mean.shape == (2,)
        np.testing.assert_allclose(mean, [1.0, -2.0], atol=5 * stderr.max())
        assert np.all(stderr > 0)

    def test_batch_means_needs_samples(self):
        with pytest.raises(ContractError):
            batch_means(np.ones(10), 20)

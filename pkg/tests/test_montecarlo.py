"""
Metropolis 采样、作用量与确定性参照测试
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from liouvillekit.exceptions import ConfigurationError, ContractError
from liouvillekit.lattice import ScalarField
from liouvillekit.montecarlo import (
    action_difference_bound,
    action_value,
    compare_T_limit,
    default_pairs,
    detailed_balance_residual,
    exact_diff_sq,
    interaction_value,
    measure_diff_correlators,
    merge_samples,
    metropolis_run,
    pinned_propagator,
    quadrature_expectation,
    run_chains,
    triviality_check,
    window,
)
from liouvillekit.montecarlo.action import interaction_volume
from liouvillekit.montecarlo.metropolis import _retune
from liouvillekit.montecarlo.observables import OBSERVABLE_COLUMNS, pair_label
from liouvillekit.schemas.lattice import Couplings, LatticeSpec
from liouvillekit.schemas.montecarlo import ActionSpec, McConfig

FAST = McConfig(sweeps=1200, thermalization=200, seed=4)


@pytest.fixture
def liouville_4x4():
    return ActionSpec(kind="liouville", couplings=Couplings(g=1.0, b=0.5), x0=(0, 0),
                      lattice=LatticeSpec(nx=4, ny=4))


class TestSchemas:
    """作用量与链配置校验"""

    def test_pinned_site_inside_lattice(self):
        with pytest.raises(ValidationError):
            ActionSpec(x0=(4, 0), lattice=LatticeSpec(nx=4, ny=4))

    def test_sweeps_exceed_thermalization(self):
        with pytest.raises(ValidationError):
            McConfig(sweeps=100, thermalization=100)

    def test_minimum_batches(self):
        with pytest.raises(ValidationError):
            McConfig(batches=10)
        with pytest.raises(ValidationError):
            McConfig(sweeps=130, thermalization=100, stride=2)

    def test_measurement_count(self):
        assert McConfig(sweeps=1000, thermalization=100, stride=3).n_measurements == 300

    def test_with_couplings_keeps_others(self, liouville_4x4):
        updated = liouville_4x4.with_couplings(tt=10.0)
        assert updated.couplings.tt == 10.0
        assert updated.couplings.b == 0.5
        assert liouville_4x4.couplings.tt == 1.0


class TestAction:
    """作用量"""

    def test_windows(self, liouville_4x4):
        np.testing.assert_array_equal(window(liouville_4x4), 1.0)
        assert np.all(window(liouville_4x4.with_kind("free-gaussian")) == 0.0)
        mapped = window(liouville_4x4.with_kind("mapped"))
        assert mapped[0, 0] == 1.0
        assert np.all(mapped <= 1.0)

    def test_pinning_enforced(self, liouville_4x4):
        phi = ScalarField.constant(liouville_4x4.lattice, 0.1)
        with pytest.raises(ContractError):
            action_value(phi, liouville_4x4)
        zero = ScalarField.zeros(liouville_4x4.lattice)
        assert action_value(zero, liouville_4x4) == pytest.approx(interaction_volume(liouville_4x4))

    def test_zero_field_action(self, liouville_4x4):
        phi = ScalarField.zeros(liouville_4x4.lattice)
        assert interaction_value(phi, liouville_4x4) == pytest.approx(16.0 / (4.0 * math.pi))

    def test_bound_decreases_with_T(self):
        base = ActionSpec(kind="mapped", couplings=Couplings(g=1.0, b=0.5), lattice=LatticeSpec(nx=8, ny=8, a=0.5))
        bounds = [action_difference_bound(base.with_couplings(tt=t)) for t in (1.0, 10.0, 100.0, 1000.0)]
        assert all(later < earlier for earlier, later in zip(bounds, bounds[1:]))
        assert bounds[-1] / interaction_volume(base) < 1e-3

    def test_bound_ratio_scales_with_spacing(self):
        ratios = {}
        for a in (1.0, 0.5):
            base = ActionSpec(kind="mapped", couplings=Couplings(g=1.0, b=0.5, tt=1000.0),
                              lattice=LatticeSpec(nx=8, ny=8, a=a))
            ratios[a] = action_difference_bound(base) / interaction_volume(base)
        # 8x8 周期格点上 <r^2> = 11 a^2，比值约 <r^2>/(4gT)
        assert ratios[1.0] == pytest.approx(11.0 / 4000.0, rel=0.01)
        assert ratios[1.0] > 1e-3 > ratios[0.5]


class TestMetropolis:
    """单点 Metropolis"""

    def test_pinned_site_stays_zero(self, liouville_4x4):
        run = metropolis_run(liouville_4x4, FAST)
        assert np.all(run.samples[:, 0, 0] == 0.0)
        assert run.n_samples == FAST.n_measurements
        assert 0.0 < run.acceptance < 1.0

    def test_deterministic(self, liouville_4x4):
        first = metropolis_run(liouville_4x4, FAST)
        second = metropolis_run(liouville_4x4, FAST)
        np.testing.assert_array_equal(first.samples, second.samples)
        assert first.width == second.width

    def test_seed_changes_chain(self, liouville_4x4):
        first = metropolis_run(liouville_4x4, FAST)
        other = metropolis_run(liouville_4x4, FAST.model_copy(update={"seed": 5}))
        assert not np.array_equal(first.samples, other.samples)

    def test_retune(self):
        assert _retune(1.0, 0.9) == pytest.approx(1.1)
        assert _retune(1.0, 0.1) == pytest.approx(1.0 / 1.1)
        assert _retune(1.0, 0.5) == 1.0

    def test_untuned_width_is_kept(self, liouville_4x4):
        mc = FAST.model_copy(update={"tune": False, "width": 0.7})
        assert metropolis_run(liouville_4x4, mc).width == 0.7

    def test_run_chains_order(self, liouville_4x4):
        runs = run_chains(liouville_4x4, FAST, 3, max_workers=3)
        again = run_chains(liouville_4x4, FAST, 3, max_workers=1)
        for a, b in zip(runs, again):
            np.testing.assert_array_equal(a.samples, b.samples)
        assert merge_samples(runs).shape[0] == 3 * FAST.n_measurements

    def test_detailed_balance(self, liouville_4x4, rng):
        lattice = liouville_4x4.lattice
        state = ScalarField(lattice, rng.normal(size=lattice.shape)).pinned((0, 0))
        for value in (-1.0, 0.3, 2.0):
            assert detailed_balance_residual(state, (2, 1), value, liouville_4x4) <= 1e-12
        with pytest.raises(ContractError):
            detailed_balance_residual(state, (0, 0), 0.5, liouville_4x4)

    def test_free_field_matches_propagator(self):
        spec = ActionSpec(kind="free-gaussian", lattice=LatticeSpec(nx=4, ny=4))
        run = metropolis_run(spec, McConfig(sweeps=8000, thermalization=500, seed=9))
        cov = pinned_propagator(spec.lattice, spec.x0)
        pairs = default_pairs(spec.lattice, spec.x0, 3)
        table = measure_diff_correlators(run.samples, pairs, 0.0, spec.lattice, n_batches=20)
        for pair in pairs:
            row = table[(table["observable"] == "diff_sq") & (table["pair"] == pair_label(pair))].iloc[0]
            exact = exact_diff_sq(cov, spec.lattice, *pair)
            assert abs(row["mean"] - exact) <= 4.0 * row["stderr"]


class TestOracles:
    """确定性参照"""

    def test_propagator_pinned_row(self):
        lattice = LatticeSpec(nx=4, ny=4)
        cov = pinned_propagator(lattice, (1, 2))
        index = lattice.index((1, 2))
        assert np.all(cov[index] == 0.0)
        np.testing.assert_allclose(cov, cov.T, atol=1e-12)

    def test_quadrature_reproduces_gaussian(self):
        spec = ActionSpec(kind="free-gaussian", lattice=LatticeSpec(nx=2, ny=2))
        cov = pinned_propagator(spec.lattice, spec.x0)
        value = quadrature_expectation(spec, (1, 1), observable="sq")
        assert value == pytest.approx(exact_diff_sq(cov, spec.lattice, (1, 1), (0, 0)), rel=1e-10)

    def test_quadrature_free_exponential(self):
        spec = ActionSpec(kind="free-gaussian", couplings=Couplings(b=0.5), lattice=LatticeSpec(nx=2, ny=2))
        cov = pinned_propagator(spec.lattice, spec.x0)
        variance = cov[spec.lattice.index((1, 0)), spec.lattice.index((1, 0))]
        value = quadrature_expectation(spec, (1, 0), observable="exp")
        assert value == pytest.approx(math.exp(0.125 * variance), rel=1e-10)

    def test_quadrature_dimension_guard(self):
        spec = ActionSpec(lattice=LatticeSpec(nx=3, ny=3))
        with pytest.raises(ConfigurationError):
            quadrature_expectation(spec, (1, 1))

    def test_quadrature_matches_sampler(self):
        spec = ActionSpec(kind="liouville", couplings=Couplings(g=1.0, b=0.5), lattice=LatticeSpec(nx=2, ny=2))
        exact = quadrature_expectation(spec, (1, 1))
        run = metropolis_run(spec, McConfig(sweeps=20000, thermalization=1000, seed=1))
        table = measure_diff_correlators(run.samples, [((1, 1), (0, 0))], 0.5, spec.lattice)
        row = table[table["observable"] == "exp_diff"].iloc[0]
        assert abs(row["mean"] - exact) <= 4.0 * row["stderr"]


class TestObservables:
    """场差关联函数"""

    def test_table_layout(self, rng):
        lattice = LatticeSpec(nx=4, ny=4)
        samples = rng.normal(size=(200, 4, 4))
        pairs = default_pairs(lattice, (0, 0), 2)
        table = measure_diff_correlators(samples, pairs, 0.3, lattice)
        assert list(table.columns) == OBSERVABLE_COLUMNS
        assert len(table) == 4
        assert pair_label(pairs[0]) == "1,0|0,0"

    def test_default_pairs_wrap(self):
        lattice = LatticeSpec(nx=4, ny=4)
        pairs = default_pairs(lattice, (3, 3), 5)
        assert all(0 <= p[0][0] < 4 and 0 <= p[0][1] < 4 for p in pairs)


class TestStudies:
    """T 极限与平凡性"""

    def test_triviality(self):
        base = ActionSpec(kind="liouville", couplings=Couplings(b=0.0), lattice=LatticeSpec(nx=4, ny=4))
        report = triviality_check(base, FAST)
        assert report.chains_identical
        assert report.slope == pytest.approx(-2.0, abs=1e-9)
        assert report.passed

    def test_triviality_matches_exact_interaction(self):
        base = ActionSpec(kind="liouville", couplings=Couplings(b=0.0), lattice=LatticeSpec(nx=4, ny=4, a=0.5))
        report = triviality_check(base, FAST, g_values=(1.0, 2.0))
        assert report.expected[0] == pytest.approx(4.0 / (4.0 * math.pi))
        assert report.expected[1] == pytest.approx(report.expected[0] / 4.0)
        assert report.max_rel_error <= 1e-12
        assert report.to_dict()["max_rel_error"] == report.max_rel_error

    def test_triviality_needs_zero_b(self, liouville_4x4):
        with pytest.raises(ContractError):
            triviality_check(liouville_4x4, FAST)

    def test_t_values_ascending(self, liouville_4x4):
        with pytest.raises(ContractError):
            compare_T_limit(liouville_4x4, [10.0, 1.0], FAST)

    def test_compare_report_shape(self, liouville_4x4):
        base = liouville_4x4.model_copy(update={"lattice": LatticeSpec(nx=4, ny=4, a=0.5)})
        report = compare_T_limit(base, [1.0, 1000.0], FAST, default_pairs(base.lattice, base.x0, 2))
        assert report.bound_monotone
        assert set(report.table["tt"]) == {1.0, 1000.0}
        assert {"deviation", "sigma", "mean_ref"} <= set(report.table.columns)
        assert "bound_ratios" in report.to_dict()

    @pytest.mark.slow
    def test_T_limit_full(self):
        base = ActionSpec(kind="mapped", couplings=Couplings(g=1.0, b=0.5), lattice=LatticeSpec(nx=8, ny=8, a=0.5))
        report = compare_T_limit(base, mc=McConfig(sweeps=30000, thermalization=3000, seed=2))
        assert report.passed

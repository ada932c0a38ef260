"""
Monte Carlo 模块的验收检查：b = 0 精确性、T 极限、平凡性极限
"""

import numpy as np

from liouvillekit.checks.base_check import BaseCheck, CheckOutcome
from liouvillekit.montecarlo.metropolis import metropolis_run
from liouvillekit.montecarlo.observables import default_pairs, measure_diff_correlators
from liouvillekit.montecarlo.oracles import exact_diff_sq, pinned_propagator
from liouvillekit.montecarlo.studies import SLOPE_TOLERANCE, compare_T_limit, triviality_check
from liouvillekit.schemas.lattice import Couplings, LatticeSpec
from liouvillekit.schemas.montecarlo import ActionSpec, McConfig
from liouvillekit.schemas.run_config import RunConfig


class SamplerExactnessCheck(BaseCheck):
    """b = 0 时 <(phi(x) - phi(x0))^2> 与钉扎传播子一致"""

    budget_s = 120.0

    def __init__(self):
        super().__init__("sampler_exactness")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        lattice = LatticeSpec(nx=8, ny=8, a=1.0)
        x0 = (0, 0)
        action = ActionSpec(kind="liouville", couplings=Couplings(g=1.0, b=0.0), x0=x0, lattice=lattice)
        mc = McConfig(sweeps=40_000, thermalization=4_000, stride=2, seed=self.seed(config))
        run = metropolis_run(action, mc)

        pairs = default_pairs(lattice, x0)
        table = measure_diff_correlators(run.samples, pairs, 0.0, lattice, n_batches=mc.batches)
        table = table[table["observable"] == "diff_sq"].reset_index(drop=True)
        cov = pinned_propagator(lattice, x0)
        exact = np.array([exact_diff_sq(cov, lattice, x, y) for x, y in pairs])
        z_scores = np.abs(table["mean"].to_numpy() - exact) / table["stderr"].to_numpy()
        worst = float(z_scores.max())
        return CheckOutcome(
            passed=worst <= 3.0,
            residual=worst,
            tolerance=3.0,
            details={
                "pairs": table["pair"].tolist(),
                "measured": table["mean"].tolist(),
                "exact": exact.tolist(),
                "tau_int": table["tau_int"].tolist(),
                "acceptance": run.acceptance,
            },
        )


class TLimitCheck(BaseCheck):
    """大 T 时映射理论回到 Liouville 理论"""

    budget_s = 600.0

    def __init__(self):
        super().__init__("t_limit")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        base = ActionSpec(
            kind="mapped",
            couplings=Couplings(g=1.0, b=0.5),
            x0=(0, 0),
            lattice=LatticeSpec(nx=8, ny=8, a=0.5),
        )
        mc = McConfig(sweeps=30_000, thermalization=3_000, stride=2, seed=self.seed(config))
        report = compare_T_limit(base, mc=mc)
        return CheckOutcome(
            passed=report.passed,
            residual=report.final_bound_ratio,
            tolerance=1e-3,
            details=report.to_dict(),
        )


class TrivialityCheck(BaseCheck):
    """b = 0 时相互作用项的对数斜率为 -2"""

    budget_s = 60.0

    def __init__(self):
        super().__init__("triviality")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        base = ActionSpec(
            kind="liouville",
            couplings=Couplings(g=1.0, b=0.0),
            x0=(0, 0),
            lattice=LatticeSpec(nx=8, ny=8, a=1.0),
        )
        mc = McConfig(sweeps=2_000, thermalization=200, seed=self.seed(config))
        report = triviality_check(base, mc)
        return CheckOutcome(
            passed=report.passed,
            residual=abs(report.slope + 2.0),
            tolerance=SLOPE_TOLERANCE,
            details=report.to_dict(),
        )

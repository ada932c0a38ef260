"""
行走者模块的验收检查：巨正则级数、路径蒙特卡洛对比 PDE、小格点枚举
"""

import math

import numpy as np

from liouvillekit.checks.base_check import BaseCheck, CheckOutcome
from liouvillekit.diffusion.solver import kernel_from_source
from liouvillekit.lattice.fields import random_smooth
from liouvillekit.lattice.operators import grad
from liouvillekit.montecarlo.metropolis import metropolis_run
from liouvillekit.montecarlo.observables import measure_diff_correlators
from liouvillekit.montecarlo.oracles import quadrature_expectation
from liouvillekit.schemas.lattice import Couplings, LatticeSpec
from liouvillekit.schemas.montecarlo import ActionSpec, McConfig
from liouvillekit.schemas.run_config import RunConfig
from liouvillekit.walkers.ensemble import estimate_psi
from liouvillekit.walkers.grand_canonical import grand_canonical_xi
from liouvillekit.walkers.paths import enumerate_psi, walker_spec


class GrandCanonicalSeriesCheck(BaseCheck):
    """n_max = 30 的部分和逼近 exp(mu Z)"""

    budget_s = 1.0
    n_max = 30
    cases = ((1.0, 0.0), (1.0, 1.0), (0.5, 1.0), (2.0, 1.25), (2.5, 2.0))

    def __init__(self):
        super().__init__("grand_canonical_series")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        worst = 0.0
        monotone = True
        for z, mu in self.cases:
            partial = grand_canonical_xi(z, mu, self.n_max)
            worst = max(worst, abs(partial[-1] - math.exp(mu * z)) / math.exp(mu * z))
            if mu * z > 0:
                monotone = monotone and bool(np.all(np.diff(partial) >= 0))
        return CheckOutcome(
            passed=worst < config.tol_series and monotone,
            residual=worst,
            tolerance=config.tol_series,
            details={"cases": [list(c) for c in self.cases], "monotone": monotone},
        )


class PathVsPdeCheck(BaseCheck):
    """加权行走者直方图与相似模式推进逐点在 3 个标准误差内一致"""

    budget_s = 60.0
    n_walkers = 100_000
    min_occupancy = 50
    min_fraction = 0.95

    def __init__(self):
        super().__init__("path_vs_pde")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        rng = self.rng(config)
        spec = LatticeSpec(nx=16, ny=16, a=0.25)
        c = Couplings(g=1.0, b=0.3)
        t = 0.25
        r0 = (8, 8)
        gamma = random_smooth(spec, rng, amplitude=0.3)
        A = grad(gamma)

        estimate = estimate_psi(r0, t, A, c, self.n_walkers, self.seed(config), spec=spec)
        timeline = walker_spec(spec, c, t)
        exact = kernel_from_source(timeline, c, r0, A=A, mode="similarity").values[estimate.nsteps]

        occupied = estimate.counts > self.min_occupancy
        agree = np.abs(estimate.values - exact) <= 3.0 * estimate.stderr
        fraction = float(agree[occupied].mean()) if occupied.any() else 0.0
        return CheckOutcome(
            passed=fraction >= self.min_fraction,
            residual=fraction,
            tolerance=self.min_fraction,
            details={"occupied_sites": int(occupied.sum()), "nsteps": estimate.nsteps, "n_walkers": self.n_walkers},
        )


class EnumerationCheck(BaseCheck):
    """
    2x2 格点上的精确参照

    全路径枚举与相似推进一致，行走者估计在 3 个标准误差内；
    三变量求积与 Metropolis 链的 <e^{b phi}> 在 3 sigma 内。
    """

    budget_s = 60.0
    n_walkers = 20_000
    exact_tolerance = 1e-12

    def __init__(self):
        super().__init__("small_enumeration")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        rng = self.rng(config)
        seed = self.seed(config)
        spec = LatticeSpec(nx=2, ny=2, a=1.0)
        c = Couplings(g=1.0, b=0.3)
        r0 = (0, 0)
        A = grad(random_smooth(spec, rng, amplitude=0.5, modes=1))

        worst_exact = 0.0
        walkers_ok = True
        for nsteps in (1, 2, 3):
            t = nsteps * spec.a ** 2 / (4.0 * c.g)
            enumerated = enumerate_psi(r0, nsteps, A, c.b, spec)
            pde = kernel_from_source(walker_spec(spec, c, t), c, r0, A=A, mode="similarity").values[nsteps]
            worst_exact = max(worst_exact, float(np.max(np.abs(enumerated - pde))))
            estimate = estimate_psi(r0, t, A, c, self.n_walkers, seed + nsteps, spec=spec)
            walkers_ok = walkers_ok and bool(np.all(np.abs(estimate.values - enumerated) <= 3.0 * estimate.stderr))

        action = ActionSpec(kind="liouville", couplings=Couplings(g=1.0, b=0.5), x0=r0, lattice=spec)
        mc = McConfig(sweeps=40_000, thermalization=2_000, seed=seed, batches=20)
        run = metropolis_run(action, mc)
        sites = [(0, 1), (1, 0), (1, 1)]
        table = measure_diff_correlators(run.samples, [(s, r0) for s in sites], action.couplings.b, spec)
        table = table[table["observable"] == "exp_diff"].reset_index(drop=True)
        quadrature = [quadrature_expectation(action, s) for s in sites]
        deviations = np.abs(table["mean"].to_numpy() - np.array(quadrature))
        mc_ok = bool(np.all(deviations <= 3.0 * table["stderr"].to_numpy()))

        return CheckOutcome(
            passed=worst_exact <= self.exact_tolerance and walkers_ok and mc_ok,
            residual=worst_exact,
            tolerance=self.exact_tolerance,
            details={
                "walkers_within_3se": walkers_ok,
                "quadrature": quadrature,
                "metropolis": table["mean"].tolist(),
                "metropolis_stderr": table["stderr"].tolist(),
                "acceptance": run.acceptance,
            },
        )

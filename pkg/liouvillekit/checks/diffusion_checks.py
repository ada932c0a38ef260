"""
扩散模块的验收检查：规范协变、自由核收敛
"""

import numpy as np

from liouvillekit.checks.base_check import BaseCheck, CheckOutcome
from liouvillekit.diffusion.studies import convergence_study, gauge_covariance_residual
from liouvillekit.lattice.fields import ScalarField
from liouvillekit.schemas.lattice import Couplings, LatticeSpec
from liouvillekit.schemas.run_config import RunConfig


class GaugeCovarianceCheck(BaseCheck):
    """A = grad(gamma) 的相似推进与规范变换后的自由推进逐点一致"""

    budget_s = 10.0
    samples = 20

    def __init__(self):
        super().__init__("gauge_covariance")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        rng = self.rng(config)
        spec = LatticeSpec(nx=8, ny=8, a=1.0, nt=21, dt=0.2)
        c = Couplings(g=1.0, b=0.5)
        x0 = (3, 4)

        residuals = []
        for _ in range(self.samples):
            gamma = ScalarField(spec, rng.normal(scale=0.5, size=spec.shape))
            residuals.append(gauge_covariance_residual(spec, c, x0, gamma))
        worst = float(max(residuals))
        self.logger.debug(f"Gauge covariance residuals: {np.array(residuals)}")
        return CheckOutcome(
            passed=worst <= config.tol_gauge,
            residual=worst,
            tolerance=config.tol_gauge,
            details={"samples": self.samples, "lattice": "8x8x21", "b": c.b},
        )


class KernelConvergenceCheck(BaseCheck):
    """格距减半时自由核误差至少缩小 3.5 倍"""

    budget_s = 30.0
    min_ratio = 3.5

    def __init__(self):
        super().__init__("kernel_convergence")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        table = convergence_study(t=0.5, g=1.0, box=8.0, a0=0.25, levels=3)
        ratios = table["ratio"].dropna().tolist()
        worst = float(min(ratios))
        return CheckOutcome(
            passed=worst >= self.min_ratio,
            residual=worst,
            tolerance=self.min_ratio,
            details={
                "a": table["a"].tolist(),
                "linf_rel_error": table["linf_rel_error"].tolist(),
                "ratios": ratios,
            },
        )

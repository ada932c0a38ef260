"""
高斯模块的验收检查：中心恒等式、行列式平凡性、lambda 恒等式
"""

import itertools

import numpy as np

from liouvillekit.checks.base_check import BaseCheck, CheckOutcome
from liouvillekit.gaussian.determinant import det_ratio
from liouvillekit.gaussian.identity import psi_sector_logz, random_sources, rhs_identity
from liouvillekit.gaussian.multiplier import lambda_identity_check
from liouvillekit.lattice.fields import ScalarField
from liouvillekit.schemas.lattice import Couplings, LatticeSpec
from liouvillekit.schemas.run_config import RunConfig

IDENTITY_LATTICES = (
    LatticeSpec(nx=3, ny=3, a=1.0, nt=5, dt=0.1),
    LatticeSpec(nx=4, ny=4, a=1.0, nt=6, dt=0.1),
)
IDENTITY_COUPLINGS = (
    Couplings(g=1.0, b=0.3, tt=1.0),
    Couplings(g=0.5, b=0.7, tt=2.0),
    Couplings(g=2.0, b=1.0, tt=0.5),
)

# 随机 phi 的取值范围；b * |phi(x) - phi(y)| 低于 ln(a^2/(g dt)) 时 LU 不触发选主元
PHI_RANGE = 0.5


class CentralIdentityCheck(BaseCheck):
    """psi 扇区积分与推迟格林函数双线性型相等"""

    budget_s = 60.0
    samples = 10

    def __init__(self):
        super().__init__("central_identity")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        rng = self.rng(config)
        worst = 0.0
        cases = 0
        for spec, c in itertools.product(IDENTITY_LATTICES, IDENTITY_COUPLINGS):
            for _ in range(self.samples):
                phi = ScalarField(spec, rng.normal(scale=0.5, size=spec.shape))
                sources = random_sources(spec, rng)
                lhs = psi_sector_logz(phi, sources, c, spec)
                rhs = rhs_identity(phi, sources, c, spec)
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
                cases += 1
        return CheckOutcome(
            passed=worst <= config.tol_identity,
            residual=worst,
            tolerance=config.tol_identity,
            details={"cases": cases, "lattices": ["3x3x5", "4x4x6"]},
        )


class DeterminantCheck(BaseCheck):
    """det K_phi / det K_0 = 1"""

    budget_s = 30.0
    samples = 20
    b_values = (0.3, 0.7, 1.5)

    def __init__(self):
        super().__init__("det_triviality")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        rng = self.rng(config)
        spec = LatticeSpec(nx=3, ny=3, a=1.0, nt=4, dt=0.1)
        worst = 0.0
        for b in self.b_values:
            c = Couplings(g=1.0, b=b, tt=1.0)
            for _ in range(self.samples):
                phi = ScalarField(spec, rng.uniform(-PHI_RANGE, PHI_RANGE, size=spec.shape))
                worst = max(worst, abs(det_ratio(phi, c, spec) - 1.0))
        return CheckOutcome(
            passed=worst <= config.tol_det,
            residual=worst,
            tolerance=config.tol_det,
            details={"b_values": list(self.b_values), "samples_per_b": self.samples},
        )


class LambdaIdentityCheck(BaseCheck):
    """乘子高斯恒等式在 (alpha, F) 网格上成立"""

    budget_s = 5.0
    alphas = (0.5, 2.0, 8.0)
    strengths = (0.0, 0.5, 1.0, 3.0)

    def __init__(self):
        super().__init__("lambda_identity")

    def evaluate(self, config: RunConfig) -> CheckOutcome:
        worst = 0.0
        worst_imag = 0.0
        rows = []
        for alpha, f in itertools.product(self.alphas, self.strengths):
            result = lambda_identity_check(f, alpha)
            worst = max(worst, result.residual)
            worst_imag = max(worst_imag, abs(result.imag))
            rows.append({"alpha": alpha, "F": f, "lhs": result.lhs, "rhs": result.rhs})
        return CheckOutcome(
            passed=worst < config.tol_lambda and worst_imag < config.tol_lambda,
            residual=float(np.max([worst, worst_imag])),
            tolerance=config.tol_lambda,
            details={"grid": rows, "max_imag": worst_imag},
        )

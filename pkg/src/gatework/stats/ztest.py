"""One-sided two-proportion z-test with pooled variance.

H1: p1 > p2. z = (p1 - p2) / sqrt(p(1-p)(1/n1 + 1/n2)) with p the pooled
proportion; p_one_sided = 1 - Phi(z). Pooled (not unpooled) variance is
the documented choice. Degenerate pooled proportions (0 or 1) force
p1 = p2, so z is defined as 0 there.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

from gatework.errors import InvalidCounts
from gatework.stats.normal import normal_cdf


@dataclass(frozen=True)
class ZTestResult:
    z: float
    p_one_sided: float


def two_prop_z_one_sided(x1: int, n1: int, x2: int, n2: int) -> ZTestResult:
    for x, n in ((x1, n1), (x2, n2)):
        if not (isinstance(n, int) and isinstance(x, int)):
            raise InvalidCounts("counts must be integers")
        if n < 1 or not (0 <= x <= n):
            raise InvalidCounts(f"need 0 <= x <= n and n >= 1, got x={x}, n={n}")

    p1 = x1 / n1
    p2 = x2 / n2
    pooled = (x1 + x2) / (n1 + n2)
    variance = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2)
    z = 0.0 if variance == 0.0 else (p1 - p2) / math.sqrt(variance)
    return ZTestResult(z=z, p_one_sided=1.0 - normal_cdf(z))

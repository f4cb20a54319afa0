"""Standard normal CDF.

Phi(z) = erfc(-z / sqrt(2)) / 2 on top of the C library's complementary
error function, which is correctly rounded to double precision; absolute
error is below 1e-15 for |z| <= 8, comfortably inside the 1e-12 budget the
z-test requires. Tests cross-check against an arbitrary-precision oracle.
"""

from __future__ import annotations

import math

_SQRT2 = math.sqrt(2.0)


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / _SQRT2)

"""Standard normal density, tail probabilities, and upper-tail quantile.

The quantile uses a rational approximation as the initial guess and polishes
it with Newton steps on the complementary CDF, so no external special-function
library is needed at runtime.
"""

from __future__ import annotations

import math

SQRT2 = math.sqrt(2.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Rational approximation coefficients (Acklam), relative error < 1.15e-9
# before polishing.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)


def pdf(x: float) -> float:
    """Standard normal density at x."""
    return INV_SQRT_2PI * math.exp(-0.5 * x * x)


def cdf(x: float) -> float:
    """Standard normal distribution function at x."""
    return 0.5 * math.erfc(-x / SQRT2)


def sf(x: float) -> float:
    """Standard normal upper tail probability at x."""
    return 0.5 * math.erfc(x / SQRT2)


def _quantile_initial(p: float) -> float:
    """Lower quantile of the standard normal, rational approximation only."""
    if p <= 0.0 or p >= 1.0:
        raise ValueError(f"quantile requires 0 < p < 1, got {p}")
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
                / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    if p > 1.0 - p_low:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
                 / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
            / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))


def z_quantile(alpha: float) -> float:
    """Upper-tail quantile: the z with P(Z > z) = alpha for standard normal Z.

    Accurate to roughly 1e-12 absolute over alpha in [1e-300, 1 - 1e-16].
    """
    z = -_quantile_initial(alpha)
    # Newton on sf(z) - alpha; derivative is -pdf(z).
    for _ in range(4):
        err = sf(z) - alpha
        d = pdf(z)
        if d == 0.0:
            break
        step = err / d
        z += step
        if abs(step) <= 1e-14 * max(1.0, abs(z)):
            break
    return z

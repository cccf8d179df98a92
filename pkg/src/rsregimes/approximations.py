"""Pre-limit approximations of the selection error at the planned sizes.

These quantify how far a finite-sample run sits from the asymptotic target:
an Edgeworth skewness/kurtosis correction for the CLT plan, the Chernoff
bound and its Bahadur-Rao sharpening for the LD plan, and two bridging
diagnostics (the quantile-ratio limit and the small-gap Taylor remainder of
the difference rate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import SystemPair
from .errors import DegenerateError, RangeError
from .normal import pdf, z_quantile
from .rates import difference_rate, difference_rate_taylor

__all__ = [
    "PisApproximation", "TaylorRemainderEntry", "TaylorRemainderReport",
    "clt_md_ratio", "phi_over_z", "edgeworth_pis", "chernoff_pis",
    "bahadur_rao_pis", "bahadur_rao_prefactor", "taylor_remainder_report",
]


@dataclass(frozen=True, slots=True)
class PisApproximation:
    """A predicted misselection probability with a validity verdict.

    valid is false when the method's assumptions fail (lattice difference
    law); the value is still computed for display.
    """

    method: str
    value: float
    valid: bool
    reason: str = ""


def _check_half_open(alpha: float) -> None:
    if not 0.0 < alpha < 0.5:
        raise RangeError(f"alpha must lie in (0, 0.5), got {alpha}")


def clt_md_ratio(alpha: float) -> float:
    """z_alpha^2 / (2 log(1/alpha)): CLT-to-MD sample size ratio, tends to 1.

    Below 1 for every alpha in (0, 0.5), which is why the MD plan carries a
    safety buffer over the CLT plan at fixed alpha.
    """
    _check_half_open(alpha)
    return z_quantile(alpha) ** 2 / (2.0 * math.log(1.0 / alpha))


def phi_over_z(alpha: float) -> float:
    """phi(z_alpha) / z_alpha: exceeds alpha, ratio tends to 1 as alpha -> 0."""
    _check_half_open(alpha)
    z = z_quantile(alpha)
    return pdf(z) / z


def _lattice_reason(pair: SystemPair) -> str:
    if pair.difference_is_lattice():
        return "difference law is lattice"
    return ""


def edgeworth_pis(pair: SystemPair, alpha: float) -> PisApproximation:
    """Edgeworth-corrected misselection probability at the equal CLT plan.

    alpha plus (phi(z)/z) * { S (z^2-1) / (6 sqrt(V)) * delta
    + [ (K-3)(z^2-3) / (24 V) + S^2 (z^4 - 10 z^2 + 15) / (72 V) ] * delta^2 }
    with S and K the skewness and kurtosis of the mean-zero difference and
    V the summed variance.
    """
    _check_half_open(alpha)
    mom = pair.difference_moments()
    v = mom.variance
    if v <= 0.0:
        raise DegenerateError("edgeworth correction needs positive summed variance")
    z = z_quantile(alpha)
    z2 = z * z
    s, k = mom.skewness, mom.kurtosis
    d = pair.delta
    first = s * (z2 - 1.0) / (6.0 * math.sqrt(v)) * d
    second = ((k - 3.0) * (z2 - 3.0) / (24.0 * v)
              + s * s * (z2 * z2 - 10.0 * z2 + 15.0) / (72.0 * v)) * d * d
    value = alpha + pdf(z) / z * (first + second)
    reason = _lattice_reason(pair)
    return PisApproximation("edgeworth", value, reason == "", reason)


def chernoff_pis(pair: SystemPair, alpha: float,
                 n: float | None = None) -> PisApproximation:
    """Chernoff upper bound exp(-n G_e) at the equal LD plan.

    At the raw (unrounded) plan size the bound equals alpha by construction;
    passing an integer n evaluates the bound at an actual sample count.
    """
    if not 0.0 < alpha < 1.0:
        raise RangeError(f"alpha must lie in (0, 1), got {alpha}")
    g = difference_rate(pair).value
    size = math.log(1.0 / alpha) / g if n is None else n
    return PisApproximation("chernoff", math.exp(-size * g), True)


def bahadur_rao_pis(pair: SystemPair, alpha: float) -> PisApproximation:
    """Sharpened large-deviation estimate at the equal LD plan.

    (alpha / sqrt(log(1/alpha))) * sqrt(G_e) / (sqrt(2 pi psi''(theta)) theta)
    with theta the optimizing tilt of the difference rate.  The curvature is
    taken at theta, the tilting point.
    """
    if not 0.0 < alpha < 1.0:
        raise RangeError(f"alpha must lie in (0, 1), got {alpha}")
    ev = difference_rate(pair)
    value = (alpha / math.sqrt(math.log(1.0 / alpha))
             * math.sqrt(ev.value) / (math.sqrt(2.0 * math.pi * ev.curvature) * ev.theta))
    reason = _lattice_reason(pair)
    return PisApproximation("bahadur-rao", value, reason == "", reason)


def bahadur_rao_prefactor(pair: SystemPair) -> float:
    """sqrt(G_e) / (sqrt(psi'') theta): tends to 1/sqrt(2) as delta -> 0."""
    ev = difference_rate(pair)
    return math.sqrt(ev.value) / (math.sqrt(ev.curvature) * ev.theta)


@dataclass(frozen=True, slots=True)
class TaylorRemainderEntry:
    delta: float
    exact: float
    taylor: float
    error: float


@dataclass(frozen=True, slots=True)
class TaylorRemainderReport:
    """Per-delta Taylor remainders of the difference rate and their decay slope.

    slope is the log-log fit of |exact - taylor| against delta; a fourth-order
    remainder gives a slope near 4.  It is NaN when any error underflows to
    zero (the Gaussian case, where the expansion is exact).
    """

    entries: tuple[TaylorRemainderEntry, ...]
    slope: float

    @property
    def max_error(self) -> float:
        return max(e.error for e in self.entries)


def taylor_remainder_report(pair: SystemPair, deltas) -> TaylorRemainderReport:
    """Compare the exact difference rate against its two-term expansion."""
    entries = []
    for d in deltas:
        if not d > 0.0:
            raise RangeError(f"deltas must be positive, got {d}")
        exact = difference_rate(pair, at=d).value
        taylor = difference_rate_taylor(pair, at=d)
        entries.append(TaylorRemainderEntry(d, exact, taylor, abs(exact - taylor)))
    if len(entries) >= 2 and all(e.error > 0.0 for e in entries):
        xs = np.log([e.delta for e in entries])
        ys = np.log([e.error for e in entries])
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = math.nan
    return TaylorRemainderReport(tuple(entries), slope)

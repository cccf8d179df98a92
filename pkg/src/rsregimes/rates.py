"""Rate functions built from cumulant generating functions.

legendre_transform computes I(a) = sup_theta { theta*a - psi(theta) } by
solving psi'(theta) = a with a bracketed Newton iteration.  On top of it sit
the pairwise decay rates used by the planners: the allocation rate (an inner
minimization over the crossing point b), the mean-difference rate, and its
Gaussian closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import CgfEvaluator, SystemPair, cgf_evaluator
from .errors import ConvergenceError, DegenerateError, RangeError

__all__ = [
    "RateEvaluation", "AllocationResult", "legendre_transform",
    "allocation_rate", "difference_rate", "difference_rate_taylor",
    "gaussian_allocation_rate", "optimal_allocation",
]

_RESIDUAL_TOL = 1e-12
_BRACKET_STEPS = 60
_MAX_NEWTON = 200
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, slots=True)
class RateEvaluation:
    """Value of a rate function together with the optimizing tilt."""

    value: float
    theta: float
    curvature: float


@dataclass(frozen=True, slots=True)
class AllocationResult:
    """An allocation fraction pair with its decay rate and crossing point."""

    p1: float
    p2: float
    rate: float
    crossing: float


def _bracket(cgf: CgfEvaluator, a: float, upward: bool) -> tuple[float, float]:
    """Find [lo, hi] with psi'(lo) - a < 0 <= psi'(hi) - a (signs flipped downward).

    Steps march from 0 toward the relevant domain edge, doubling either the
    step (unbounded edge) or the remaining gap fraction (finite edge).
    """
    lo_dom, hi_dom = cgf.domain
    edge = hi_dom if upward else lo_dom
    prev = 0.0
    for k in range(_BRACKET_STEPS):
        if math.isinf(edge):
            theta = (2.0 ** k) if upward else -(2.0 ** k)
        else:
            theta = edge * (1.0 - 0.5 ** (k + 1))
        f = cgf.dpsi(theta) - a
        crossed = (f >= 0.0) if upward else (f <= 0.0)
        if crossed:
            # A flat saturated crossing at an enormous tilt means the target
            # sits on the boundary of the attainable range, not inside it.
            if f == 0.0 and cgf.d2psi(theta) == 0.0 and abs(theta) > 1e9:
                break
            return (prev, theta) if upward else (theta, prev)
        prev = theta
    raise RangeError(
        f"target mean {a} is outside the attainable range of the CGF derivative")


def legendre_transform(cgf: CgfEvaluator, a: float) -> RateEvaluation:
    """Evaluate I(a) = sup_theta { theta*a - psi(theta) }.

    The supremum is attained where psi'(theta) = a.  A doubling search
    brackets the root, then Newton iterates with bisection fallback whenever
    a step would leave the bracket.  Raises RangeError when a is outside the
    attainable range and ConvergenceError if the iteration stalls.
    """
    m0 = cgf.dpsi(0.0)
    if a == m0:
        return RateEvaluation(0.0, 0.0, cgf.d2psi(0.0))
    if cgf.d2psi(0.0) == 0.0:
        # Point mass: the rate is zero at the mean and infinite elsewhere.
        raise RangeError(f"degenerate distribution only attains its mean {m0}")

    lo, hi = _bracket(cgf, a, upward=a > m0)
    theta = 0.5 * (lo + hi)
    tol = _RESIDUAL_TOL * max(1.0, abs(a))
    for _ in range(_MAX_NEWTON):
        f = cgf.dpsi(theta) - a
        if abs(f) <= tol:
            value = theta * a - cgf.psi(theta)
            return RateEvaluation(max(value, 0.0), theta, cgf.d2psi(theta))
        if f < 0.0:
            lo = theta
        else:
            hi = theta
        curv = cgf.d2psi(theta)
        if curv > 0.0:
            candidate = theta - f / curv
        else:
            candidate = math.nan
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)
        if candidate == theta:
            # Bracket has collapsed to one float; accept if the residual is
            # within the looser guarantee, otherwise give up honestly.
            if abs(f) <= 1e-10 * max(1.0, abs(a)):
                value = theta * a - cgf.psi(theta)
                return RateEvaluation(max(value, 0.0), theta, cgf.d2psi(theta))
            raise ConvergenceError(
                f"tilt solve stalled at theta={theta} with residual {f}")
        theta = candidate
    raise ConvergenceError(f"tilt solve did not converge for target {a}")


def difference_rate(pair: SystemPair, at: float | None = None) -> RateEvaluation:
    """Rate of the mean-zero difference (X2 + delta) - X1 at the gap delta.

    This is the decay exponent for the equal-allocation comparison.  `at`
    overrides the evaluation point for diagnostics.
    """
    target = pair.delta if at is None else at
    return legendre_transform(pair.difference_cgf(), target)


def difference_rate_taylor(pair: SystemPair, at: float | None = None) -> float:
    """Two-term small-gap expansion of the difference rate.

    d^2/(2V) - k3 * d^3/(6 V^3) with V the summed variance and k3 the third
    central moment of the difference.
    """
    d = pair.delta if at is None else at
    mom = pair.difference_moments()
    v = mom.variance
    if v <= 0.0:
        raise DegenerateError("taylor expansion requires positive summed variance")
    return d * d / (2.0 * v) - mom.third_central * d ** 3 / (6.0 * v ** 3)


def gaussian_allocation_rate(sigma1: float, sigma2: float,
                             p1: float, p2: float) -> float:
    """Closed-form allocation rate for Gaussian systems, per unit delta^2.

    Equals p1*p2 / (2*(sigma1^2*p2 + sigma2^2*p1)).  Multiply by delta^2 to
    get the actual decay rate.
    """
    _check_fractions(p1, p2)
    if sigma1 == 0.0 and sigma2 == 0.0:
        raise DegenerateError("both variances are zero; the rate is unbounded")
    return p1 * p2 / (2.0 * (sigma1 * sigma1 * p2 + sigma2 * sigma2 * p1))


def _check_fractions(p1: float, p2: float) -> None:
    if not (p1 > 0.0 and p2 > 0.0):
        raise ValueError(f"allocation fractions must be positive, got {p1}, {p2}")
    if abs(p1 + p2 - 1.0) > 1e-9:
        raise ValueError(f"allocation fractions must sum to 1, got {p1 + p2}")


def _pinned_allocation(pair: SystemPair, p1: float, p2: float) -> AllocationResult:
    """Allocation rate when one system is deterministic.

    The only crossing point with a finite rate on the degenerate side is that
    system's constant value, so the minimization collapses.
    """
    if pair.var1 == 0.0 and pair.var2 == 0.0:
        raise RangeError("both systems are deterministic; no finite rate exists")
    if pair.var1 == 0.0:
        b = pair.mu1
        rate = p2 * legendre_transform(cgf_evaluator(pair.dist2), b).value
    else:
        b = pair.mu2
        rate = p1 * legendre_transform(cgf_evaluator(pair.dist1), b).value
    return AllocationResult(p1, p2, rate, b)


def allocation_rate(pair: SystemPair, p1: float, p2: float) -> AllocationResult:
    """Decay rate of misselection under allocation fractions (p1, p2).

    Minimizes p1*I1(b) + p2*I2(b) over crossing points b between the two
    means, where I1 and I2 are the rate functions of the leader and the
    runner-up.  Golden section narrows the bracket, then bisection on the
    stationarity condition p1*theta1(b) + p2*theta2(b) = 0 finishes to high
    accuracy.
    """
    _check_fractions(p1, p2)
    if pair.var1 == 0.0 or pair.var2 == 0.0:
        return _pinned_allocation(pair, p1, p2)

    ev1 = cgf_evaluator(pair.dist1)
    ev2 = cgf_evaluator(pair.dist2)

    def objective(b: float) -> float:
        return p1 * legendre_transform(ev1, b).value + p2 * legendre_transform(ev2, b).value

    def slope(b: float) -> float:
        # Envelope theorem: d/db of the objective is the weighted tilt sum.
        return p1 * legendre_transform(ev1, b).theta + p2 * legendre_transform(ev2, b).theta

    lo, hi = pair.mu2, pair.mu1
    span = hi - lo
    # Golden section until the bracket is small, to sidestep any flat spots.
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = objective(x1), objective(x2)
    while hi - lo > 1e-4 * span:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = objective(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = objective(x2)
    # The slope is increasing in b (both rates are convex), so bisect it.
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if slope(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    b = 0.5 * (lo + hi)
    return AllocationResult(p1, p2, objective(b), b)


def optimal_allocation(pair: SystemPair, regime: str) -> AllocationResult:
    """Allocation fractions maximizing the decay rate for the given regime.

    Large deviations uses a golden-section search of the exact rate over p1.
    Moderate deviations has the closed-form answer p_i proportional to
    sigma_i; its crossing is reported as the variance-weighted mean split.
    """
    if regime == "md":
        s1, s2 = pair.sigma1, pair.sigma2
        if s1 == 0.0 or s2 == 0.0:
            raise DegenerateError("moderate-deviation optimum needs both variances positive")
        p1 = s1 / (s1 + s2)
        p2 = 1.0 - p1
        rate = pair.delta ** 2 * gaussian_allocation_rate(s1, s2, p1, p2)
        crossing = pair.mu1 - pair.delta * s1 / (s1 + s2)
        return AllocationResult(p1, p2, rate, crossing)
    if regime != "ld":
        raise ValueError(f"regime must be 'ld' or 'md', got {regime!r}")
    if pair.var1 == 0.0 or pair.var2 == 0.0:
        raise DegenerateError("large-deviation optimum needs both variances positive")

    def rate_at(p1: float) -> float:
        return allocation_rate(pair, p1, 1.0 - p1).rate

    lo, hi = 1e-6, 1.0 - 1e-6
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = rate_at(x1), rate_at(x2)
    while hi - lo > 1e-10:
        if f1 >= f2:  # maximize
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = rate_at(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = rate_at(x2)
    p1 = 0.5 * (lo + hi)
    best = allocation_rate(pair, p1, 1.0 - p1)
    return best

"""Fixed-sample-size planners for the three asymptotic regimes.

Each regime offers three allocation policies: optimal (minimum total cost),
equal (same count from both systems), and independent (each system sized
without looking at the other).  Raw sizes are real-valued; plans round them
up with a floor of 2 so sample variances always exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import SystemPair, cgf_evaluator
from .errors import DegenerateError, RangeError
from .normal import z_quantile
from .rates import difference_rate, legendre_transform, optimal_allocation

__all__ = [
    "AllocationPolicy", "SamplePlan", "MdScaling", "z_quantile",
    "clt_plan", "ld_plan", "md_plan", "plan_for", "md_scaling_diag",
]

POLICY_KINDS = ("optimal", "equal", "independent")
REGIMES = ("clt", "ld", "md")


@dataclass(frozen=True, slots=True)
class AllocationPolicy:
    """Allocation policy; anchor_b only matters for LD-independent sizing."""

    kind: str
    anchor_b: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"policy kind must be one of {POLICY_KINDS}, got {self.kind!r}")


@dataclass(frozen=True, slots=True)
class SamplePlan:
    """Per-system sample counts with the raw values they were rounded from."""

    n1: int
    n2: int
    regime: str
    policy: AllocationPolicy
    raw1: float
    raw2: float


def _round_up(raw: float) -> int:
    return max(2, math.ceil(raw))


def _as_plan(regime: str, policy: AllocationPolicy,
             raw1: float, raw2: float) -> SamplePlan:
    return SamplePlan(_round_up(raw1), _round_up(raw2), regime, policy, raw1, raw2)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise RangeError(f"alpha must lie in (0, 1), got {alpha}")


def clt_plan(pair: SystemPair, alpha: float, policy: AllocationPolicy) -> SamplePlan:
    """Sample sizes z_a^2 * sigma_i^2 * q_i / delta^2 for the CLT regime.

    optimal: q1 = 1 + s2/s1, q2 = 1 + s1/s2 (minimum total count).
    equal: both systems get z^2 (s1^2 + s2^2) / delta^2.
    independent: q_i = 2.
    """
    _check_alpha(alpha)
    z2 = z_quantile(alpha) ** 2
    d2 = pair.delta ** 2
    v1, v2 = pair.var1, pair.var2
    if v1 + v2 == 0.0:
        raise DegenerateError("both variances are zero; CLT sizing is vacuous")
    if policy.kind == "optimal":
        if v1 == 0.0 or v2 == 0.0:
            raise DegenerateError("optimal CLT allocation needs both variances positive")
        s = pair.sigma1 + pair.sigma2
        return _as_plan("clt", policy, z2 * s * pair.sigma1 / d2, z2 * s * pair.sigma2 / d2)
    if policy.kind == "equal":
        raw = z2 * (v1 + v2) / d2
        return _as_plan("clt", policy, raw, raw)
    return _as_plan("clt", policy, 2.0 * z2 * v1 / d2, 2.0 * z2 * v2 / d2)


def ld_plan(pair: SystemPair, alpha: float, policy: AllocationPolicy) -> SamplePlan:
    """Sample sizes log(1/alpha) * p_i / G(p1, p2) for the large-deviation regime.

    optimal: p from the exact rate maximization.
    equal: both systems get log(1/alpha) / rate-of-mean-difference.
    independent: log(1/alpha) / I_i(anchor_b), anchor defaulting to the
    midpoint of the two means.
    """
    _check_alpha(alpha)
    log_inv = math.log(1.0 / alpha)
    if policy.kind == "equal":
        raw = log_inv / difference_rate(pair).value
        return _as_plan("ld", policy, raw, raw)
    if pair.var1 == 0.0 or pair.var2 == 0.0:
        raise DegenerateError(
            "only the equal policy is defined when a system is deterministic")
    if policy.kind == "optimal":
        alloc = optimal_allocation(pair, "ld")
        return _as_plan("ld", policy,
                        log_inv * alloc.p1 / alloc.rate,
                        log_inv * alloc.p2 / alloc.rate)
    b = policy.anchor_b if policy.anchor_b is not None else 0.5 * (pair.mu1 + pair.mu2)
    if not pair.mu2 < b < pair.mu1:
        raise RangeError(
            f"anchor point {b} must lie strictly between the means "
            f"({pair.mu2}, {pair.mu1})")
    i1 = legendre_transform(cgf_evaluator(pair.dist1), b).value
    i2 = legendre_transform(cgf_evaluator(pair.dist2), b).value
    return _as_plan("ld", policy, log_inv / i1, log_inv / i2)


def md_plan(pair: SystemPair, alpha: float, policy: AllocationPolicy) -> SamplePlan:
    """Sample sizes log(1/alpha) * p_i / (delta^2 * Ghat) for the MD regime.

    optimal: p_i = sigma_i / (sigma1 + sigma2), via the general formula
    (2 log(1/alpha) (sigma1 + sigma2) sigma_i / delta^2).
    equal: 2 log(1/alpha) (sigma1^2 + sigma2^2) / delta^2 for both.
    independent: 4 log(1/alpha) sigma_i^2 / delta^2.
    """
    _check_alpha(alpha)
    log_inv = math.log(1.0 / alpha)
    d2 = pair.delta ** 2
    v1, v2 = pair.var1, pair.var2
    if v1 + v2 == 0.0:
        raise DegenerateError("both variances are zero; MD sizing is vacuous")
    if policy.kind == "optimal":
        if v1 == 0.0 or v2 == 0.0:
            raise DegenerateError("optimal MD allocation needs both variances positive")
        s = pair.sigma1 + pair.sigma2
        return _as_plan("md", policy,
                        2.0 * log_inv * s * pair.sigma1 / d2,
                        2.0 * log_inv * s * pair.sigma2 / d2)
    if policy.kind == "equal":
        raw = 2.0 * log_inv * (v1 + v2) / d2
        return _as_plan("md", policy, raw, raw)
    return _as_plan("md", policy,
                    4.0 * log_inv * v1 / d2,
                    4.0 * log_inv * v2 / d2)


_PLANNERS = {"clt": clt_plan, "ld": ld_plan, "md": md_plan}


def plan_for(pair: SystemPair, alpha: float, regime: str,
             policy: AllocationPolicy) -> SamplePlan:
    """Dispatch to the regime's planner."""
    try:
        planner = _PLANNERS[regime]
    except KeyError:
        raise ValueError(f"regime must be one of {REGIMES}, got {regime!r}") from None
    return planner(pair, alpha, policy)


@dataclass(frozen=True, slots=True)
class MdScaling:
    """Position of an (alpha, delta) pair on the moderate-deviation curve."""

    alpha: float
    delta: float
    beta: float
    L: float


def md_scaling_diag(alpha: float, delta: float, beta: float) -> MdScaling:
    """L = log(1/alpha) * delta^((1-2*beta)/beta) for beta in (1/3, 1/2).

    Diagnostic only: fixed-(alpha, delta) plans never consume beta or L; they
    exist to show where a configuration sits on the limiting curve.
    """
    _check_alpha(alpha)
    if not 1.0 / 3.0 < beta < 0.5:
        raise RangeError(f"beta must lie in (1/3, 1/2), got {beta}")
    if not delta > 0.0:
        raise RangeError(f"delta must be > 0, got {delta}")
    exponent = (1.0 - 2.0 * beta) / beta
    return MdScaling(alpha, delta, beta, math.log(1.0 / alpha) * delta ** exponent)

"""Sampling distributions with exact moments and cumulant generating functions.

Five families are supported: normal, exponential, Bernoulli, constant, and a
location shift of any other family.  Each family exposes its first four
central moments in closed form, its CGF with first and second derivatives on
an open finiteness domain, and direct sampling from a numpy Generator.

A SystemPair bundles the two competing systems together with the mean gap
delta.  The pair owns the derived objects the planners need: the CGF of the
difference between the shifted runner-up and the leader, and the exact
moments of that difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError

__all__ = [
    "Normal", "Exponential", "Bernoulli", "Constant", "Shifted",
    "DistributionSpec", "MomentSummary", "CgfEvaluator", "SystemPair",
    "moments", "sample", "cgf", "cgf_prime", "cgf_prime2", "cgf_evaluator",
]


def _sigmoid(t: float) -> float:
    if t >= 0.0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


@dataclass(frozen=True, slots=True)
class MomentSummary:
    """First four moments of a distribution; third and fourth are central."""

    mean: float
    variance: float
    third_central: float
    fourth_central: float
    skewness: float
    kurtosis: float


def _summary(mean: float, var: float, tc: float, fc: float) -> MomentSummary:
    if var > 0.0:
        sd3 = var * math.sqrt(var)
        skew = tc / sd3
        kurt = fc / (var * var)
    else:
        skew = math.nan
        kurt = math.nan
    return MomentSummary(mean, var, tc, fc, skew, kurt)


@dataclass(frozen=True, slots=True)
class Normal:
    mean_value: float
    stddev: float

    def __post_init__(self) -> None:
        if not self.stddev >= 0.0:
            raise ValueError(f"stddev must be >= 0, got {self.stddev}")

    def mean(self) -> float:
        return self.mean_value

    def variance(self) -> float:
        return self.stddev * self.stddev

    def third_central(self) -> float:
        return 0.0

    def fourth_central(self) -> float:
        v = self.variance()
        return 3.0 * v * v

    def domain(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def cgf(self, theta: float) -> float:
        return self.mean_value * theta + 0.5 * self.variance() * theta * theta

    def cgf_d1(self, theta: float) -> float:
        return self.mean_value + self.variance() * theta

    def cgf_d2(self, theta: float) -> float:
        return self.variance()

    def is_lattice(self) -> bool:
        # A zero-width normal is a point mass, which lives on a lattice.
        return self.stddev == 0.0

    def sample(self, rng: np.random.Generator, size=None):
        if size is None:
            return self.mean_value + self.stddev * float(rng.standard_normal())
        return self.mean_value + self.stddev * rng.standard_normal(size)


@dataclass(frozen=True, slots=True)
class Exponential:
    mean_value: float

    def __post_init__(self) -> None:
        if not self.mean_value > 0.0:
            raise ValueError(f"exponential mean must be > 0, got {self.mean_value}")

    def mean(self) -> float:
        return self.mean_value

    def variance(self) -> float:
        return self.mean_value ** 2

    def third_central(self) -> float:
        return 2.0 * self.mean_value ** 3

    def fourth_central(self) -> float:
        return 9.0 * self.mean_value ** 4

    def domain(self) -> tuple[float, float]:
        return (-math.inf, 1.0 / self.mean_value)

    def cgf(self, theta: float) -> float:
        self._check(theta)
        return -math.log1p(-self.mean_value * theta)

    def cgf_d1(self, theta: float) -> float:
        self._check(theta)
        return self.mean_value / (1.0 - self.mean_value * theta)

    def cgf_d2(self, theta: float) -> float:
        self._check(theta)
        r = 1.0 - self.mean_value * theta
        return self.mean_value ** 2 / (r * r)

    def _check(self, theta: float) -> None:
        if theta >= 1.0 / self.mean_value:
            raise DomainError(
                f"exponential CGF is finite only for theta < {1.0 / self.mean_value}, got {theta}")

    def is_lattice(self) -> bool:
        return False

    def sample(self, rng: np.random.Generator, size=None):
        if size is None:
            return self.mean_value * float(rng.standard_exponential())
        return self.mean_value * rng.standard_exponential(size)


@dataclass(frozen=True, slots=True)
class Bernoulli:
    success_prob: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.success_prob <= 1.0:
            raise ValueError(f"success probability must lie in [0, 1], got {self.success_prob}")

    def mean(self) -> float:
        return self.success_prob

    def variance(self) -> float:
        return self.success_prob * (1.0 - self.success_prob)

    def third_central(self) -> float:
        p = self.success_prob
        return p * (1.0 - p) * (1.0 - 2.0 * p)

    def fourth_central(self) -> float:
        p = self.success_prob
        q = 1.0 - p
        return p * q * (p ** 3 + q ** 3)

    def domain(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def cgf(self, theta: float) -> float:
        p = self.success_prob
        q = 1.0 - p
        lq = math.log(q) if q > 0.0 else -math.inf
        lp = math.log(p) if p > 0.0 else -math.inf
        return float(np.logaddexp(lq, lp + theta))

    def cgf_d1(self, theta: float) -> float:
        p = self.success_prob
        if p == 0.0:
            return 0.0
        if p == 1.0:
            return 1.0
        return _sigmoid(theta + math.log(p / (1.0 - p)))

    def cgf_d2(self, theta: float) -> float:
        s = self.cgf_d1(theta)
        return s * (1.0 - s)

    def is_lattice(self) -> bool:
        return True

    def sample(self, rng: np.random.Generator, size=None):
        if size is None:
            return 1.0 if rng.random() < self.success_prob else 0.0
        return (rng.random(size) < self.success_prob).astype(np.float64)


@dataclass(frozen=True, slots=True)
class Constant:
    value: float

    def mean(self) -> float:
        return self.value

    def variance(self) -> float:
        return 0.0

    def third_central(self) -> float:
        return 0.0

    def fourth_central(self) -> float:
        return 0.0

    def domain(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def cgf(self, theta: float) -> float:
        return self.value * theta

    def cgf_d1(self, theta: float) -> float:
        return self.value

    def cgf_d2(self, theta: float) -> float:
        return 0.0

    def is_lattice(self) -> bool:
        return True

    def sample(self, rng: np.random.Generator, size=None):
        # Draws nothing from the stream; the value is deterministic.
        if size is None:
            return self.value
        return np.full(size, self.value)


@dataclass(frozen=True, slots=True)
class Shifted:
    base: "DistributionSpec"
    offset: float

    def mean(self) -> float:
        return self.base.mean() + self.offset

    def variance(self) -> float:
        return self.base.variance()

    def third_central(self) -> float:
        return self.base.third_central()

    def fourth_central(self) -> float:
        return self.base.fourth_central()

    def domain(self) -> tuple[float, float]:
        return self.base.domain()

    def cgf(self, theta: float) -> float:
        return self.offset * theta + self.base.cgf(theta)

    def cgf_d1(self, theta: float) -> float:
        return self.offset + self.base.cgf_d1(theta)

    def cgf_d2(self, theta: float) -> float:
        return self.base.cgf_d2(theta)

    def is_lattice(self) -> bool:
        return self.base.is_lattice()

    def sample(self, rng: np.random.Generator, size=None):
        return self.base.sample(rng, size) + self.offset


DistributionSpec = Union[Normal, Exponential, Bernoulli, Constant, Shifted]


def moments(spec: DistributionSpec) -> MomentSummary:
    """Exact moment summary of a distribution."""
    return _summary(spec.mean(), spec.variance(),
                    spec.third_central(), spec.fourth_central())


def sample(spec: DistributionSpec, rng: np.random.Generator, size=None):
    """Draw from the distribution; a scalar float when size is None."""
    return spec.sample(rng, size)


def cgf(spec: DistributionSpec, theta: float) -> float:
    return spec.cgf(theta)


def cgf_prime(spec: DistributionSpec, theta: float) -> float:
    return spec.cgf_d1(theta)


def cgf_prime2(spec: DistributionSpec, theta: float) -> float:
    return spec.cgf_d2(theta)


class CgfEvaluator:
    """A cumulant generating function bundled with its derivatives and domain.

    The Legendre transform solver only needs these four pieces, so both plain
    distributions and the pair difference reduce to this interface.
    """

    __slots__ = ("psi", "dpsi", "d2psi", "domain")

    def __init__(self,
                 psi: Callable[[float], float],
                 dpsi: Callable[[float], float],
                 d2psi: Callable[[float], float],
                 domain: tuple[float, float]):
        self.psi = psi
        self.dpsi = dpsi
        self.d2psi = d2psi
        self.domain = domain


def cgf_evaluator(spec: DistributionSpec) -> CgfEvaluator:
    return CgfEvaluator(spec.cgf, spec.cgf_d1, spec.cgf_d2, spec.domain())


@dataclass(frozen=True)
class SystemPair:
    """Two competing systems and the indifference gap delta between them.

    dist1 is the better system.  The comparison benchmark is the runner-up
    shifted up by delta, so its mean ties with dist1; the shift leaves the
    variance and all central moments of dist2 untouched.
    """

    dist1: DistributionSpec
    dist2: DistributionSpec
    delta: float

    def __post_init__(self) -> None:
        if not self.delta > 0.0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        gap = self.dist1.mean() - self.dist2.mean()
        if abs(gap - self.delta) > 1e-12:
            raise ValueError(
                f"mean gap {gap} does not match delta {self.delta}")

    @property
    def mu1(self) -> float:
        return self.dist1.mean()

    @property
    def mu2(self) -> float:
        return self.dist2.mean()

    @property
    def var1(self) -> float:
        return self.dist1.variance()

    @property
    def var2(self) -> float:
        return self.dist2.variance()

    @property
    def sigma1(self) -> float:
        return math.sqrt(self.var1)

    @property
    def sigma2(self) -> float:
        return math.sqrt(self.var2)

    def x2_shifted(self) -> Shifted:
        """The runner-up lifted by delta so both systems have equal means."""
        return Shifted(self.dist2, self.delta)

    def difference_cgf(self) -> CgfEvaluator:
        """CGF of D = (X2 + delta) - X1, which has mean zero.

        The domain is the intersection of the shifted runner-up's domain with
        the reflected domain of the leader.
        """
        d1 = self.dist1
        x2 = self.x2_shifted()
        lo1, hi1 = d1.domain()
        lo2, hi2 = x2.domain()
        lo = max(lo2, -hi1)
        hi = min(hi2, -lo1)

        def psi(theta: float) -> float:
            return x2.cgf(theta) + d1.cgf(-theta)

        def dpsi(theta: float) -> float:
            return x2.cgf_d1(theta) - d1.cgf_d1(-theta)

        def d2psi(theta: float) -> float:
            return x2.cgf_d2(theta) + d1.cgf_d2(-theta)

        return CgfEvaluator(psi, dpsi, d2psi, (lo, hi))

    def difference_moments(self) -> MomentSummary:
        """Exact moments of D = (X2 + delta) - X1, mean exactly zero."""
        v1 = self.var1
        v2 = self.var2
        tc = self.dist2.third_central() - self.dist1.third_central()
        fc = (self.dist2.fourth_central() + 6.0 * v1 * v2
              + self.dist1.fourth_central())
        return _summary(0.0, v1 + v2, tc, fc)

    def difference_is_lattice(self) -> bool:
        return self.dist1.is_lattice() and self.dist2.is_lattice()

"""Sequential stopping rules for unknown-variance selection.

All four rules share one criterion shape: stop at the first n past a floor
where coef * (pooled sample variance) / n drops below a limit.  The joint
rules draw one observation from each system per step and keep the counts
equal; the independent variants run one system at a time.

The hot loop inlines the same Welford update that StreamingStats implements,
and draws observations in blocks to amortize generator overhead.  Block
boundaries never affect the stopping decision, only the draw order per
system, which is part of the rule's sampling contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import DistributionSpec, SystemPair
from .errors import BudgetExceeded
from .normal import z_quantile

__all__ = [
    "StreamingStats", "StoppingOutcome", "DEFAULT_BUDGET",
    "clt_stop_joint", "clt_stop_independent",
    "md_stop_joint", "md_stop_independent",
]

DEFAULT_BUDGET = 10 ** 9
_BLOCK = 256


class StreamingStats:
    """Welford running mean and sum of squared deviations.

    variance() matches the two-pass sample variance (ddof 1) to floating
    round-off; it requires at least two observations.
    """

    __slots__ = ("count", "mean", "sum_sq_dev")

    def __init__(self) -> None:
        self.count = 0
        self.mean = 0.0
        self.sum_sq_dev = 0.0

    def push(self, x: float) -> None:
        self.count += 1
        d = x - self.mean
        self.mean += d / self.count
        self.sum_sq_dev += d * (x - self.mean)

    def variance(self) -> float:
        if self.count < 2:
            raise ValueError("sample variance needs at least 2 observations")
        return self.sum_sq_dev / (self.count - 1)


@dataclass(frozen=True, slots=True)
class StoppingOutcome:
    """Where a sequential run stopped and which system it picked."""

    stop_n1: int
    stop_n2: int
    mean1: float
    mean2: float
    selected: int

    @property
    def stop_n(self) -> int:
        if self.stop_n1 != self.stop_n2:
            raise ValueError("per-system stops differ; use stop_n1/stop_n2")
        return self.stop_n1


def _outcome(n1: int, n2: int, mean1: float, mean2: float) -> StoppingOutcome:
    # Ties select system 1, mirroring the strict-inequality misselection event.
    return StoppingOutcome(n1, n2, mean1, mean2, 1 if mean1 >= mean2 else 2)


def _sampler(dist: DistributionSpec, rng: np.random.Generator):
    def draw(k: int):
        block = dist.sample(rng, k)
        return block.tolist() if isinstance(block, np.ndarray) else [block] * k

    return draw


def _run_joint(draw1, draw2, floor_n: int, coef: float, limit: float,
               budget: int) -> tuple[int, float, float]:
    n = 0
    mean1 = m2_1 = 0.0
    mean2 = m2_2 = 0.0
    while n < budget:
        take = min(floor_n if n == 0 else _BLOCK, budget - n)
        for x, y in zip(draw1(take), draw2(take)):
            n += 1
            d = x - mean1
            mean1 += d / n
            m2_1 += d * (x - mean1)
            d = y - mean2
            mean2 += d / n
            m2_2 += d * (y - mean2)
            if n >= floor_n:
                s = m2_1 / (n - 1) + m2_2 / (n - 1)
                if coef * s / n < limit:
                    return n, mean1, mean2
    raise BudgetExceeded(f"no stop within the sampling cap {budget}")


def _run_single(draw, floor_n: int, coef: float, limit: float,
                budget: int) -> tuple[int, float]:
    n = 0
    mean = m2 = 0.0
    while n < budget:
        take = min(floor_n if n == 0 else _BLOCK, budget - n)
        for x in draw(take):
            n += 1
            d = x - mean
            mean += d / n
            m2 += d * (x - mean)
            if n >= floor_n:
                if coef * (m2 / (n - 1)) / n < limit:
                    return n, mean
    raise BudgetExceeded(f"no stop within the sampling cap {budget}")


def clt_stop_joint(pair: SystemPair, alpha: float, rng: np.random.Generator,
                   *, budget: int = DEFAULT_BUDGET) -> StoppingOutcome:
    """Stop at the first n >= ceil(1/delta) with z^2 (S1^2 + S2^2) / n < delta^2."""
    z2 = z_quantile(alpha) ** 2
    floor_n = max(2, math.ceil(1.0 / pair.delta))
    n, mean1, mean2 = _run_joint(_sampler(pair.dist1, rng), _sampler(pair.dist2, rng),
                                 floor_n, z2, pair.delta ** 2, budget)
    return _outcome(n, n, mean1, mean2)


def md_stop_joint(pair: SystemPair, alpha: float, rng: np.random.Generator,
                  *, budget: int = DEFAULT_BUDGET) -> StoppingOutcome:
    """Stop at the first n >= ceil(1/delta) with 2 (S1^2 + S2^2) / n < delta^2 / log(1/alpha)."""
    floor_n = max(2, math.ceil(1.0 / pair.delta))
    limit = pair.delta ** 2 / math.log(1.0 / alpha)
    n, mean1, mean2 = _run_joint(_sampler(pair.dist1, rng), _sampler(pair.dist2, rng),
                                 floor_n, 2.0, limit, budget)
    return _outcome(n, n, mean1, mean2)


def clt_stop_independent(dist: DistributionSpec, alpha: float, delta: float,
                         rng: np.random.Generator,
                         *, budget: int = DEFAULT_BUDGET) -> tuple[int, float]:
    """Per-system stop: first n >= floor(1/delta) with 2 z^2 S^2 / n < delta^2."""
    z2 = z_quantile(alpha) ** 2
    floor_n = max(2, math.floor(1.0 / delta))
    return _run_single(_sampler(dist, rng), floor_n, 2.0 * z2, delta ** 2, budget)


def md_stop_independent(dist: DistributionSpec, alpha: float, delta: float,
                        rng: np.random.Generator,
                        *, budget: int = DEFAULT_BUDGET) -> tuple[int, float]:
    """Per-system stop: first n >= ceil(1/delta) with 4 S^2 / n < delta^2 / log(1/alpha)."""
    floor_n = max(2, math.ceil(1.0 / delta))
    limit = delta ** 2 / math.log(1.0 / alpha)
    return _run_single(_sampler(dist, rng), floor_n, 4.0, limit, budget)

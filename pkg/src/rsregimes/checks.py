"""Self-contained diagnostic suites surfaced by the check command.

Each suite returns a list of CheckResult rows; a row passes when the stated
identity or bound holds at the documented tolerance.  The suites only use
closed-form cross-checks, so they run in well under a second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .approximations import (bahadur_rao_pis, bahadur_rao_prefactor,
                             chernoff_pis, clt_md_ratio, edgeworth_pis,
                             taylor_remainder_report)
from .config import builtin_suite
from .distributions import Normal, SystemPair
from .rates import (allocation_rate, difference_rate, gaussian_allocation_rate,
                    optimal_allocation)
from .regimes import AllocationPolicy, ld_plan, md_plan

__all__ = ["CheckResult", "CHECK_TOPICS", "run_checks"]


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _gaussian_pair(sigma1: float = 1.0, sigma2: float = 1.0,
                   delta: float = 0.1) -> SystemPair:
    return SystemPair(Normal(0.0, sigma1), Normal(-delta, sigma2), delta)


def _table1_pair() -> SystemPair:
    return next(iter(builtin_suite("table1").pairs.values()))


def _table2_pair() -> SystemPair:
    return next(iter(builtin_suite("table2").pairs.values()))


def quantile_ratio_checks() -> list[CheckResult]:
    """z_alpha^2 / (2 log(1/alpha)) stays in (0,1) and climbs toward 1."""
    alphas = [10.0 ** (-k) for k in range(2, 13)]
    ratios = [clt_md_ratio(a) for a in alphas]
    in_range = all(0.0 < r < 1.0 for r in ratios)
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    at_1e8 = clt_md_ratio(1e-8)
    return [
        CheckResult("ratio in (0,1) on alpha grid 1e-2..1e-12", in_range,
                    f"min {min(ratios):.4f}, max {max(ratios):.4f}"),
        CheckResult("ratio strictly increasing as alpha decreases", increasing,
                    f"{ratios[0]:.4f} -> {ratios[-1]:.4f}"),
        CheckResult("ratio at alpha=1e-8 in [0.83, 0.88]",
                    0.83 <= at_1e8 <= 0.88, f"value {at_1e8:.4f}"),
    ]


def taylor_remainder_checks() -> list[CheckResult]:
    """Two-term expansion of the difference rate has a fourth-order remainder."""
    exp_report = taylor_remainder_report(_table1_pair(), (0.1, 0.05, 0.025))
    gauss_report = taylor_remainder_report(_gaussian_pair(), (0.1, 0.05, 0.025))
    # The two-point difference law has curvature scale var ~ 1e-3, so the
    # expansion only behaves on gaps well inside that scale.
    bern_report = taylor_remainder_report(_table2_pair(), (1e-4, 5e-5, 2.5e-5))
    return [
        CheckResult("exponential pair log-log remainder slope in [3.5, 4.5]",
                    3.5 <= exp_report.slope <= 4.5, f"slope {exp_report.slope:.3f}"),
        CheckResult("gaussian pair remainder zero at double precision",
                    gauss_report.max_error <= 1e-15,
                    f"max error {gauss_report.max_error:.2e}"),
        CheckResult("two-point pair remainder slope in [3.5, 4.5] at small gaps",
                    3.5 <= bern_report.slope <= 4.5, f"slope {bern_report.slope:.3f}"),
    ]


def edgeworth_checks() -> list[CheckResult]:
    """Skewness/kurtosis correction behaves across the reference pairs."""
    alpha = 0.05
    gauss = edgeworth_pis(_gaussian_pair(), alpha)
    t1 = edgeworth_pis(_table1_pair(), alpha)
    t2 = edgeworth_pis(_table2_pair(), 0.01)
    return [
        CheckResult("gaussian pair correction vanishes exactly",
                    gauss.valid and gauss.value == alpha, f"value {gauss.value!r}"),
        CheckResult("exponential pair: small negative correction",
                    t1.valid and 0.0 < alpha - t1.value < 1e-3,
                    f"value {t1.value:.6f} vs alpha {alpha}"),
        CheckResult("two-point pair flagged invalid (lattice difference)",
                    not t2.valid and "lattice" in t2.reason,
                    f"valid={t2.valid}, reason={t2.reason!r}"),
    ]


def bahadur_rao_checks() -> list[CheckResult]:
    """Sharpened tail estimate sits below the Chernoff bound, limit prefactor ok."""
    results = []
    for delta in (0.1, 0.01):
        pf = bahadur_rao_prefactor(_gaussian_pair(delta=delta))
        results.append(CheckResult(
            f"gaussian prefactor at delta={delta} equals 1/sqrt(2)",
            abs(pf - 1.0 / math.sqrt(2.0)) <= 1e-12, f"value {pf:.15f}"))
    alpha = 0.05
    t1 = bahadur_rao_pis(_table1_pair(), alpha)
    chern = chernoff_pis(_table1_pair(), alpha)
    results.append(CheckResult(
        "exponential pair estimate below the Chernoff bound and above 0",
        t1.valid and 0.0 < t1.value < chern.value,
        f"estimate {t1.value:.6f}, bound {chern.value:.6f}"))
    t2 = bahadur_rao_pis(_table2_pair(), 0.01)
    results.append(CheckResult(
        "two-point pair flagged invalid (lattice difference)",
        not t2.valid and "lattice" in t2.reason, f"reason={t2.reason!r}"))
    return results


def identity_checks() -> list[CheckResult]:
    """Cross-checks tying the allocation rate to its closed forms."""
    results = []
    for label, pair in (("exponential pair", _table1_pair()),
                        ("gaussian pair", _gaussian_pair(1.0, 2.0, 0.3))):
        half = allocation_rate(pair, 0.5, 0.5)
        diff = difference_rate(pair)
        err = abs(2.0 * half.rate - diff.value)
        results.append(CheckResult(
            f"equal-split identity 2 G(1/2,1/2) = G_e ({label})",
            err <= 1e-8, f"error {err:.2e}"))
    rng = np.random.default_rng(711)
    worst = 0.0
    for _ in range(100):
        s1, s2 = (float(s) for s in rng.uniform(0.2, 3.0, size=2))
        p1 = float(rng.uniform(0.05, 0.95))
        delta = 0.3
        pair = _gaussian_pair(s1, s2, delta)
        got = allocation_rate(pair, p1, 1.0 - p1).rate
        want = delta ** 2 * gaussian_allocation_rate(s1, s2, p1, 1.0 - p1)
        worst = max(worst, abs(got - want))
    results.append(CheckResult(
        "gaussian closed form G = delta^2 Ghat on random grid (100 points)",
        worst <= 1e-10, f"max error {worst:.2e}"))
    best = optimal_allocation(_gaussian_pair(1.0, 2.0, 0.3), "ld")
    results.append(CheckResult(
        "gaussian optimal allocation matches sigma-proportional rule",
        abs(best.p1 - 1.0 / 3.0) <= 1e-6, f"p1 {best.p1:.8f}"))
    pair = _gaussian_pair(1.0, 2.0, 0.3)
    equal = AllocationPolicy("equal")
    ld_raw = ld_plan(pair, 0.05, equal).raw1
    md_raw = md_plan(pair, 0.05, equal).raw1
    rel = abs(ld_raw - md_raw) / md_raw
    results.append(CheckResult(
        "gaussian equal-policy LD and MD plans coincide",
        rel <= 1e-6, f"relative gap {rel:.2e}"))
    return results


CHECK_TOPICS = {
    "lemma1": quantile_ratio_checks,
    "lemma2": taylor_remainder_checks,
    "edgeworth": edgeworth_checks,
    "bahadur": bahadur_rao_checks,
    "identities": identity_checks,
}


def run_checks(topic: str) -> list[CheckResult]:
    try:
        suite = CHECK_TOPICS[topic]
    except KeyError:
        raise ValueError(
            f"unknown check topic {topic!r}; choose from {', '.join(CHECK_TOPICS)}") from None
    return suite()

"""Deterministic Monte Carlo estimation of the misselection probability.

Each replication owns a counter-derived substream of one Philox generator:
replication r uses the stream starting at counter block r * 2^128 under the
master-seed key.  Partitioning replications across workers therefore cannot
change any draw, and results are bit-identical for any worker count.
"""

from __future__ import annotations

import math
import os
import time
from collections import Counter
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.random import Generator, Philox

from .distributions import Constant, DistributionSpec, Shifted, SystemPair
from .regimes import SamplePlan
from .sequential import (DEFAULT_BUDGET, clt_stop_independent, clt_stop_joint,
                         md_stop_independent, md_stop_joint)

__all__ = [
    "FixedProcedure", "SequentialProcedure", "ExperimentConfig",
    "ExperimentResult", "OvershootRow", "SEQUENTIAL_RULES",
    "replication_rng", "run_trial", "estimate_pis", "resolve_workers",
    "stop_histogram", "coverage_flag", "overshoot_report",
]

SEQUENTIAL_RULES = ("clt", "md", "clt_independent", "md_independent")
WORKERS_ENV = "RSREGIMES_WORKERS"
_CHUNK = 2048


@dataclass(frozen=True, slots=True)
class FixedProcedure:
    """Draw the planned counts, then pick the larger sample mean."""

    plan: SamplePlan


@dataclass(frozen=True, slots=True)
class SequentialProcedure:
    """Run a sequential stopping rule, then pick the larger sample mean."""

    rule: str
    alpha: float
    budget: int = DEFAULT_BUDGET

    def __post_init__(self) -> None:
        if self.rule not in SEQUENTIAL_RULES:
            raise ValueError(f"rule must be one of {SEQUENTIAL_RULES}, got {self.rule!r}")


Procedure = Union[FixedProcedure, SequentialProcedure]


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    pair: SystemPair
    procedure: Procedure
    replications: int
    master_seed: int

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError(f"master_seed must be an unsigned 64-bit integer, got {self.master_seed}")


@dataclass(frozen=True, slots=True)
class ExperimentResult:
    """Misselection estimate; mean stops are filled for sequential runs."""

    incorrect_count: int
    replications: int
    pis_estimate: float
    std_error: float
    master_seed: int
    wall_time_s: float
    mean_stop1: float | None = None
    mean_stop2: float | None = None


def replication_rng(master_seed: int, index: int) -> Generator:
    """Independent substream for one replication.

    Jumps the Philox counter to block index * 2^128, leaving each replication
    2^128 blocks of room; no two replications can overlap.
    """
    bg = Philox(key=master_seed)
    bg.advance(index << 128)
    return Generator(bg)


class _ReplicationStreams:
    """Reuses one generator across replications by resetting its counter.

    Bit-identical to replication_rng(master_seed, index) at a fraction of the
    construction cost (pinned by test).
    """

    def __init__(self, master_seed: int) -> None:
        self._bg = Philox(key=master_seed)
        self._gen = Generator(self._bg)
        self._key = self._bg.state["state"]["key"].copy()

    def rng(self, index: int) -> Generator:
        self._bg.state = {
            "bit_generator": "Philox",
            "state": {
                "counter": np.array([0, 0, index, 0], dtype=np.uint64),
                "key": self._key,
            },
            "buffer": np.zeros(4, dtype=np.uint64),
            "buffer_pos": 4,
            "has_uint32": 0,
            "uinteger": 0,
        }
        return self._gen


def _mean_fn(dist: DistributionSpec):
    """Closure computing a sample mean of n draws; skips the stream entirely
    for deterministic laws (their sample() consumes nothing either)."""
    if isinstance(dist, Constant):
        value = dist.value
        return lambda rng, n: value
    if isinstance(dist, Shifted):
        base = _mean_fn(dist.base)
        offset = dist.offset
        return lambda rng, n: base(rng, n) + offset
    return lambda rng, n: float(dist.sample(rng, n).mean())


def _trial_fn(config: ExperimentConfig):
    """Build a per-replication closure returning (incorrect, stop1, stop2)."""
    pair = config.pair
    proc = config.procedure
    if isinstance(proc, FixedProcedure):
        n1, n2 = proc.plan.n1, proc.plan.n2
        mean1 = _mean_fn(pair.dist1)
        mean2 = _mean_fn(pair.dist2)

        def fixed_trial(rng):
            return mean1(rng, n1) < mean2(rng, n2), n1, n2

        return fixed_trial

    alpha, budget = proc.alpha, proc.budget
    if proc.rule == "clt":
        def joint_trial(rng):
            out = clt_stop_joint(pair, alpha, rng, budget=budget)
            return out.selected == 2, out.stop_n1, out.stop_n2
        return joint_trial
    if proc.rule == "md":
        def joint_trial(rng):
            out = md_stop_joint(pair, alpha, rng, budget=budget)
            return out.selected == 2, out.stop_n1, out.stop_n2
        return joint_trial
    single = clt_stop_independent if proc.rule == "clt_independent" else md_stop_independent
    delta = pair.delta

    def indep_trial(rng):
        s1, m1 = single(pair.dist1, alpha, delta, rng, budget=budget)
        s2, m2 = single(pair.dist2, alpha, delta, rng, budget=budget)
        return m1 < m2, s1, s2

    return indep_trial


def run_trial(config: ExperimentConfig, index: int) -> bool:
    """Run one replication; True means the wrong system was selected."""
    trial = _trial_fn(config)
    incorrect, _, _ = trial(replication_rng(config.master_seed, index))
    return bool(incorrect)


def _run_chunk(config: ExperimentConfig, start: int, stop: int) -> tuple[int, int, int]:
    trial = _trial_fn(config)
    streams = _ReplicationStreams(config.master_seed)
    incorrect = 0
    stops1 = 0
    stops2 = 0
    for index in range(start, stop):
        bad, s1, s2 = trial(streams.rng(index))
        incorrect += bad
        stops1 += s1
        stops2 += s2
    return incorrect, stops1, stops2


def resolve_workers(workers: int | None) -> int:
    """Explicit argument, else the RSREGIMES_WORKERS variable, else 1."""
    if workers is None:
        raw = os.environ.get(WORKERS_ENV, "").strip()
        workers = int(raw) if raw else 1
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return workers


def estimate_pis(config: ExperimentConfig, workers: int | None = None) -> ExperimentResult:
    """Estimate the misselection probability over config.replications trials.

    Replication indices are split into fixed-size chunks; the chunk layout
    does not depend on the worker count, and each replication's stream
    depends only on (master_seed, index), so the incorrect count is exactly
    reproducible at any parallelism level.
    """
    workers = resolve_workers(workers)
    reps = config.replications
    bounds = [(s, min(s + _CHUNK, reps)) for s in range(0, reps, _CHUNK)]
    started = time.perf_counter()
    if workers == 1 or len(bounds) == 1:
        parts = [_run_chunk(config, s, e) for s, e in bounds]
    else:
        from concurrent.futures import ProcessPoolExecutor
        from itertools import repeat

        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, repeat(config),
                                  [s for s, _ in bounds], [e for _, e in bounds],
                                  chunksize=max(1, len(bounds) // (4 * workers))))
    wall = time.perf_counter() - started
    incorrect = sum(p[0] for p in parts)
    p_hat = incorrect / reps
    se = math.sqrt(p_hat * (1.0 - p_hat) / reps)
    sequential = isinstance(config.procedure, SequentialProcedure)
    mean_stop1 = sum(p[1] for p in parts) / reps if sequential else None
    mean_stop2 = sum(p[2] for p in parts) / reps if sequential else None
    return ExperimentResult(incorrect, reps, p_hat, se, config.master_seed,
                            wall, mean_stop1, mean_stop2)


def _hist_chunk(config: ExperimentConfig, start: int, stop: int) -> Counter:
    trial = _trial_fn(config)
    streams = _ReplicationStreams(config.master_seed)
    counts: Counter = Counter()
    for index in range(start, stop):
        _, s1, s2 = trial(streams.rng(index))
        counts[(s1, s2)] += 1
    return counts


def stop_histogram(config: ExperimentConfig, workers: int | None = None) -> Counter:
    """Counts of (stop_n1, stop_n2) across replications of a sequential rule.

    Joint rules stop both systems together, so the two entries coincide.
    Uses the same chunk layout and per-index streams as estimate_pis.
    """
    if not isinstance(config.procedure, SequentialProcedure):
        raise ValueError("stop_histogram requires a sequential procedure")
    workers = resolve_workers(workers)
    reps = config.replications
    bounds = [(s, min(s + _CHUNK, reps)) for s in range(0, reps, _CHUNK)]
    if workers == 1 or len(bounds) == 1:
        parts = [_hist_chunk(config, s, e) for s, e in bounds]
    else:
        from concurrent.futures import ProcessPoolExecutor
        from itertools import repeat

        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_hist_chunk, repeat(config),
                                  [s for s, _ in bounds], [e for _, e in bounds],
                                  chunksize=max(1, len(bounds) // (4 * workers))))
    total: Counter = Counter()
    for part in parts:
        total.update(part)
    return total


@dataclass(frozen=True, slots=True)
class OvershootRow:
    """PIS estimate for one plan with its position relative to the target."""

    plan: SamplePlan
    result: ExperimentResult
    flag: str


def coverage_flag(p_hat: float, se: float, alpha: float) -> str:
    """overshoot: conservative (PIS below target); undershoot: misses it."""
    if p_hat + 3.0 * se < alpha:
        return "overshoot"
    if p_hat - 3.0 * se > alpha:
        return "undershoot"
    return "on-target"


def overshoot_report(pair: SystemPair, alpha: float, plans, replications: int,
                     master_seed: int, workers: int | None = None) -> list[OvershootRow]:
    """Estimate PIS for each plan and compare against the target alpha."""
    rows = []
    for plan in plans:
        config = ExperimentConfig(pair, FixedProcedure(plan), replications, master_seed)
        result = estimate_pis(config, workers)
        rows.append(OvershootRow(plan, result,
                                 coverage_flag(result.pis_estimate, result.std_error, alpha)))
    return rows

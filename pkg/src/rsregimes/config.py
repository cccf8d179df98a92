"""Suite configuration: JSON ingestion, validation, and built-in suites.

A suite names one or more system pairs and lists (regime, policy) rows to
apply to each of them, together with the error target, replication count,
and master seed.  The two built-in suites reproduce the package's reference
experiments: an exponential pair at alpha 0.05 and a constant-vs-Bernoulli
pair at alpha 0.01.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .distributions import (Bernoulli, Constant, DistributionSpec, Exponential,
                            Normal, Shifted, SystemPair)
from .errors import ConfigError
from .regimes import POLICY_KINDS, REGIMES, AllocationPolicy

__all__ = [
    "RegimeRow", "SuiteConfig", "BUILTIN_SUITES", "PUBLISHED_PIS",
    "DEFAULT_REPLICATIONS", "DEFAULT_SEED",
    "parse_distribution", "distribution_to_jsonable", "parse_suite",
    "load_suite", "builtin_suite",
]

DEFAULT_REPLICATIONS = 1_000_000
DEFAULT_SEED = 20240605

# Reference estimates (probability, one standard error) at 10^6 replications
# for the built-in suites, used for side-by-side comparison in reports.
PUBLISHED_PIS = {
    "table1": {"clt": (0.0497, 0.0002), "ld": (0.0072, 0.0001), "md": (0.0071, 0.0001)},
    "table2": {"clt": (0.1057, 0.0003), "ld": (0.0015, 0.00003), "md": (0.0156, 0.0001)},
}


@dataclass(frozen=True, slots=True)
class RegimeRow:
    """One planned row; pair restricts it to a named pair (None: all pairs)."""

    regime: str
    policy: AllocationPolicy
    pair: str | None = None


@dataclass(frozen=True, slots=True)
class SuiteConfig:
    pairs: dict[str, SystemPair]
    rows: tuple[RegimeRow, ...]
    alpha: float
    replications: int
    master_seed: int
    output_path: str | None = None


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise ConfigError(f"{context}: missing required key {key!r}")
    return obj[key]


def parse_distribution(obj, context: str = "distribution") -> DistributionSpec:
    """Build a distribution from a tagged record like {"family": "exponential", "mean": 1.0}."""
    if not isinstance(obj, dict):
        raise ConfigError(f"{context}: expected an object, got {type(obj).__name__}")
    family = _require(obj, "family", context)
    try:
        if family == "normal":
            return Normal(float(_require(obj, "mean", context)),
                          float(_require(obj, "stddev", context)))
        if family == "exponential":
            return Exponential(float(_require(obj, "mean", context)))
        if family == "bernoulli":
            return Bernoulli(float(_require(obj, "success_prob", context)))
        if family == "constant":
            return Constant(float(_require(obj, "value", context)))
        if family == "shifted":
            base = parse_distribution(_require(obj, "base", context), f"{context}.base")
            return Shifted(base, float(_require(obj, "offset", context)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{context}: {exc}") from exc
    raise ConfigError(f"{context}: unknown family {family!r}")


def distribution_to_jsonable(spec: DistributionSpec) -> dict:
    if isinstance(spec, Normal):
        return {"family": "normal", "mean": spec.mean_value, "stddev": spec.stddev}
    if isinstance(spec, Exponential):
        return {"family": "exponential", "mean": spec.mean_value}
    if isinstance(spec, Bernoulli):
        return {"family": "bernoulli", "success_prob": spec.success_prob}
    if isinstance(spec, Constant):
        return {"family": "constant", "value": spec.value}
    if isinstance(spec, Shifted):
        return {"family": "shifted", "base": distribution_to_jsonable(spec.base),
                "offset": spec.offset}
    raise ConfigError(f"unsupported distribution type {type(spec).__name__}")


def _parse_pair(name: str, obj) -> SystemPair:
    context = f"pairs[{name!r}]"
    if not isinstance(obj, dict):
        raise ConfigError(f"{context}: expected an object")
    dist1 = parse_distribution(_require(obj, "dist1", context), f"{context}.dist1")
    dist2 = parse_distribution(_require(obj, "dist2", context), f"{context}.dist2")
    delta = _require(obj, "delta", context)
    try:
        return SystemPair(dist1, dist2, float(delta))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{context}: {exc}") from exc


def _parse_row(index: int, obj) -> RegimeRow:
    context = f"regimes[{index}]"
    if not isinstance(obj, dict):
        raise ConfigError(f"{context}: expected an object")
    regime = _require(obj, "regime", context)
    if regime not in REGIMES:
        raise ConfigError(f"{context}: regime must be one of {REGIMES}, got {regime!r}")
    kind = _require(obj, "policy", context)
    if kind not in POLICY_KINDS:
        raise ConfigError(f"{context}: policy must be one of {POLICY_KINDS}, got {kind!r}")
    anchor = obj.get("anchor_b")
    pair = obj.get("pair")
    if pair is not None and not isinstance(pair, str):
        raise ConfigError(f"{context}: pair must be a string name")
    return RegimeRow(regime, AllocationPolicy(kind, None if anchor is None else float(anchor)),
                     pair)


def parse_suite(obj: dict) -> SuiteConfig:
    """Validate a parsed JSON document into a SuiteConfig."""
    if not isinstance(obj, dict):
        raise ConfigError("suite config must be a JSON object")
    known = {"pairs", "regimes", "alpha", "replications", "master_seed", "output_path"}
    for key in obj:
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
    pairs_obj = _require(obj, "pairs", "config")
    if not isinstance(pairs_obj, dict) or not pairs_obj:
        raise ConfigError("config: 'pairs' must be a non-empty object of named pairs")
    pairs = {name: _parse_pair(name, spec) for name, spec in pairs_obj.items()}
    rows_obj = _require(obj, "regimes", "config")
    if not isinstance(rows_obj, list) or not rows_obj:
        raise ConfigError("config: 'regimes' must be a non-empty list")
    rows = tuple(_parse_row(i, r) for i, r in enumerate(rows_obj))
    for i, row in enumerate(rows):
        if row.pair is not None and row.pair not in pairs:
            raise ConfigError(f"regimes[{i}]: unknown pair name {row.pair!r}")
    alpha = float(_require(obj, "alpha", "config"))
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"config: alpha must lie in (0, 1), got {alpha}")
    replications = int(obj.get("replications", DEFAULT_REPLICATIONS))
    if replications < 1:
        raise ConfigError(f"config: replications must be >= 1, got {replications}")
    master_seed = int(obj.get("master_seed", DEFAULT_SEED))
    if not 0 <= master_seed < 2 ** 64:
        raise ConfigError(f"config: master_seed must be an unsigned 64-bit integer")
    output_path = obj.get("output_path")
    if output_path is not None and not isinstance(output_path, str):
        raise ConfigError("config: output_path must be a string")
    return SuiteConfig(pairs, rows, alpha, replications, master_seed, output_path)


def _reject_duplicate_keys(items):
    seen = {}
    for key, value in items:
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} in config object")
        seen[key] = value
    return seen


def _equal_rows() -> tuple[RegimeRow, ...]:
    return tuple(RegimeRow(r, AllocationPolicy("equal")) for r in ("clt", "ld", "md"))


def builtin_suite(name: str) -> SuiteConfig:
    if name == "table1":
        mu2 = 1.0 / 1.1
        pair = SystemPair(Exponential(1.0), Exponential(mu2), 1.0 - mu2)
        return SuiteConfig({"table1": pair}, _equal_rows(), 0.05,
                           DEFAULT_REPLICATIONS, DEFAULT_SEED)
    if name == "table2":
        pair = SystemPair(Constant(0.008), Bernoulli(0.001), 0.008 - 0.001)
        return SuiteConfig({"table2": pair}, _equal_rows(), 0.01,
                           DEFAULT_REPLICATIONS, DEFAULT_SEED)
    raise ConfigError(f"unknown built-in config {name!r}")


BUILTIN_SUITES = ("table1", "table2")


def load_suite(path_or_name: str) -> SuiteConfig:
    """Load a suite from a JSON file, or by built-in name (table1, table2)."""
    if path_or_name in BUILTIN_SUITES:
        return builtin_suite(path_or_name)
    if not os.path.exists(path_or_name):
        raise ConfigError(
            f"config {path_or_name!r} is neither a file nor one of the "
            f"built-ins {', '.join(BUILTIN_SUITES)}")
    try:
        with open(path_or_name, encoding="utf-8") as fh:
            obj = json.load(fh, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path_or_name!r} is not valid JSON: {exc}") from exc
    return parse_suite(obj)

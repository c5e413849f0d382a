"""Run configuration: which ensemble to build and how.

Stored as a JSON document whose keys are exactly the :class:`RunConfig` field
names; unknown keys are rejected.  Example::

    {
      "mode": "mixed_arch",
      "n": 20000,
      "beta": 10,
      "distribution": {"kind": "grid", "values": [-1, 0, 1]},
      "pool": {
        "architectures": [
          {"id": "neuron", "input_dim": 2, "layers": [1], "activation": "hard", "k": 1},
          {"id": "two-layer", "input_dim": 2, "layers": [2, 1], "k": 3}
        ],
        "selection_weights": [0.5, 0.5]
      },
      "master_seed": 7,
      "max_attempts": 10000000,
      "exponent_variant": "displayed"
    }

``beta`` may be the string ``"inf"``.  ``k`` defaults to the neuron count.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from .errors import ConfigError, GibbsNetError
from .network import Architecture
from .sampling import ArchitecturePool, ParamDistribution, PoolEntry
from .selection import DISPLAYED, LIMIT_FORM

__all__ = ["RunConfig", "load_config", "parse_beta", "format_beta", "MODES"]

ZERO_ERROR = "zero_error"
GIBBS = "gibbs"
MIXED_ARCH = "mixed_arch"
MODES = (ZERO_ERROR, GIBBS, MIXED_ARCH)


def parse_beta(value) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        try:
            value = float(value)
        except ValueError:
            raise ConfigError(f"beta must be a number or 'inf', got {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"beta must be a number or 'inf', got {value!r}")
    beta = float(value)
    if math.isnan(beta) or beta < 0:
        raise ConfigError(f"beta must be non-negative, got {value!r}")
    return beta


def format_beta(beta: float):
    return "inf" if math.isinf(beta) else float(beta)


def pool_to_dict(pool: ArchitecturePool) -> dict:
    return {
        "architectures": [dict(e.arch.to_dict(), k=e.complexity) for e in pool.entries],
        "selection_weights": [float(p) for p in pool.selection_weights],
    }


def pool_from_dict(d: dict) -> ArchitecturePool:
    if not isinstance(d, dict):
        raise ConfigError("pool must be an object")
    extra = set(d) - {"architectures", "selection_weights"}
    if extra:
        raise ConfigError(f"unknown pool fields: {sorted(extra)}")
    recs = d.get("architectures")
    if not recs:
        raise ConfigError("pool has no architectures")
    entries = []
    for rec in recs:
        rec = dict(rec)
        k = rec.pop("k", None)
        arch = Architecture.from_dict(rec)
        entries.append(PoolEntry(arch, float(arch.neuron_count if k is None else k)))
    return ArchitecturePool(entries, d.get("selection_weights"))


@dataclass(frozen=True)
class RunConfig:
    mode: str
    n: int
    pool: ArchitecturePool
    beta: float = math.inf
    distribution: ParamDistribution = field(default_factory=ParamDistribution.normal)
    master_seed: int = 0
    max_attempts: int = 10**7
    exponent_variant: str = DISPLAYED

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n!r}")
        if isinstance(self.max_attempts, bool) or int(self.max_attempts) != self.max_attempts \
                or self.max_attempts < 1:
            raise ConfigError(f"max_attempts must be a positive integer, got {self.max_attempts!r}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ConfigError("master_seed must fit in an unsigned 64-bit integer")
        if self.exponent_variant not in (DISPLAYED, LIMIT_FORM):
            raise ConfigError(
                f"exponent_variant must be {DISPLAYED!r} or {LIMIT_FORM!r}, "
                f"got {self.exponent_variant!r}"
            )
        object.__setattr__(self, "beta", parse_beta(self.beta))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "max_attempts", int(self.max_attempts))
        object.__setattr__(self, "master_seed", int(self.master_seed))

    def with_seed(self, seed) -> RunConfig:
        return replace(self, master_seed=int(seed))

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "beta": format_beta(self.beta),
            "distribution": self.distribution.to_dict(),
            "pool": pool_to_dict(self.pool),
            "master_seed": self.master_seed,
            "max_attempts": self.max_attempts,
            "exponent_variant": self.exponent_variant,
        }

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        known = {"mode", "n", "beta", "distribution", "pool", "master_seed", "max_attempts",
                 "exponent_variant"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config fields: {sorted(extra)}")
        for req in ("mode", "n", "pool"):
            if req not in d:
                raise ConfigError(f"config is missing {req!r}")
        kw = dict(d)
        try:
            kw["pool"] = pool_from_dict(d["pool"])
            if "distribution" in d:
                kw["distribution"] = ParamDistribution.from_dict(d["distribution"])
            return cls(**kw)
        except ConfigError:
            raise
        except (GibbsNetError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return RunConfig.from_dict(doc)

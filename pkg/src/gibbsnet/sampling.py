"""Seeded random networks and architectures.

Every random number is a pure function of ``(master_seed, sample_index, word)``
obtained by hashing the triple with the SplitMix64 finaliser.  Sample ``i``
therefore sees the same draws whichever other indices are generated, in
whatever order or chunking, which is what lets scoring run on any number of
workers with an identical result.

Word 0 of a sample picks its architecture; words ``1..param_count`` are its
weights and thresholds in the flat layout of :mod:`gibbsnet.network`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import ParameterError
from .network import Architecture, NetworkParams

__all__ = [
    "ParamDistribution",
    "PoolEntry",
    "ArchitecturePool",
    "SeedSpec",
    "stream_uniforms",
    "sample_params",
    "sample_param_matrix",
    "sample_architecture",
    "sample_architecture_slots",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_WORD_STEP = np.uint64(0xD1B54A32D192ED03)


def _mix(z):
    z = z + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def stream_uniforms(master_seed: int, indices, words) -> np.ndarray:
    """Uniform draws in the open interval (0, 1), shape ``(len(indices), len(words))``."""
    seed = np.array([int(master_seed) & _MASK64], dtype=np.uint64)
    idx = np.asarray(indices, dtype=np.uint64).reshape(-1, 1)
    w = np.asarray(words, dtype=np.uint64).reshape(1, -1)
    with np.errstate(over="ignore"):
        key = _mix(_mix(seed) ^ idx)
        bits = _mix(key + (w + np.uint64(1)) * _WORD_STEP)
    # top 53 bits, centred in their cell so 0 and 1 never occur
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


@dataclass(frozen=True)
class ParamDistribution:
    """Law shared by every weight and threshold of a sampled network."""

    kind: str = "normal"
    mean: float = 0.0
    stddev: float = 1.0
    lo: float = -1.0
    hi: float = 1.0
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("normal", "uniform", "grid"):
            raise ParameterError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "normal":
            if not (math.isfinite(self.mean) and math.isfinite(self.stddev) and self.stddev > 0):
                raise ParameterError("normal distribution needs finite mean and stddev > 0")
        elif self.kind == "uniform":
            if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
                raise ParameterError("uniform distribution needs finite lo < hi")
        else:
            vals = tuple(float(v) for v in self.values)
            object.__setattr__(self, "values", vals)
            if not vals or not all(math.isfinite(v) for v in vals):
                raise ParameterError("grid needs a non-empty list of finite values")
            if len(set(vals)) != len(vals):
                raise ParameterError("grid values must be distinct")

    @classmethod
    def normal(cls, mean=0.0, stddev=1.0):
        return cls("normal", mean=float(mean), stddev=float(stddev))

    @classmethod
    def uniform(cls, lo=-1.0, hi=1.0):
        return cls("uniform", lo=float(lo), hi=float(hi))

    @classmethod
    def grid(cls, values):
        return cls("grid", values=tuple(values))

    def transform(self, u):
        """Map uniforms in (0, 1) to draws from this law (inverse CDF)."""
        u = np.asarray(u, dtype=float)
        if self.kind == "normal":
            return self.mean + self.stddev * ndtri(u)
        if self.kind == "uniform":
            return self.lo + (self.hi - self.lo) * u
        vals = np.array(self.values)
        k = np.minimum((u * len(vals)).astype(np.intp), len(vals) - 1)
        return vals[k]

    def contains(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if self.kind == "normal":
            return np.isfinite(v)
        if self.kind == "uniform":
            return (v >= self.lo) & (v <= self.hi)
        return np.isin(v, self.values)

    def to_dict(self) -> dict:
        if self.kind == "normal":
            return {"kind": "normal", "mean": self.mean, "stddev": self.stddev}
        if self.kind == "uniform":
            return {"kind": "uniform", "lo": self.lo, "hi": self.hi}
        return {"kind": "grid", "values": list(self.values)}

    @classmethod
    def from_dict(cls, d: dict) -> ParamDistribution:
        d = dict(d)
        kind = d.pop("kind", None)
        allowed = {"normal": {"mean", "stddev"}, "uniform": {"lo", "hi"}, "grid": {"values"}}
        if kind not in allowed:
            raise ParameterError(f"unknown distribution kind {kind!r}")
        extra = set(d) - allowed[kind]
        if extra:
            raise ParameterError(f"unknown fields for {kind} distribution: {sorted(extra)}")
        if kind == "grid":
            if "values" not in d:
                raise ParameterError("grid distribution needs 'values'")
            return cls.grid(d["values"])
        return getattr(cls, kind)(**{k: float(v) for k, v in d.items()})


@dataclass(frozen=True)
class PoolEntry:
    arch: Architecture
    complexity: float


class ArchitecturePool:
    """Finite set of architectures with complexity penalties and a selection law."""

    def __init__(self, entries, selection_weights=None):
        entries = tuple(
            e if isinstance(e, PoolEntry) else PoolEntry(e[0], float(e[1])) for e in entries
        )
        if not entries:
            raise ParameterError("architecture pool is empty")
        ids = [e.arch.id for e in entries]
        if len(set(ids)) != len(ids):
            raise ParameterError(f"duplicate architecture ids in pool: {ids}")
        if len({e.arch.input_dim for e in entries}) != 1:
            raise ParameterError("all pool architectures must share the input dimension")
        for e in entries:
            if not (math.isfinite(e.complexity) and e.complexity >= 0):
                raise ParameterError(f"complexity of {e.arch.id!r} must be finite and >= 0")
        if selection_weights is None:
            p = np.full(len(entries), 1.0 / len(entries))
        else:
            p = np.asarray(selection_weights, dtype=float)
            if p.shape != (len(entries),) or np.any(p < 0) or not np.all(np.isfinite(p)):
                raise ParameterError("selection weights must be one non-negative number per entry")
            if abs(p.sum() - 1.0) > 1e-12:
                raise ParameterError(f"selection weights sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        self.entries = entries
        self.selection_weights = p
        self._cdf = np.cumsum(p)

    @classmethod
    def single(cls, arch: Architecture, complexity: float = 0.0) -> ArchitecturePool:
        return cls([PoolEntry(arch, complexity)])

    @classmethod
    def from_architectures(cls, archs, complexities=None, selection_weights=None):
        """Pool with ``k(c)`` defaulting to the neuron count of each architecture."""
        archs = list(archs)
        if complexities is None:
            complexities = [a.neuron_count for a in archs]
        return cls([PoolEntry(a, float(k)) for a, k in zip(archs, complexities)], selection_weights)

    def __len__(self):
        return len(self.entries)

    @property
    def architectures(self) -> tuple[Architecture, ...]:
        return tuple(e.arch for e in self.entries)

    @property
    def complexities(self) -> np.ndarray:
        return np.array([e.complexity for e in self.entries])

    @property
    def input_dim(self) -> int:
        return self.entries[0].arch.input_dim

    def slot_of(self, arch_id: str) -> int:
        for i, e in enumerate(self.entries):
            if e.arch.id == arch_id:
                return i
        raise KeyError(arch_id)

    def choose(self, u) -> np.ndarray:
        """Entry slots for uniforms ``u`` by inverse CDF of the selection weights."""
        slots = np.searchsorted(self._cdf, np.asarray(u, dtype=float), side="right")
        return np.minimum(slots, len(self.entries) - 1)


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    sample_index: int

    def __post_init__(self):
        if self.sample_index < 0:
            raise ParameterError("sample_index must be non-negative")


def sample_param_matrix(arch: Architecture, dist: ParamDistribution, master_seed: int, indices):
    """Flat parameters for each sample index, shape ``(len(indices), param_count)``."""
    u = stream_uniforms(master_seed, indices, np.arange(1, arch.param_count + 1))
    return dist.transform(u)


def sample_params(arch: Architecture, dist: ParamDistribution, seed: SeedSpec) -> NetworkParams:
    flat = sample_param_matrix(arch, dist, seed.master_seed, [seed.sample_index])[0]
    return NetworkParams.from_flat(arch, flat)


def sample_architecture_slots(pool: ArchitecturePool, master_seed: int, indices) -> np.ndarray:
    return pool.choose(stream_uniforms(master_seed, indices, [0])[:, 0])


def sample_architecture(pool: ArchitecturePool, seed: SeedSpec) -> Architecture:
    slot = sample_architecture_slots(pool, seed.master_seed, [seed.sample_index])[0]
    return pool.entries[slot].arch

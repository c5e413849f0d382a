"""Scoring sampled networks on a training set and turning scores into weights.

Scores are kept column-wise in a :class:`ScoreTable` (one row per sampled
network, ordered by sample index); :class:`ScoredNetwork` is the per-member
view used at API boundaries.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import TrainingSet
from .errors import AcceptanceTooLow, DimensionError, ParameterError
from .network import Architecture, NetworkParams, forward
from .sampling import (
    ArchitecturePool,
    ParamDistribution,
    sample_architecture_slots,
    sample_param_matrix,
)

__all__ = [
    "ScoredNetwork",
    "ScoreTable",
    "RejectionResult",
    "classify",
    "error_count",
    "error_counts",
    "score_table",
    "score_batch",
    "accept_zero_error",
    "gibbs_weights",
    "log_gibbs_weights",
    "DISPLAYED",
    "LIMIT_FORM",
]

DISPLAYED = "displayed"
LIMIT_FORM = "limit"

CHUNK = 8192


@dataclass(frozen=True)
class ScoredNetwork:
    params: NetworkParams
    architecture_id: str
    errors: int
    complexity: float
    energy: float
    sample_index: int


def classify(values):
    """Binary decision from network outputs; ties at 0.5 go to class 1."""
    return (np.asarray(values) >= 0.5).astype(np.int64)


def error_counts(arch: Architecture, params, ts: TrainingSet) -> np.ndarray:
    """Training errors of each row of an ``(n, param_count)`` parameter matrix."""
    if arch.input_dim != ts.input_dim:
        raise DimensionError(
            f"{arch.id!r} takes {arch.input_dim} inputs but the training set has {ts.input_dim}"
        )
    out = forward(arch, params, ts.X)
    return np.count_nonzero(classify(out) != ts.y[None, :], axis=1)


def error_count(params: NetworkParams, arch: Architecture, ts: TrainingSet) -> int:
    params.validate(arch)
    return int(error_counts(arch, params.flat()[None, :], ts)[0])


class ScoreTable:
    """Column store of scored networks.

    ``params[c]`` holds the flat parameters of the members drawn from pool
    slot ``c``, in member order; ``rows[c]`` are their positions in the table.
    """

    def __init__(self, architectures, sample_index, slot, errors, complexity, params):
        self.architectures = tuple(architectures)
        self.sample_index = np.asarray(sample_index, dtype=np.int64)
        self.slot = np.asarray(slot, dtype=np.intp)
        self.errors = np.asarray(errors, dtype=np.int64)
        self.complexity = np.asarray(complexity, dtype=float)
        self.params = tuple(np.asarray(p, dtype=float) for p in params)
        n = self.sample_index.shape[0]
        if not (self.slot.shape == self.errors.shape == self.complexity.shape == (n,)):
            raise DimensionError("score columns have different lengths")
        if len(self.params) != len(self.architectures):
            raise DimensionError("need one parameter block per architecture")
        self.rows = tuple(np.flatnonzero(self.slot == c) for c in range(len(self.architectures)))
        for c, (arch, block) in enumerate(zip(self.architectures, self.params)):
            if block.shape != (self.rows[c].shape[0], arch.param_count):
                raise DimensionError(f"parameter block for {arch.id!r} has shape {block.shape}")

    def __len__(self):
        return self.sample_index.shape[0]

    @property
    def energy(self) -> np.ndarray:
        return self.errors + self.complexity

    @classmethod
    def empty(cls, architectures):
        return cls(
            architectures, [], [], [], [],
            [np.empty((0, a.param_count)) for a in architectures],
        )

    @classmethod
    def concat(cls, tables):
        tables = list(tables)
        archs = tables[0].architectures
        return cls(
            archs,
            np.concatenate([t.sample_index for t in tables]),
            np.concatenate([t.slot for t in tables]),
            np.concatenate([t.errors for t in tables]),
            np.concatenate([t.complexity for t in tables]),
            [np.concatenate([t.params[c] for t in tables]) for c in range(len(archs))],
        )

    def take(self, positions) -> ScoreTable:
        """Sub-table of the given member positions (must be increasing)."""
        positions = np.asarray(positions)
        if positions.dtype == bool:
            positions = np.flatnonzero(positions)
        positions = positions.astype(np.intp)
        params = []
        for c in range(len(self.architectures)):
            keep = np.isin(self.rows[c], positions)
            params.append(self.params[c][keep])
        return ScoreTable(
            self.architectures,
            self.sample_index[positions],
            self.slot[positions],
            self.errors[positions],
            self.complexity[positions],
            params,
        )

    def prefix(self, n: int) -> ScoreTable:
        return self.take(np.arange(n))

    def param_vector(self, i: int) -> np.ndarray:
        c = self.slot[i]
        return self.params[c][np.searchsorted(self.rows[c], i)]

    def member(self, i: int) -> ScoredNetwork:
        arch = self.architectures[self.slot[i]]
        return ScoredNetwork(
            params=NetworkParams.from_flat(arch, self.param_vector(i)),
            architecture_id=arch.id,
            errors=int(self.errors[i]),
            complexity=float(self.complexity[i]),
            energy=float(self.errors[i] + self.complexity[i]),
            sample_index=int(self.sample_index[i]),
        )

    def members(self) -> list[ScoredNetwork]:
        return [self.member(i) for i in range(len(self))]

    def outputs(self, X) -> np.ndarray:
        """Member outputs at points ``X``, shape ``(n_members, q)``."""
        X = np.asarray(X, dtype=float)
        out = np.empty((len(self), X.shape[0]))
        for c, arch in enumerate(self.architectures):
            if self.rows[c].size:
                out[self.rows[c]] = forward(arch, self.params[c], X)
        return out


def _score_chunk(indices, pool, dist, ts, master_seed, penalize):
    archs = pool.architectures
    slots = sample_architecture_slots(pool, master_seed, indices)
    errors = np.empty(indices.shape[0], dtype=np.int64)
    params = []
    for c, arch in enumerate(archs):
        sel = np.flatnonzero(slots == c)
        p = sample_param_matrix(arch, dist, master_seed, indices[sel])
        if sel.size:
            errors[sel] = error_counts(arch, p, ts)
        params.append(p)
    k = pool.complexities[slots] if penalize else np.zeros(indices.shape[0])
    return ScoreTable(archs, indices, slots, errors, k, params)


def score_table(indices, pool: ArchitecturePool, dist: ParamDistribution, ts: TrainingSet,
                master_seed: int, penalize: bool = True, threads: int = 1) -> ScoreTable:
    """Sample and score the networks with the given sample indices.

    Each index draws an architecture from ``pool`` and its parameters from
    ``dist``; ``energy = m + k(c)`` when ``penalize`` is set, else ``m``.
    The result does not depend on ``threads``.
    """
    if pool.input_dim != ts.input_dim:
        raise DimensionError(
            f"pool architectures take {pool.input_dim} inputs, training set has {ts.input_dim}"
        )
    indices = np.asarray(indices, dtype=np.int64).ravel()
    if indices.size == 0:
        return ScoreTable.empty(pool.architectures)
    chunks = [indices[i:i + CHUNK] for i in range(0, indices.size, CHUNK)]
    work = lambda idx: _score_chunk(idx, pool, dist, ts, master_seed, penalize)
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, chunks))
    else:
        parts = [work(idx) for idx in chunks]
    return ScoreTable.concat(parts)


def score_batch(samples, pool, dist, ts, seed, penalize=True, threads=1) -> list[ScoredNetwork]:
    """List form of :func:`score_table` for an index range."""
    return score_table(samples, pool, dist, ts, seed, penalize, threads).members()


@dataclass
class RejectionResult:
    table: ScoreTable
    attempts: int

    @property
    def members(self) -> list[ScoredNetwork]:
        return self.table.members()

    @property
    def acceptance_rate(self) -> float:
        return len(self.table) / self.attempts


def accept_zero_error(arch, dist, ts, master_seed, target_count, max_attempts=10**7,
                      threads=1) -> RejectionResult:
    """Draw sample indices 0, 1, 2, ... and keep the first ``target_count``
    networks with no training errors.

    ``arch`` is an :class:`Architecture` or an :class:`ArchitecturePool`
    (architecture drawn per sample; no complexity term).  ``attempts`` counts
    indices up to and including the last accepted one.
    """
    if target_count < 1 or max_attempts < 1:
        raise ParameterError("target_count and max_attempts must be positive")
    pool = arch if isinstance(arch, ArchitecturePool) else ArchitecturePool.single(arch)
    accepted = []
    n_acc = 0
    start = 0
    block = CHUNK
    while n_acc < target_count and start < max_attempts:
        stop = min(start + block, max_attempts)
        tbl = score_table(np.arange(start, stop), pool, dist, ts, master_seed,
                          penalize=False, threads=threads)
        hits = np.flatnonzero(tbl.errors == 0)
        if hits.size:
            hits = hits[: target_count - n_acc]
            accepted.append(tbl.take(hits))
            n_acc += hits.size
        start = stop
        block = min(block * 2, 32 * CHUNK)
    if n_acc < target_count:
        raise AcceptanceTooLow(n_acc, max_attempts, target_count)
    table = ScoreTable.concat(accepted)
    return RejectionResult(table, int(table.sample_index[-1]) + 1)


def _check_beta(beta):
    beta = float(beta)
    if math.isnan(beta) or beta < 0:
        raise ParameterError(f"beta must be non-negative, got {beta}")
    return beta


def log_gibbs_weights(errors, complexity, beta, variant=DISPLAYED) -> np.ndarray:
    """Unnormalised log-weights; ``-inf`` marks members excluded at beta = inf."""
    beta = _check_beta(beta)
    m = np.asarray(errors, dtype=float)
    k = np.asarray(complexity, dtype=float)
    if variant not in (DISPLAYED, LIMIT_FORM):
        raise ParameterError(f"unknown exponent variant {variant!r}")
    if m.size == 0:
        raise ParameterError("cannot weight an empty ensemble")
    if math.isinf(beta):
        if variant == DISPLAYED:
            e = m + k
            return np.where(e == e.min(), 0.0, -np.inf)
        return np.where(m == m.min(), -k, -np.inf)
    if variant == DISPLAYED:
        return -beta * (m + k)
    return -beta * m - k


def _normalise(logw):
    w = np.exp(logw - logw.max())
    return w / w.sum()


def gibbs_weights(members, beta, variant=DISPLAYED) -> np.ndarray:
    """Normalised Gibbs weights ``exp(-beta * energy)`` of scored networks.

    ``members`` is a list of :class:`ScoredNetwork` or a :class:`ScoreTable`.
    With ``variant="limit"`` the complexity enters as ``exp(-k)`` outside the
    temperature.  ``beta=inf`` spreads the mass uniformly over the
    minimum-energy members.
    """
    if isinstance(members, ScoreTable):
        m, k = members.errors, members.complexity
    else:
        members = list(members)
        m = np.array([s.errors for s in members], dtype=float)
        k = np.array([s.complexity for s in members], dtype=float)
    return _normalise(log_gibbs_weights(m, k, beta, variant))

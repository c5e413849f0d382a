"""Weighted ensembles of random networks and their averaged output.

An ensemble is a :class:`~gibbsnet.selection.ScoreTable` plus a probability
vector over its members.  Members are always ordered by sample index, so the
first ``n`` members of a larger ensemble built from the same seed are exactly
the ``n``-member ensemble (used by :func:`convergence_curve`).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .config import GIBBS, MIXED_ARCH, MODES, ZERO_ERROR, RunConfig, format_beta, parse_beta
from .data import TrainingSet
from .errors import ConfigError, DimensionError, DomainError
from .network import Architecture, NetworkParams
from .selection import (
    DISPLAYED,
    ScoredNetwork,
    ScoreTable,
    accept_zero_error,
    gibbs_weights,
    score_table,
)

__all__ = [
    "GibbsEnsemble",
    "EnsembleEstimate",
    "build",
    "from_members",
    "reweight",
    "prefix",
    "evaluate",
    "evaluate_many",
    "predict",
    "architecture_mass",
    "convergence_curve",
    "save_ensemble",
    "load_ensemble",
    "FORMAT_VERSION",
]

FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class GibbsEnsemble:
    table: ScoreTable
    weights: np.ndarray
    beta: float
    mode: str
    master_seed: int
    training_fingerprint: str
    exponent_variant: str = DISPLAYED
    attempts: int | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (len(self.table),) or w.size == 0:
            raise ConfigError("need exactly one weight per member")
        if np.any(w < 0) or not np.all(np.isfinite(w)) or abs(math.fsum(w) - 1.0) > 1e-12:
            raise ConfigError("ensemble weights must form a probability vector")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == ZERO_ERROR:
            if np.any(self.table.errors != 0):
                raise ConfigError("zero-error ensemble contains members with training errors")
            if np.any(w != w[0]):
                raise ConfigError("zero-error ensemble must be uniformly weighted")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.table)

    @property
    def members(self) -> list[ScoredNetwork]:
        return self.table.members()

    @property
    def architectures(self) -> tuple[Architecture, ...]:
        return self.table.architectures

    @property
    def input_dim(self) -> int:
        return self.table.architectures[0].input_dim

    @property
    def acceptance_rate(self) -> float | None:
        return None if self.attempts is None else len(self) / self.attempts


@dataclass(frozen=True)
class EnsembleEstimate:
    value: float
    std_error: float
    n_effective: float


def _check_dims(config: RunConfig, ts: TrainingSet):
    if config.pool.input_dim != ts.input_dim:
        raise DimensionError(
            f"pool architectures take {config.pool.input_dim} inputs, "
            f"training set has {ts.input_dim}"
        )


def build(ts: TrainingSet, config: RunConfig, threads: int = 1) -> GibbsEnsemble:
    """Sample, score and weight ``config.n`` networks.

    ``zero_error`` keeps the first ``n`` error-free networks (rejection) with
    equal weights; ``gibbs`` weights ``n`` unselected networks by
    ``exp(-beta m)``; ``mixed_arch`` adds the pool's complexity ``k(c)`` to the
    energy.
    """
    _check_dims(config, ts)
    common = dict(
        master_seed=config.master_seed,
        training_fingerprint=ts.fingerprint(),
        exponent_variant=config.exponent_variant,
    )
    if config.mode == ZERO_ERROR:
        res = accept_zero_error(config.pool, config.distribution, ts, config.master_seed,
                                config.n, config.max_attempts, threads=threads)
        n = len(res.table)
        return GibbsEnsemble(res.table, np.full(n, 1.0 / n), math.inf, ZERO_ERROR,
                             attempts=res.attempts, **common)
    table = score_table(np.arange(config.n), config.pool, config.distribution, ts,
                        config.master_seed, penalize=config.mode == MIXED_ARCH,
                        threads=threads)
    w = gibbs_weights(table, config.beta, config.exponent_variant)
    return GibbsEnsemble(table, w, config.beta, config.mode, **common)


def from_members(table: ScoreTable, beta: float, mode: str = GIBBS,
                 exponent_variant: str = DISPLAYED, master_seed: int = 0,
                 training_fingerprint: str = "") -> GibbsEnsemble:
    """Ensemble over an existing member table, weights computed at ``beta``."""
    if mode == ZERO_ERROR:
        w = np.full(len(table), 1.0 / len(table))
    else:
        w = gibbs_weights(table, beta, exponent_variant)
    return GibbsEnsemble(table, w, beta, mode, master_seed, training_fingerprint,
                         exponent_variant)


def reweight(ens: GibbsEnsemble, beta: float) -> GibbsEnsemble:
    """Same members, Gibbs weights recomputed at a new inverse temperature."""
    if ens.mode == ZERO_ERROR:
        raise ConfigError("a zero-error ensemble has no temperature to change")
    beta = parse_beta(beta)
    w = gibbs_weights(ens.table, beta, ens.exponent_variant)
    return replace(ens, weights=w, beta=beta)


def prefix(ens: GibbsEnsemble, n: int) -> GibbsEnsemble:
    """The ensemble of the first ``n`` members, reweighted among themselves."""
    if not 1 <= n <= len(ens):
        raise ValueError(f"prefix length {n} outside 1..{len(ens)}")
    table = ens.table.prefix(n)
    if ens.mode == ZERO_ERROR:
        w = np.full(n, 1.0 / n)
        attempts = int(table.sample_index[-1]) + 1
    else:
        w = gibbs_weights(table, ens.beta, ens.exponent_variant)
        attempts = None
    return replace(ens, table=table, weights=w, attempts=attempts)


def _as_points(ens, X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != ens.input_dim:
        raise DimensionError(
            f"ensemble takes {ens.input_dim}-dimensional points, got shape {X.shape}"
        )
    if not np.all(np.isfinite(X)):
        raise DomainError("points must be finite")
    return X


def weighted_estimate(w, F):
    """Weighted mean and its standard error for member outputs ``F`` (n, q)."""
    # rescaled so equal weights become exactly 1 and the mean is count / n
    u = w / w.max()
    # den has the same shape and layout as the numerator, so both reductions add
    # in the same order: unanimous outputs give exactly 1.0 (or 0.0)
    den = (u[:, None] * np.ones_like(F)).sum(axis=0)
    value = (u[:, None] * F).sum(axis=0) / den
    se = np.sqrt(np.sum((w[:, None] * (F - value[None, :])) ** 2, axis=0))
    return value, se


def evaluate_many(ens: GibbsEnsemble, X):
    """Values and standard errors at every row of ``X``."""
    X = _as_points(ens, X)
    F = ens.table.outputs(X)
    return weighted_estimate(ens.weights, F)


def evaluate(ens: GibbsEnsemble, x) -> EnsembleEstimate:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError("evaluate takes a single point")
    value, se = evaluate_many(ens, x)
    n_eff = 1.0 / float(np.sum(ens.weights ** 2))
    return EnsembleEstimate(float(value[0]), float(se[0]), n_eff)


def predict(ens: GibbsEnsemble, x) -> int:
    return int(evaluate(ens, x).value >= 0.5)


def predict_many(ens: GibbsEnsemble, X) -> np.ndarray:
    value, _ = evaluate_many(ens, X)
    return (value >= 0.5).astype(np.int64)


def accuracy(ens: GibbsEnsemble, ts: TrainingSet) -> float:
    return float(np.mean(predict_many(ens, ts.X) == ts.y))


def architecture_mass(ens: GibbsEnsemble) -> dict[str, float]:
    """Total weight carried by each architecture of the pool."""
    return {
        arch.id: math.fsum(ens.weights[ens.table.rows[c]])
        for c, arch in enumerate(ens.architectures)
    }


def mean_energy(ens: GibbsEnsemble) -> float:
    return math.fsum(ens.weights * ens.table.energy)


def energy_histogram(ens: GibbsEnsemble) -> dict[int, int]:
    """Member count per training-error value."""
    m, counts = np.unique(ens.table.errors, return_counts=True)
    return {int(a): int(b) for a, b in zip(m, counts)}


def convergence_curve(ts: TrainingSet, config: RunConfig, n_schedule, probe_points,
                      threads: int = 1):
    """Estimates at each probe for nested prefix ensembles of growing size.

    Returns a list of ``(n, probe_index, value, std_error)`` rows.  One
    ensemble of ``max(n_schedule)`` members is built and every smaller size
    uses its leading members, so the curve carries no resampling noise.
    """
    schedule = [int(n) for n in n_schedule]
    if not schedule:
        raise ValueError("empty schedule")
    if any(b <= a for a, b in zip(schedule, schedule[1:])) or schedule[0] < 1:
        raise ValueError(f"schedule must be increasing positive integers, got {schedule}")
    full = build(ts, replace(config, n=schedule[-1]), threads=threads)
    P = _as_points(full, probe_points)
    F = full.table.outputs(P)
    rows = []
    for n in schedule:
        sub = prefix(full, n)
        value, se = weighted_estimate(sub.weights, F[:n])
        rows.extend((n, j, float(value[j]), float(se[j])) for j in range(P.shape[0]))
    return rows


# -- artifact file -----------------------------------------------------------

def _member_record(table: ScoreTable, i: int, weight: float) -> dict:
    arch = table.architectures[table.slot[i]]
    p = NetworkParams.from_flat(arch, table.param_vector(i))
    return {
        "sample_index": int(table.sample_index[i]),
        "architecture_id": arch.id,
        "weights": [w.tolist() for w in p.weights],
        "thresholds": [t.tolist() for t in p.thresholds],
        "m": int(table.errors[i]),
        "k": float(table.complexity[i]),
        "energy": float(table.errors[i] + table.complexity[i]),
        "weight": float(weight),
    }


def ensemble_to_dict(ens: GibbsEnsemble) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "mode": ens.mode,
        "beta": format_beta(ens.beta),
        "exponent_variant": ens.exponent_variant,
        "master_seed": ens.master_seed,
        "training_fingerprint": ens.training_fingerprint,
        "attempts": ens.attempts,
        "architectures": [a.to_dict() for a in ens.architectures],
        "members": [_member_record(ens.table, i, w) for i, w in enumerate(ens.weights)],
    }


def ensemble_from_dict(doc: dict) -> GibbsEnsemble:
    try:
        if doc.get("format_version") != FORMAT_VERSION:
            raise ConfigError(f"unsupported artifact format {doc.get('format_version')!r}")
        archs = [Architecture.from_dict(a) for a in doc["architectures"]]
        slot_of = {a.id: c for c, a in enumerate(archs)}
        if len(slot_of) != len(archs):
            raise ConfigError("duplicate architecture ids in artifact")
        idx, slots, m, k, w = [], [], [], [], []
        params = [[] for _ in archs]
        for rec in doc["members"]:
            c = slot_of[rec["architecture_id"]]
            p = NetworkParams(rec["architecture_id"],
                              tuple(np.array(x, dtype=float) for x in rec["weights"]),
                              tuple(np.array(x, dtype=float) for x in rec["thresholds"]))
            p.validate(archs[c])
            if int(rec["m"]) < 0 or rec["m"] != int(rec["m"]):
                raise ConfigError("error counts must be non-negative integers")
            if rec["energy"] != rec["m"] + rec["k"] or rec["k"] < 0:
                raise ConfigError("member energy must equal m + k with k >= 0")
            idx.append(rec["sample_index"])
            slots.append(c)
            m.append(rec["m"])
            k.append(rec["k"])
            w.append(rec["weight"])
            params[c].append(p.flat())
        if not idx:
            raise ConfigError("artifact has no members")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ConfigError("members must be ordered by sample_index")
        blocks = [np.array(ps).reshape(len(ps), a.param_count) for ps, a in zip(params, archs)]
        table = ScoreTable(archs, idx, slots, m, k, blocks)
        return GibbsEnsemble(
            table,
            np.array(w, dtype=float),
            parse_beta(doc["beta"]),
            doc["mode"],
            int(doc["master_seed"]),
            str(doc["training_fingerprint"]),
            doc.get("exponent_variant", DISPLAYED),
            doc.get("attempts"),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed ensemble artifact: {exc!r}") from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid ensemble artifact: {exc}") from None


def save_ensemble(ens: GibbsEnsemble, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ensemble_to_dict(ens), fh, separators=(",", ":"))
        fh.write("\n")


def load_ensemble(path) -> GibbsEnsemble:
    """Read an artifact written by :func:`save_ensemble`, validating every invariant."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return ensemble_from_dict(doc)

"""Exact Gibbs averages by enumerating every network on a parameter grid.

With every weight and threshold restricted to a finite grid under the uniform
measure (the law of ``ParamDistribution.grid``) the Gibbs average is a finite
sum.  Enumeration tallies, for each training-error level ``m``, the number of
networks ``C[m]`` and the summed outputs ``S[m]`` at the probes; all
temperature dependence is then applied to the ``q + 1`` level totals.  For
threshold networks ``C`` and ``S`` are integer counts, so the result does not
depend on enumeration order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import TrainingSet
from .errors import DimensionError, ParameterError, ResourceError
from .network import Architecture, forward
from .selection import DISPLAYED, LIMIT_FORM, classify

__all__ = [
    "GridSpec",
    "LevelTable",
    "level_table",
    "exact_average",
    "exact_mixed_average",
    "exact_architecture_mass",
    "exact_zero_error_average",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 10**7
BLOCK = 1 << 15


@dataclass(frozen=True)
class GridSpec:
    arch: Architecture
    value_grid: tuple[float, ...]
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        vals = tuple(float(v) for v in self.value_grid)
        object.__setattr__(self, "value_grid", vals)
        if not vals or len(set(vals)) != len(vals) or not all(math.isfinite(v) for v in vals):
            raise ParameterError("grid values must be distinct finite numbers")
        if self.enumeration_size > self.cap:
            raise ResourceError(
                f"{len(vals)}^{self.arch.param_count} = {self.enumeration_size} networks "
                f"exceeds the enumeration cap {self.cap}"
            )

    @property
    def enumeration_size(self) -> int:
        return len(self.value_grid) ** self.arch.param_count

    def block(self, start: int, stop: int) -> np.ndarray:
        """Parameter rows for enumeration indices ``start..stop-1`` (mixed radix)."""
        g = len(self.value_grid)
        idx = np.arange(start, stop, dtype=np.int64)
        digits = np.empty((idx.size, self.arch.param_count), dtype=np.intp)
        for p in range(self.arch.param_count):
            digits[:, p] = idx % g
            idx = idx // g
        return np.asarray(self.value_grid)[digits]


@dataclass(frozen=True)
class LevelTable:
    """Per error level ``m``: network count and summed output at each probe."""

    counts: np.ndarray   # (q + 1,)
    sums: np.ndarray     # (q + 1, n_probes)
    size: int


def level_table(spec: GridSpec, ts: TrainingSet, probes) -> LevelTable:
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    if spec.arch.input_dim != ts.input_dim or probes.shape[1] != ts.input_dim:
        raise DimensionError("grid architecture, training set and probes must share dimension")
    q = len(ts)
    counts = np.zeros(q + 1, dtype=np.int64)
    sums = np.zeros((q + 1, probes.shape[0]))
    pts = np.vstack([ts.X, probes])
    for start in range(0, spec.enumeration_size, BLOCK):
        params = spec.block(start, min(start + BLOCK, spec.enumeration_size))
        out = forward(spec.arch, params, pts)
        m = np.count_nonzero(classify(out[:, :q]) != ts.y[None, :], axis=1)
        counts += np.bincount(m, minlength=q + 1)
        for j in range(probes.shape[0]):
            sums[:, j] += np.bincount(m, weights=out[:, q + j], minlength=q + 1)
    return LevelTable(counts, sums, spec.enumeration_size)


def _check_beta(beta):
    beta = float(beta)
    if math.isnan(beta) or beta < 0:
        raise ParameterError(f"beta must be non-negative, got {beta}")
    return beta


def _mixture(tables, complexities, pool_weights, beta, variant):
    """Relative Gibbs mass ``den[c]`` and output mass ``num[c, j]`` per architecture."""
    beta = _check_beta(beta)
    if variant not in (DISPLAYED, LIMIT_FORM):
        raise ParameterError(f"unknown exponent variant {variant!r}")
    p = np.asarray(pool_weights, dtype=float)
    if p.shape != (len(tables),) or np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise ParameterError("pool weights must be a probability vector over the grids")
    # candidate (architecture, level) cells with non-zero prior mass
    cells = []
    for c, (t, k) in enumerate(zip(tables, complexities)):
        if p[c] == 0:
            continue
        for m in np.flatnonzero(t.counts):
            cells.append((c, int(m), float(k)))
    if math.isinf(beta):
        if variant == DISPLAYED:
            best = min(m + k for _, m, k in cells)
            keep = [(c, m, 0.0) for c, m, k in cells if m + k == best]
        else:
            best = min(m for _, m, _ in cells)
            keep = [(c, m, -k) for c, m, k in cells if m == best]
    else:
        if variant == DISPLAYED:
            keep = [(c, m, -beta * (m + k)) for c, m, k in cells]
        else:
            keep = [(c, m, -beta * m - k) for c, m, k in cells]
    top = max(a for _, _, a in keep)
    n_probes = tables[0].sums.shape[1]
    den_terms = [[] for _ in tables]
    num_terms = [[[] for _ in range(n_probes)] for _ in tables]
    for c, m, a in keep:
        t = tables[c]
        # p_c / |grid_c| * exp(a - top): prior probability of one grid network
        scale = p[c] / t.size * math.exp(a - top)
        den_terms[c].append(scale * t.counts[m])
        for j in range(n_probes):
            num_terms[c][j].append(scale * t.sums[m, j])
    den = np.array([math.fsum(d) for d in den_terms])
    num = np.array([[math.fsum(v) for v in row] for row in num_terms])
    return den, num


def _result(value, probes):
    return float(value[0]) if np.asarray(probes).ndim == 1 else value


def exact_mixed_average(specs, pool_weights, ts: TrainingSet, beta, x, variant=DISPLAYED):
    """Exact Gibbs average over a mixture of architectures.

    ``specs`` is a list of ``(GridSpec, k)`` pairs and ``pool_weights`` the
    probability of drawing each.  Returns a float for a single point ``x`` or
    an array for a ``(n_probes, N)`` batch.
    """
    specs = list(specs)
    if not specs:
        raise ParameterError("need at least one grid spec")
    tables = [level_table(s, ts, x) for s, _ in specs]
    den, num = _mixture(tables, [k for _, k in specs], pool_weights, beta, variant)
    return _result(num.sum(axis=0) / den.sum(), x)


def exact_average(spec: GridSpec, ts: TrainingSet, beta, k_c: float, x, variant=DISPLAYED):
    """Exact Gibbs average of one architecture under the uniform grid measure."""
    return exact_mixed_average([(spec, k_c)], [1.0], ts, beta, x, variant)


def exact_architecture_mass(specs, pool_weights, ts: TrainingSet, beta, variant=DISPLAYED):
    """Exact share of the Gibbs measure carried by each architecture."""
    specs = list(specs)
    probe = ts.X[:1]
    tables = [level_table(s, ts, probe) for s, _ in specs]
    den, _ = _mixture(tables, [k for _, k in specs], pool_weights, beta, variant)
    total = den.sum()
    return {s.arch.id: float(d / total) for (s, _), d in zip(specs, den)}


def exact_zero_error_average(specs, pool_weights, ts: TrainingSet, x):
    """Average over error-free grid networks only (the rejection measure)."""
    if isinstance(specs, GridSpec):
        specs = [specs]
        pool_weights = [1.0]
    specs = [s if isinstance(s, GridSpec) else s[0] for s in specs]
    tables = [level_table(s, ts, x) for s in specs]
    p = np.asarray(pool_weights, dtype=float)
    den = math.fsum(p[c] / t.size * t.counts[0] for c, t in enumerate(tables))
    if den == 0:
        raise ParameterError("no network on the grid classifies the training set without error")
    n_probes = tables[0].sums.shape[1]
    num = np.array([
        math.fsum(p[c] / t.size * t.sums[0, j] for c, t in enumerate(tables))
        for j in range(n_probes)
    ])
    return _result(num / den, x)

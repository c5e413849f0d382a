"""Layered feedforward networks of threshold and logistic neurons.

A network is stored as a flat parameter vector so that whole ensembles can be
evaluated as one ``(n_members, param_count)`` matrix.  The flat layout is,
layer by layer, the row-major ``(width, fan_in)`` weight matrix followed by the
``width`` thresholds of that layer.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .errors import DimensionError, DomainError, ParameterError

__all__ = [
    "Activation",
    "Architecture",
    "NetworkParams",
    "eval_neuron",
    "eval_network",
    "forward",
    "layer_outputs",
]


class Activation(str, enum.Enum):
    HARD = "hard"
    SMOOTH = "smooth"

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self is Activation.HARD:
            # sgn(0) = 1
            return np.where(z >= 0.0, 1.0, 0.0)
        return expit(z)


@dataclass(frozen=True)
class Architecture:
    """Fully connected layered network with scalar output.

    ``layers`` lists the widths of every layer including the output layer,
    so ``(1,)`` is a single neuron and ``(K, 1)`` a double-layer network with
    ``K`` hidden neurons.
    """

    id: str
    input_dim: int
    layers: tuple[int, ...]
    activation: Activation = Activation.HARD

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(int(w) for w in self.layers))
        object.__setattr__(self, "activation", Activation(self.activation))
        if not isinstance(self.id, str) or not self.id:
            raise ParameterError("architecture id must be a non-empty string")
        if int(self.input_dim) < 1:
            raise ParameterError(f"input_dim must be positive, got {self.input_dim}")
        object.__setattr__(self, "input_dim", int(self.input_dim))
        if not self.layers:
            raise ParameterError("an architecture needs at least one layer")
        if any(w < 1 for w in self.layers):
            raise ParameterError(f"layer widths must be positive, got {self.layers}")
        if self.layers[-1] != 1:
            raise ParameterError("the last layer must have width 1")

    @property
    def fan_ins(self) -> tuple[int, ...]:
        return (self.input_dim,) + self.layers[:-1]

    @property
    def neuron_count(self) -> int:
        return sum(self.layers)

    @property
    def param_count(self) -> int:
        return sum((d + 1) * h for d, h in zip(self.fan_ins, self.layers))

    def layer_slices(self):
        """Yield ``(weight_slice, threshold_slice, fan_in, width)`` per layer."""
        pos = 0
        for d, h in zip(self.fan_ins, self.layers):
            w = slice(pos, pos + d * h)
            t = slice(pos + d * h, pos + d * h + h)
            pos += (d + 1) * h
            yield w, t, d, h

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "input_dim": self.input_dim,
            "layers": list(self.layers),
            "activation": self.activation.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Architecture:
        extra = set(d) - {"id", "input_dim", "layers", "activation"}
        if extra:
            raise ParameterError(f"unknown architecture fields: {sorted(extra)}")
        try:
            return cls(d["id"], d["input_dim"], d["layers"], d.get("activation", "hard"))
        except KeyError as exc:
            raise ParameterError(f"architecture record missing field {exc}") from None


@dataclass(frozen=True, eq=False)
class NetworkParams:
    """Weights and thresholds of one network, one entry per layer."""

    architecture_id: str
    weights: tuple[np.ndarray, ...]
    thresholds: tuple[np.ndarray, ...] = field(default=())

    def __eq__(self, other):
        if not isinstance(other, NetworkParams):
            return NotImplemented
        return (
            self.architecture_id == other.architecture_id
            and len(self.weights) == len(other.weights)
            and all(np.array_equal(a, b) for a, b in zip(self.weights, other.weights))
            and all(np.array_equal(a, b) for a, b in zip(self.thresholds, other.thresholds))
        )

    def validate(self, arch: Architecture) -> None:
        if self.architecture_id != arch.id:
            raise DimensionError(
                f"parameters belong to {self.architecture_id!r}, not {arch.id!r}"
            )
        if len(self.weights) != len(arch.layers) or len(self.thresholds) != len(arch.layers):
            raise DimensionError("number of parameter layers does not match architecture")
        for w, t, d, h in zip(self.weights, self.thresholds, arch.fan_ins, arch.layers):
            if np.shape(w) != (h, d) or np.shape(t) != (h,):
                raise DimensionError(
                    f"layer expects weights {(h, d)} and thresholds {(h,)}, "
                    f"got {np.shape(w)} and {np.shape(t)}"
                )
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(t))):
                raise DomainError("network parameters must be finite")

    def flat(self) -> np.ndarray:
        parts = []
        for w, t in zip(self.weights, self.thresholds):
            parts.append(np.asarray(w, dtype=float).ravel())
            parts.append(np.asarray(t, dtype=float).ravel())
        return np.concatenate(parts)

    @classmethod
    def from_flat(cls, arch: Architecture, vector) -> NetworkParams:
        vector = np.asarray(vector, dtype=float)
        if vector.shape != (arch.param_count,):
            raise DimensionError(
                f"{arch.id!r} needs {arch.param_count} parameters, got shape {vector.shape}"
            )
        weights, thresholds = [], []
        for ws, ts, d, h in arch.layer_slices():
            weights.append(vector[ws].reshape(h, d).copy())
            thresholds.append(vector[ts].copy())
        return cls(arch.id, tuple(weights), tuple(thresholds))


def _preactivation(W, theta, a):
    """``sum_j W[..., j] * a[..., j] - theta`` with a fixed summation order.

    W: (n, h, d); theta: (n, h); a: (n or 1, q, d)  ->  (n, q, h).

    Accumulating one input coordinate at a time keeps every entry's rounding
    independent of batch size, so a network evaluates bit-identically alone or
    inside any ensemble chunk.
    """
    s = W[:, None, :, 0] * a[:, :, None, 0]
    for j in range(1, W.shape[-1]):
        s = s + W[:, None, :, j] * a[:, :, None, j]
    return s - theta[:, None, :]


def layer_outputs(arch: Architecture, params, X) -> list[np.ndarray]:
    """Activations of every layer for a batch of networks on a batch of points.

    ``params`` is ``(n, param_count)`` and ``X`` is ``(q, input_dim)``; entry
    ``l`` of the result has shape ``(n, q, layers[l])``.
    """
    params = np.asarray(params, dtype=float)
    X = np.asarray(X, dtype=float)
    if params.ndim != 2 or params.shape[1] != arch.param_count:
        raise DimensionError(
            f"{arch.id!r} needs (n, {arch.param_count}) parameters, got {params.shape}"
        )
    if X.ndim != 2 or X.shape[1] != arch.input_dim:
        raise DimensionError(
            f"{arch.id!r} takes {arch.input_dim}-dimensional inputs, got {X.shape}"
        )
    n = params.shape[0]
    a = X[None, :, :]
    outs = []
    for ws, ts, d, h in arch.layer_slices():
        W = params[:, ws].reshape(n, h, d)
        a = arch.activation(_preactivation(W, params[:, ts], a))
        outs.append(a)
    return outs


def forward(arch: Architecture, params, X) -> np.ndarray:
    """Outputs of ``n`` networks at ``q`` points, shape ``(n, q)``."""
    return layer_outputs(arch, params, X)[-1][..., 0]


def _as_point(x, dim):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != dim:
        raise DimensionError(f"expected a point of length {dim}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError("input coordinates must be finite")
    return x


def eval_neuron(weights, threshold, inputs, activation=Activation.HARD) -> float:
    """``activation(sum_i w_i x_i - threshold)`` for a single neuron."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1:
        raise DimensionError("weights must be a vector")
    x = _as_point(inputs, w.shape[0])
    theta = float(threshold)
    if not (np.all(np.isfinite(w)) and np.isfinite(theta)):
        raise DomainError("neuron parameters must be finite")
    z = _preactivation(w[None, None, :], np.array([[theta]]), x[None, None, :])
    return float(Activation(activation)(z)[0, 0, 0])


def eval_network(params: NetworkParams, arch: Architecture, x) -> float:
    params.validate(arch)
    x = _as_point(x, arch.input_dim)
    return float(forward(arch, params.flat()[None, :], x[None, :])[0, 0])

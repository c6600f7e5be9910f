"""Rectified MLPs on the plane: affine layers, ReLU, a sign head, and staged forms.

A network maps ``R^2 -> {+1, -1}``.  Hidden layers are each followed by a
ReLU.  An optional ``readout`` affine map (no ReLU) sits between the last
hidden layer and the head, so that a stack ending in a wide layer can still
feed the two-input head ``sign(a*x0 + b*x1 + c)``.

Point arguments accept a single point ``(x, y)`` or an ``(n, 2)`` array; the
result is a scalar or an array accordingly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, StructuralError

ActivationPattern = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class AffineLayer:
    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        b = np.array(self.bias, dtype=float, copy=True).reshape(-1)
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise StructuralError(f"weights must be a non-empty matrix, got shape {w.shape}")
        if b.shape != (w.shape[0],):
            raise StructuralError(f"bias length {b.shape} does not match {w.shape[0]} rows")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise DomainError("layer parameters must be finite")
        w.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return x @ self.weights.T + self.bias

    def then(self, other: "AffineLayer") -> "AffineLayer":
        """Composition ``other(self(x))``."""
        if other.in_dim != self.out_dim:
            raise StructuralError(f"cannot feed {self.out_dim} outputs into {other.in_dim} inputs")
        return AffineLayer(other.weights @ self.weights, other.weights @ self.bias + other.bias)

    @classmethod
    def identity(cls, n: int = 2) -> "AffineLayer":
        return cls(np.eye(n), np.zeros(n))


@dataclass(frozen=True)
class OutputHead:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in "abc":
            object.__setattr__(self, name, float(getattr(self, name)))
        if not np.all(np.isfinite([self.a, self.b, self.c])):
            raise DomainError("head coefficients must be finite")
        if self.a == 0.0 and self.b == 0.0:
            raise DomainError("head needs (a, b) != (0, 0)")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.a * x[..., 0] + self.b * x[..., 1] + self.c

    def scaled(self, lam: float) -> "OutputHead":
        return OutputHead(lam * self.a, lam * self.b, lam * self.c)


@dataclass(frozen=True, eq=False)
class MlpNetwork:
    hidden_layers: tuple[AffineLayer, ...]
    head: OutputHead
    readout: AffineLayer | None = None

    def __post_init__(self):
        layers = tuple(self.hidden_layers)
        object.__setattr__(self, "hidden_layers", layers)
        dim = 2
        for i, layer in enumerate(layers):
            if layer.in_dim != dim:
                raise StructuralError(f"layer {i} expects {layer.in_dim} inputs, gets {dim}")
            dim = layer.out_dim
        if self.readout is not None:
            if self.readout.in_dim != dim:
                raise StructuralError(f"readout expects {self.readout.in_dim} inputs, gets {dim}")
            dim = self.readout.out_dim
        if dim != 2:
            raise StructuralError(f"head consumes 2 values, stack produces {dim}")

    @property
    def depth(self) -> int:
        """Number of hidden ReLU layers."""
        return len(self.hidden_layers)


class ReluStage:
    """Elementwise ReLU; a stateless marker inside a staged network."""

    def __repr__(self):
        return "ReluStage()"

    def __eq__(self, other):
        return isinstance(other, ReluStage)

    def __hash__(self):
        return hash(ReluStage)


RELU = ReluStage()


@dataclass(frozen=True, eq=False)
class LinearStage:
    layer: AffineLayer


Stage = Union[LinearStage, ReluStage]


@dataclass(frozen=True, eq=False)
class StagedNetwork:
    """Uncollapsed stage sequence; ``head`` may be ``None`` for a bare prefix."""

    stages: tuple[Stage, ...]
    head: OutputHead | None = None
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        stages = tuple(self.stages)
        object.__setattr__(self, "stages", stages)
        dim = 2
        for i, st in enumerate(stages):
            if isinstance(st, LinearStage):
                if st.layer.in_dim != dim:
                    raise StructuralError(f"stage {i} expects {st.layer.in_dim} inputs, gets {dim}")
                dim = st.layer.out_dim
            elif not isinstance(st, ReluStage):
                raise StructuralError(f"unknown stage {st!r}")
        if dim != 2:
            raise StructuralError(f"staged network must end with 2 values, got {dim}")

    def with_head(self, head: OutputHead | None) -> "StagedNetwork":
        return StagedNetwork(self.stages, head, self.labels)


def _points(p) -> tuple[np.ndarray, bool]:
    x = np.asarray(p, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[-1] != 2:
        raise DomainError(f"points must have 2 coordinates, got shape {x.shape}")
    return x, single


def hidden_output(net: MlpNetwork, pts: np.ndarray) -> np.ndarray:
    """The two values fed to the head, for an ``(n, 2)`` batch."""
    x = pts
    for layer in net.hidden_layers:
        x = np.maximum(layer(x), 0.0)
    if net.readout is not None:
        x = net.readout(x)
    return x


def evaluate_pre_sign(net: MlpNetwork, p):
    """Head value ``a*x0 + b*x1 + c`` before the sign."""
    x, single = _points(p)
    v = net.head(hidden_output(net, x))
    return float(v[0]) if single else v


def sign_class(value):
    """+1 for strictly positive values, -1 otherwise (ties go to -1)."""
    out = np.where(np.asarray(value) > 0, 1, -1)
    return int(out) if out.ndim == 0 else out


def classify(net: MlpNetwork, p):
    return sign_class(evaluate_pre_sign(net, p))


def activation_bits(net: MlpNetwork, pts: np.ndarray) -> list[np.ndarray]:
    """Per-layer boolean arrays ``(n, width)``: neuron strictly active."""
    x, _ = _points(pts)
    out = []
    for layer in net.hidden_layers:
        z = layer(x)
        out.append(z > 0)
        x = np.maximum(z, 0.0)
    return out


def activation_pattern(net: MlpNetwork, p) -> ActivationPattern:
    x, single = _points(p)
    if not single:
        raise DomainError("activation_pattern takes a single point; use activation_bits for batches")
    return tuple(tuple(int(b) for b in bits[0]) for bits in activation_bits(net, x))


def pattern_strings(pattern: ActivationPattern) -> list[str]:
    return ["".join(str(b) for b in layer) for layer in pattern]


def run_stages(staged: StagedNetwork, p, trace: bool = False):
    """Push points through the stages; with ``trace`` return every intermediate array."""
    x, single = _points(p)
    seen = [x]
    for st in staged.stages:
        x = np.maximum(x, 0.0) if isinstance(st, ReluStage) else st.layer(x)
        seen.append(x)
    if trace:
        return [s[0] if single else s for s in seen]
    return x[0] if single else x


def evaluate_staged(staged: StagedNetwork, p):
    if staged.head is None:
        raise DomainError("staged network has no head")
    x, single = _points(p)
    v = staged.head(run_stages(staged, x))
    return float(v[0]) if single else v


def collapse(staged: StagedNetwork) -> MlpNetwork:
    """Merge every run of consecutive linear stages into one affine layer.

    A trailing run after the last ReLU becomes the network's readout.
    """
    if staged.head is None:
        raise DomainError("cannot collapse a staged network without a head")
    layers: list[AffineLayer] = []
    run: AffineLayer | None = None
    dim = 2
    for st in staged.stages:
        if isinstance(st, LinearStage):
            run = st.layer if run is None else run.then(st.layer)
            dim = run.out_dim
        elif run is not None:
            layers.append(run)
            run = None
        elif not layers:
            # ReLU straight on the input
            layers.append(AffineLayer.identity(dim))
        # ReLU right after ReLU is idempotent
    return MlpNetwork(tuple(layers), staged.head, run)


def param_count(net: MlpNetwork) -> int:
    layers = list(net.hidden_layers) + ([net.readout] if net.readout is not None else [])
    return sum(l.out_dim * l.in_dim + l.out_dim for l in layers) + 3


def max_width(net: MlpNetwork) -> int:
    return max((l.out_dim for l in net.hidden_layers), default=0)


def random_mlp(
    rng: np.random.Generator,
    widths: Sequence[int],
    readout: bool = True,
    scale: float = 1.0,
) -> MlpNetwork:
    """Gaussian-weight network with the given hidden widths.

    With ``readout`` the last hidden layer may be of any width; otherwise it must be 2.
    """
    layers = []
    dim = 2
    for w in widths:
        layers.append(AffineLayer(rng.normal(size=(w, dim)) * scale, rng.normal(size=w) * scale))
        dim = w
    ro = AffineLayer(rng.normal(size=(2, dim)), rng.normal(size=2)) if readout else None
    a, b = rng.normal(size=2)
    return MlpNetwork(tuple(layers), OutputHead(a, b, rng.normal()), ro)

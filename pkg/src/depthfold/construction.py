"""The folding network for f_m.

The input is folded into the first quadrant by ``fold_xy``; then ``m`` times
the remaining wedge is rotated clockwise so that it is symmetric about the
x axis and folded across it by ``fold_x``.  Rotation angles halve each time,
starting at pi/4.  What is left of the polygon boundary is a single segment,
separated by the head.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError, DomainError
from .geometry import Line, ProblemInstance, boundary_distance, classify_points
from .network import (
    RELU,
    AffineLayer,
    LinearStage,
    OutputHead,
    Stage,
    StagedNetwork,
    evaluate_staged,
    run_stages,
    sign_class,
)

MAX_M = 16

FOLD_XY_IN = np.array([[-1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
FOLD_XY_OUT = np.array([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]])
FOLD_X_IN = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
FOLD_X_OUT = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]])


@dataclass(frozen=True)
class FoldPlan:
    m: int
    rotation_angles: tuple[float, ...]

    @classmethod
    def for_m(cls, m: int) -> "FoldPlan":
        _check_m(m)
        return cls(m, tuple(math.pi / 2 ** (k + 2) for k in range(m)))


def _check_m(m):
    if not (isinstance(m, (int, np.integer)) and 1 <= m <= MAX_M):
        raise DomainError(f"m must be an integer in [1, {MAX_M}], got {m!r}")


def make_fold_xy() -> list[Stage]:
    """(x, y) -> (|x|, |y|) as linear 4x2, ReLU, linear 2x4."""
    return [
        LinearStage(AffineLayer(FOLD_XY_IN, np.zeros(4))),
        RELU,
        LinearStage(AffineLayer(FOLD_XY_OUT, np.zeros(2))),
    ]


def make_fold_x() -> list[Stage]:
    """(x, y) -> (x, |y|) for x >= 0; negative x is clamped to 0."""
    return [
        LinearStage(AffineLayer(FOLD_X_IN, np.zeros(3))),
        RELU,
        LinearStage(AffineLayer(FOLD_X_OUT, np.zeros(2))),
    ]


def rotation_matrix(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


def make_rotation(theta: float, sign: int | None = None) -> LinearStage:
    """Rotation stage ``[[cos p, -sin p], [sin p, cos p]]`` with ``p = sign * theta``.

    ``sign=None`` uses the convention that makes the construction correct
    (see :func:`resolve_rotation_sign`).
    """
    if sign is None:
        sign = resolve_rotation_sign()
    if sign not in (1, -1):
        raise DomainError("rotation sign must be +1 or -1")
    return LinearStage(AffineLayer(rotation_matrix(sign * theta), np.zeros(2)))


def build_prefix(m: int, sign: int | None = None) -> StagedNetwork:
    """fold_xy, then ``m`` (rotate, fold_x) pairs; no head."""
    plan = FoldPlan.for_m(m)
    stages = make_fold_xy()
    labels = ["foldXY"] * 3
    for k, theta in enumerate(plan.rotation_angles):
        stages.append(make_rotation(theta, sign))
        stages += make_fold_x()
        labels += [f"rotate(pi/{2 ** (k + 2)})"] + ["foldX"] * 3
    return StagedNetwork(tuple(stages), None, tuple(labels))


def derive_top(m: int, prefix: StagedNetwork) -> OutputHead:
    """Head whose zero line is the image of P_m's boundary under ``prefix``.

    Every edge of P_m lands on the same segment after the folds, and the two
    endpoints of an edge land on the same point.  The line is therefore taken
    through the image of the vertex (0, 1) and the image of the midpoint of
    its first-quadrant edge.  Oriented so the origin is class +1.
    """
    _check_m(m)
    step = 2 * math.pi / 2 ** (m + 1)
    top = np.array([0.0, 1.0])
    nxt = np.array([math.sin(step), math.cos(step)])
    u, v = run_stages(prefix, np.stack([top, 0.5 * (top + nxt)]))
    if math.hypot(*(u - v)) < 1e-9:
        raise ConstructionError(f"edge image degenerates for m={m}")
    line = Line.through(u, v)
    origin = run_stages(prefix, np.zeros(2))
    if abs(line.value(origin)) < 1e-9:
        raise ConstructionError("decision line passes through the image of the origin")
    if line.value(origin) < 0:
        line = Line(-line.a, -line.b, -line.c)
    return OutputHead(line.a, line.b, line.c)


def _zero_error_on_grid(net: StagedNetwork, m: int, n: int = 100, band: float = 1e-6) -> bool:
    g = np.linspace(-2.0, 2.0, n)
    pts = np.stack(np.meshgrid(g, g), axis=-1).reshape(-1, 2)
    problem = ProblemInstance.of(m)
    truth = classify_points(problem, pts)
    keep = (truth != 0) & (boundary_distance(problem.polygon, pts) >= band)
    got = sign_class(evaluate_staged(net, pts[keep]))
    return bool(np.all(got == truth[keep]))


@functools.lru_cache(maxsize=None)
def resolve_rotation_sign() -> int:
    """Pick the rotation direction by building m=2 both ways and testing on a grid.

    The folds need clockwise rotation, i.e. the printed matrix evaluated at
    ``-theta``; this is checked rather than assumed.
    """
    good = []
    for sign in (1, -1):
        prefix = build_prefix(2, sign)
        try:
            head = derive_top(2, prefix)
        except ConstructionError:
            continue
        if _zero_error_on_grid(prefix.with_head(head), 2):
            good.append(sign)
    if len(good) != 1:
        raise ConstructionError(f"rotation convention is ambiguous: working signs {good}")
    return good[0]


def build_network(m: int) -> StagedNetwork:
    """Folding network solving f_m; ``collapse`` it for the plain MLP form."""
    _check_m(m)
    prefix = build_prefix(m)
    return prefix.with_head(derive_top(m, prefix))


def drop_last_fold(staged: StagedNetwork) -> StagedNetwork:
    """Remove the final rotate + fold_x block, keeping the head (a negative control)."""
    return StagedNetwork(staged.stages[:-4], staged.head, staged.labels[:-4])

"""Planar primitives: points, oriented lines, convex polygons and the P_m family.

All predicates take an absolute tolerance ``tol`` (default :data:`TOL`).
Polygons are stored counterclockwise as read-only ``(n, 2)`` float arrays.
"""
from __future__ import annotations

import enum
import functools
import math
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

TOL = 1e-9
AREA_EPS = 1e-18
DUP_EPS = 1e-12

# rows of (points x edges) handled at once by the vectorised predicates
_CHUNK = 1 << 22


class Point2(namedtuple("Point2", "x y")):
    """A finite point of the plane."""

    __slots__ = ()

    def __new__(cls, x, y):
        x, y = float(x), float(y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise DomainError(f"non-finite point ({x}, {y})")
        return super().__new__(cls, x, y)


class Side(enum.Enum):
    POSITIVE = 1
    NEGATIVE = -1
    ON = 0


class Label(enum.IntEnum):
    """Ground-truth label of f_m; BOUNDARY marks points on the polygon edge."""

    INSIDE = 1
    OUTSIDE = -1
    BOUNDARY = 0


@dataclass(frozen=True)
class Line:
    """Oriented line ``a*x + b*y + c = 0``; the positive side is where the form is > 0.

    Coefficients are rescaled on construction so that ``a**2 + b**2 == 1``.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        a, b, c = float(self.a), float(self.b), float(self.c)
        if not all(map(math.isfinite, (a, b, c))):
            raise DomainError("line coefficients must be finite")
        norm = math.hypot(a, b)
        if norm == 0.0:
            raise DomainError("line normal (a, b) must be non-zero")
        object.__setattr__(self, "a", a / norm)
        object.__setattr__(self, "b", b / norm)
        object.__setattr__(self, "c", c / norm)

    @classmethod
    def through(cls, p, q) -> "Line":
        """Line through p and q, positive side on the left of p -> q."""
        (px, py), (qx, qy) = p, q
        dx, dy = qx - px, qy - py
        return cls(-dy, dx, dy * px - dx * py)

    def value(self, pts) -> np.ndarray | float:
        pts = np.asarray(pts, dtype=float)
        return self.a * pts[..., 0] + self.b * pts[..., 1] + self.c


def _cross_turns(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    e = np.roll(v, -1, axis=0) - v
    e_next = np.roll(e, -1, axis=0)
    cross = e[:, 0] * e_next[:, 1] - e[:, 1] * e_next[:, 0]
    scale = np.hypot(e[:, 0], e[:, 1]) * np.hypot(e_next[:, 0], e_next[:, 1])
    return cross, scale


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Convex polygon with counterclockwise vertices."""

    vertices: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float, copy=True).reshape(-1, 2)
        if len(v) < 3:
            raise DomainError("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise DomainError("polygon vertices must be finite")
        gaps = np.hypot(*(np.roll(v, -1, axis=0) - v).T)
        if np.any(gaps < DUP_EPS):
            raise DomainError("consecutive polygon vertices coincide")
        cross, scale = _cross_turns(v)
        if np.any(cross < -1e-12 * np.maximum(1.0, scale)):
            raise DomainError("polygon is not convex and counterclockwise")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"ConvexPolygon(n={len(self)}, area={self.area:.6g})"

    @property
    def area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    @property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        # shift to the first vertex for accuracy on small polygons far from the origin
        w = v - v[0]
        x, y = w[:, 0], w[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        cr = x * yn - xn * y
        a = cr.sum() / 2
        if abs(a) < AREA_EPS:
            return v.mean(axis=0)
        return v[0] + np.array([((x + xn) * cr).sum(), ((y + yn) * cr).sum()]) / (6 * a)

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge start points and edge vectors."""
        v = self.vertices
        return v, np.roll(v, -1, axis=0) - v

    def edge_margins(self, pts) -> np.ndarray:
        """Signed distance of each point to each edge line, positive towards the interior.

        Returns shape ``(n_points, n_edges)``.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        normals, offsets = self._inward_normals
        return pts @ normals.T + offsets

    @functools.cached_property
    def _inward_normals(self) -> tuple[np.ndarray, np.ndarray]:
        # cross(e, p - s) / |e| written as the affine form n . p + c
        start, e = self.edges()
        n = np.column_stack([-e[:, 1], e[:, 0]]) / np.hypot(e[:, 0], e[:, 1])[:, None]
        return n, -(n * start).sum(axis=1)

    def contains(self, p, tol: float = TOL) -> bool:
        return bool(self.edge_margins(p).min() >= -tol)

    def bounds(self) -> tuple[float, float, float, float]:
        lo, hi = self.vertices.min(axis=0), self.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def rectangle(x0: float, y0: float, x1: float, y1: float) -> ConvexPolygon:
    if not (x1 > x0 and y1 > y0):
        raise DomainError(f"degenerate rectangle ({x0}, {y0}, {x1}, {y1})")
    return ConvexPolygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


def regular_polygon(m: int) -> ConvexPolygon:
    """P_m: regular polygon with 2**(m+1) vertices on the unit circle, one at (0, 1)."""
    if not (isinstance(m, (int, np.integer)) and 1 <= m <= 24):
        raise DomainError(f"m must be an integer in [1, 24], got {m!r}")
    n = 2 ** (m + 1)
    # angles 90 - k*360/n run clockwise; walk k backwards for counterclockwise storage
    k = (-np.arange(n)) % n
    theta = np.pi / 2 - 2 * np.pi * k / n
    v = np.column_stack([np.cos(theta), np.sin(theta)])
    v[0] = (0.0, 1.0)
    return ConvexPolygon(v)


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """The classification problem f_m with decision boundary P_m."""

    m: int
    polygon: ConvexPolygon

    def __post_init__(self):
        v = self.polygon.vertices
        if len(v) != 2 ** (self.m + 1):
            raise DomainError("polygon must have 2**(m+1) vertices")
        if np.any(np.abs(np.hypot(v[:, 0], v[:, 1]) - 1.0) > 1e-12):
            raise DomainError("polygon vertices must lie on the unit circle")
        if not np.any(np.hypot(v[:, 0], v[:, 1] - 1.0) <= 1e-12):
            raise DomainError("polygon must have a vertex at (0, 1)")

    @classmethod
    def of(cls, m: int) -> "ProblemInstance":
        return cls(m, regular_polygon(m))

    @property
    def inradius(self) -> float:
        return math.cos(math.pi / 2 ** (self.m + 1))


def point_side(line: Line, p, tol: float = TOL) -> Side:
    v = float(line.value(p))
    if abs(v) <= tol:
        return Side.ON
    return Side.POSITIVE if v > 0 else Side.NEGATIVE


def _chunks(n_points: int, n_edges: int):
    step = max(1, _CHUNK // max(1, n_edges))
    for i in range(0, n_points, step):
        yield slice(i, min(n_points, i + step))


def boundary_distance(poly: ConvexPolygon, pts) -> np.ndarray:
    """Euclidean distance from each point to the polygon boundary (segment-exact)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    start, e = poly.edges()
    ee = (e * e).sum(axis=1)
    out = np.empty(len(pts))
    for sl in _chunks(len(pts), len(start)):
        d = pts[sl, None, :] - start[None, :, :]
        t = np.clip((d * e[None]).sum(axis=2) / ee, 0.0, 1.0)
        r = d - t[..., None] * e[None]
        out[sl] = np.sqrt((r * r).sum(axis=2)).min(axis=1)
    return out


def signed_depth(poly: ConvexPolygon, pts) -> np.ndarray:
    """Max over edges of the outward line distance: < 0 inside, > 0 outside.

    Inside the polygon this equals minus the boundary distance; outside it is a
    lower bound on the boundary distance.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    out = np.empty(len(pts))
    for sl in _chunks(len(pts), len(poly)):
        out[sl] = -poly.edge_margins(pts[sl]).min(axis=1)
    return out


def classify_points(problem: ProblemInstance, pts, tol: float = TOL) -> np.ndarray:
    """Vectorised ground truth for f_m: +1 inside, -1 outside, 0 within ``tol`` of an edge."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    depth = signed_depth(problem.polygon, pts)
    labels = np.where(depth < 0, 1, -1)
    # outside, the line depth only bounds the distance from below: confirm near a vertex
    cand = np.flatnonzero(np.abs(depth) <= tol)
    if len(cand):
        dist = boundary_distance(problem.polygon, pts[cand])
        labels[cand[dist <= tol]] = 0
    return labels


def classify_point(problem: ProblemInstance, p, tol: float = TOL) -> Label:
    """Ground-truth oracle for f_m at a single point."""
    p = Point2(*p)
    return Label(int(classify_points(problem, [p], tol)[0]))


def _dedupe(pts: list) -> list:
    out = []
    for p in pts:
        if not out or math.hypot(p[0] - out[-1][0], p[1] - out[-1][1]) >= DUP_EPS:
            out.append(p)
    while len(out) > 1 and math.hypot(out[0][0] - out[-1][0], out[0][1] - out[-1][1]) < DUP_EPS:
        out.pop()
    return out


def _as_part(pts: list) -> ConvexPolygon | None:
    pts = _dedupe(pts)
    if len(pts) < 3:
        return None
    v = np.asarray(pts)
    x, y = v[:, 0], v[:, 1]
    if 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) < AREA_EPS:
        return None
    return ConvexPolygon(v)


def clip_by_line(poly: ConvexPolygon, line: Line, tol: float = TOL):
    """Split ``poly`` by ``line`` into (positive_part, negative_part).

    Either part is ``None`` when empty or degenerate.  When the line does not
    strictly separate two vertices the input polygon itself is returned as the
    single non-empty part.
    """
    v = poly.vertices
    d = line.value(v)
    pos, neg = d > tol, d < -tol
    if not neg.any():
        return poly, None
    if not pos.any():
        return None, poly
    n = len(v)
    plus, minus = [], []
    for i in range(n):
        j = (i + 1) % n
        p, di, dj = v[i], d[i], d[j]
        if di >= -tol:
            plus.append((p[0], p[1]))
        if di <= tol:
            minus.append((p[0], p[1]))
        if (pos[i] and neg[j]) or (neg[i] and pos[j]):
            t = di / (di - dj)
            q = p + t * (v[j] - p)
            plus.append((q[0], q[1]))
            minus.append((q[0], q[1]))
    return _as_part(plus), _as_part(minus)


def v_even_prime(problem: ProblemInstance, epsilon: float) -> list[Point2]:
    """Every second vertex of P_m, starting at (0, 1), pushed radially out by ``1 + epsilon``."""
    if not (0 < epsilon <= 0.1):
        raise DomainError(f"epsilon must lie in (0, 0.1], got {epsilon!r}")
    return [Point2(*(v * (1 + epsilon))) for v in problem.polygon.vertices[::2]]


def chords_cross(problem: ProblemInstance, p, q, tol: float = TOL) -> np.ndarray:
    """Vectorised :func:`chord_crosses_boundary` over paired ``(n, 2)`` endpoint arrays."""
    p = np.atleast_2d(np.asarray(p, dtype=float))
    q = np.atleast_2d(np.asarray(q, dtype=float))
    if np.any(np.hypot(*(p - q).T) < DUP_EPS):
        raise DomainError("chord endpoints coincide")
    out = np.empty(len(p), dtype=bool)
    for sl in _chunks(len(p), 2 * len(problem.polygon)):
        g0 = problem.polygon.edge_margins(p[sl])
        slope = problem.polygon.edge_margins(q[sl]) - g0
        # parameter where each edge margin reaches tol along p + t*(q - p)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (tol - g0) / slope
        lo = np.maximum(0.0, np.where(slope > 0, t, 0.0).max(axis=1))
        hi = np.minimum(1.0, np.where(slope < 0, t, 1.0).min(axis=1))
        blocked = np.any((slope == 0) & (g0 <= tol), axis=1)
        out[sl] = (lo < hi) & ~blocked
    return out


def chord_crosses_boundary(problem: ProblemInstance, p, q, tol: float = TOL) -> bool:
    """True iff the open segment (p, q) passes strictly inside P_m."""
    p, q = Point2(*p), Point2(*q)
    return bool(chords_cross(problem, [p], [q], tol)[0])

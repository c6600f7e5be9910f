"""Exact linear response regions of a planar ReLU network inside a bounding box.

Regions are refined layer by layer: inside a region every earlier neuron is
fixed on or off, so each neuron of the next layer is an affine function of the
raw input there and its zero line is a plain cut of the region.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegionBudgetExceeded
from .geometry import TOL, ConvexPolygon, Line, clip_by_line, rectangle
from .network import (
    ActivationPattern,
    AffineLayer,
    MlpNetwork,
    activation_bits,
    pattern_strings,
)

DEFAULT_BBOX = (-2.0, -2.0, 2.0, 2.0)
MAX_REGIONS = 10**6
_FLAT = 1e-12


@dataclass(frozen=True, eq=False)
class Region:
    polygon: ConvexPolygon
    pattern: ActivationPattern
    restricted_map: AffineLayer
    pre_sign: tuple[float, float, float]

    def pre_sign_at(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        a, b, c = self.pre_sign
        return a * pts[:, 0] + b * pts[:, 1] + c


@dataclass(frozen=True, eq=False)
class Decomposition:
    net: MlpNetwork
    bbox: ConvexPolygon
    regions: tuple[Region, ...]

    def __len__(self):
        return len(self.regions)

    @functools.cached_property
    def _edge_table(self):
        polys = [r.polygon for r in self.regions]
        starts = np.concatenate([p.vertices for p in polys])
        vecs = np.concatenate([p.edges()[1] for p in polys])
        vecs = vecs / np.hypot(vecs[:, 0], vecs[:, 1])[:, None]
        offsets = np.cumsum([0] + [len(p) for p in polys[:-1]])
        return starts, vecs, offsets


def _as_bbox(bbox) -> ConvexPolygon:
    if isinstance(bbox, ConvexPolygon):
        return bbox
    return rectangle(*bbox)


def _split(poly, a, b, c, tol):
    """Pieces of ``poly`` with the sign bit of ``a*x + b*y + c`` on each."""
    if math.hypot(a, b) < _FLAT:
        return [(poly, int(c > 0))]
    pos, neg = clip_by_line(poly, Line(a, b, c), tol)
    if pos is not None and neg is not None:
        return [(pos, 1), (neg, 0)]
    piece = pos if pos is not None else neg
    x, y = piece.centroid
    return [(piece, int(a * x + b * y + c > 0))]


def enumerate_regions(
    net: MlpNetwork,
    bbox=DEFAULT_BBOX,
    tol: float = TOL,
    max_regions: int = MAX_REGIONS,
) -> Decomposition:
    """Partition ``bbox`` into the network's linear response regions.

    Regions come back in canonical order: by activation bits, then centroid.
    Raises :class:`RegionBudgetExceeded` once more than ``max_regions`` exist.
    """
    box = _as_bbox(bbox)
    # (polygon, bits so far, A, b) with hidden state = A @ x + b on the polygon
    current = [(box, (), np.eye(2), np.zeros(2))]
    for layer in net.hidden_layers:
        nxt = []
        for poly, bits, A, b in current:
            W = layer.weights @ A
            c = layer.weights @ b + layer.bias
            pieces = [(poly, ())]
            for j in range(layer.out_dim):
                pieces = [
                    (part, on + (bit,))
                    for piece, on in pieces
                    for part, bit in _split(piece, W[j, 0], W[j, 1], c[j], tol)
                ]
                if len(nxt) + len(pieces) > max_regions:
                    raise RegionBudgetExceeded(f"more than {max_regions} regions")
            for part, on in pieces:
                mask = np.array(on, dtype=float)
                nxt.append((part, bits + (on,), W * mask[:, None], c * mask))
        current = nxt

    regions = []
    head = net.head
    for poly, bits, A, b in current:
        if net.readout is not None:
            A, b = net.readout.weights @ A, net.readout.weights @ b + net.readout.bias
        ps = (
            float(head.a * A[0, 0] + head.b * A[1, 0]),
            float(head.a * A[0, 1] + head.b * A[1, 1]),
            float(head.a * b[0] + head.b * b[1] + head.c),
        )
        regions.append(Region(poly, bits, AffineLayer(A, b), ps))
    regions.sort(key=lambda r: ("|".join(pattern_strings(r.pattern)), *r.polygon.centroid))
    return Decomposition(net, box, tuple(regions))


def regions_of_points(d: Decomposition, pts, tol: float = TOL) -> list[int]:
    """:func:`region_of_point` for each row of an ``(n, 2)`` array."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    starts, vecs, offsets = d._edge_table
    out = []
    for p in pts:
        if not d.bbox.contains(p, tol):
            raise DomainError(f"point {tuple(p)} lies outside the bounding box")
        rel = p - starts
        margin = vecs[:, 0] * rel[:, 1] - vecs[:, 1] * rel[:, 0]
        hits = np.flatnonzero(np.minimum.reduceat(margin, offsets) >= -tol)
        if not len(hits):
            raise DomainError(f"no region contains {tuple(p)}")
        out.append(int(hits[0]))
    return out


def region_of_point(d: Decomposition, p, tol: float = TOL) -> int:
    """Index of the first region (canonical order) containing ``p`` within ``tol``."""
    return regions_of_points(d, [p], tol)[0]


def line_arrangement_max_regions(n: int) -> int:
    if n < 0:
        raise DomainError("n must be non-negative")
    return 1 + n * (n + 1) // 2


def region_upper_bound(w: int, d: int) -> int:
    if w < 1 or d < 1:
        raise DomainError("w and d must be positive")
    bound = w ** (2 * d)
    if bound >= 2**63:
        raise DomainError(f"w^(2d) = {w}^{2 * d} does not fit in 64 bits")
    return bound


def grid_points(bbox, resolution: int) -> np.ndarray:
    x0, y0, x1, y1 = _as_bbox(bbox).bounds()
    gx, gy = np.linspace(x0, x1, resolution), np.linspace(y0, y1, resolution)
    return np.stack(np.meshgrid(gx, gy), axis=-1).reshape(-1, 2)


def grid_pattern_count(net: MlpNetwork, bbox=DEFAULT_BBOX, resolution: int = 256) -> int:
    """Number of distinct activation patterns seen on a regular grid over ``bbox``."""
    if resolution < 8:
        raise DomainError("resolution must be at least 8")
    pts = grid_points(bbox, resolution)
    bits = activation_bits(net, pts)
    if not bits:
        return 1
    flat = np.concatenate(bits, axis=1)
    if flat.shape[1] <= 62:
        return len(np.unique(flat.astype(np.int64) @ (1 << np.arange(flat.shape[1], dtype=np.int64))))
    return len(np.unique(flat, axis=0))


def general_position_layer(
    w: int, rng: np.random.Generator, sep: float = 1e-6, max_tries: int = 1000
) -> AffineLayer:
    """``w`` random neuron lines, pairwise non-parallel and with no three concurrent."""
    for _ in range(max_tries):
        theta = rng.uniform(0, np.pi, size=w)
        normals = np.column_stack([np.cos(theta), np.sin(theta)])
        offsets = rng.normal(size=w)
        if _general_position(normals, offsets, sep):
            # random positive scale and orientation do not move the lines
            scale = rng.uniform(0.5, 2.0, size=w) * rng.choice([-1.0, 1.0], size=w)
            return AffineLayer(normals * scale[:, None], offsets * scale)
    raise RuntimeError("could not draw lines in general position")


def _general_position(normals: np.ndarray, offsets: np.ndarray, sep: float) -> bool:
    w = len(normals)
    for i in range(w):
        for j in range(i + 1, w):
            det = normals[i, 0] * normals[j, 1] - normals[i, 1] * normals[j, 0]
            if abs(det) < sep:
                return False
            p = np.linalg.solve(np.stack([normals[i], normals[j]]), -np.array([offsets[i], offsets[j]]))
            others = [k for k in range(w) if k not in (i, j)]
            if others and np.min(np.abs(normals[others] @ p + offsets[others])) < sep:
                return False
    return True


def arrangement_bbox(layer: AffineLayer, pad: float = 1.0) -> tuple[float, float, float, float]:
    """Box holding every pairwise intersection of the layer's lines (and a point of each line)."""
    W, c = layer.weights, layer.bias
    pts = [-c[i] * W[i] / (W[i] @ W[i]) for i in range(len(W))]
    for i in range(len(W)):
        for j in range(i + 1, len(W)):
            pts.append(np.linalg.solve(W[[i, j]], -c[[i, j]]))
    pts = np.array(pts)
    lo, hi = pts.min(axis=0) - pad, pts.max(axis=0) + pad
    return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def decomposition_to_json(d: Decomposition) -> list[dict]:
    return [
        {
            "vertices": r.polygon.vertices.tolist(),
            "pattern": pattern_strings(r.pattern),
            "pre_sign": list(r.pre_sign),
        }
        for r in d.regions
    ]

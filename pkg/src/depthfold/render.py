"""Static SVG pictures of the problem family, the folds, regions and arrangements.

Targets:

* ``problem``     -- P_m inscribed in the unit circle.
* ``folds``       -- three marked points and the image of P_m's boundary after
  every fold/rotate block, ending with the head's decision line.
* ``regions``     -- response regions of the folding network, one fill colour each.
* ``witness``     -- P_m, the pushed-out even vertices and one chord between two of them.
* ``arrangement`` -- n lines in general position and the number of cells they cut.
"""
from __future__ import annotations

import colorsys
import enum
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .construction import build_network
from .errors import DomainError
from .geometry import ProblemInstance, v_even_prime
from .network import AffineLayer, MlpNetwork, OutputHead, collapse, run_stages
from .regions import arrangement_bbox, enumerate_regions, general_position_layer
from .verification import default_epsilon

SVG_NS = "http://www.w3.org/2000/svg"


class RenderTarget(enum.Enum):
    PROBLEM = "problem"
    FOLDS = "folds"
    REGIONS = "regions"
    WITNESS = "witness"
    ARRANGEMENT = "arrangement"


@dataclass(frozen=True)
class RenderSpec:
    target: RenderTarget
    m: int | None = None
    n: int = 4
    width: int = 480
    height: int = 480
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "target", RenderTarget(self.target))
        if self.width < 64 or self.height < 64:
            raise DomainError("width and height must be at least 64 pixels")
        if self.target is RenderTarget.ARRANGEMENT:
            if self.n < 0:
                raise DomainError("n must be non-negative")
        elif self.m is None or self.m < 1:
            raise DomainError(f"target {self.target.value} needs m >= 1")


class Canvas:
    """Maps world coordinates (y up) onto an SVG viewport (y down)."""

    def __init__(self, parent, bounds, x, y, w, h):
        self.g = ET.SubElement(parent, "g")
        x0, y0, x1, y1 = bounds
        self.s = min(w / (x1 - x0), h / (y1 - y0))
        self.ox = x + (w - self.s * (x1 - x0)) / 2 - self.s * x0
        self.oy = y + (h - self.s * (y1 - y0)) / 2 + self.s * y1

    def xy(self, p):
        return self.ox + self.s * p[0], self.oy - self.s * p[1]

    def path(self, pts, closed=True, **attrs):
        cmds = [f"{'M' if i == 0 else 'L'}{x:.3f},{y:.3f}" for i, (x, y) in enumerate(map(self.xy, pts))]
        d = " ".join(cmds) + (" Z" if closed else "")
        return ET.SubElement(self.g, "path", d=d, **_attrs(attrs))

    def dot(self, p, r=3.0, **attrs):
        x, y = self.xy(p)
        return ET.SubElement(self.g, "circle", cx=f"{x:.3f}", cy=f"{y:.3f}", r=str(r), **_attrs(attrs))

    def circle(self, center, radius, **attrs):
        x, y = self.xy(center)
        return ET.SubElement(
            self.g, "circle", cx=f"{x:.3f}", cy=f"{y:.3f}", r=f"{self.s * radius:.3f}", **_attrs(attrs)
        )

    def text(self, p, s, **attrs):
        x, y = self.xy(p)
        el = ET.SubElement(self.g, "text", x=f"{x:.1f}", y=f"{y:.1f}", **_attrs(attrs))
        el.text = s
        return el


def _attrs(d):
    # trailing underscore escapes Python keywords (class_)
    return {k.rstrip("_").replace("_", "-"): str(v) for k, v in d.items()}


def _svg(width, height):
    root = ET.Element("svg", xmlns=SVG_NS, version="1.1", width=str(width), height=str(height))
    root.set("viewBox", f"0 0 {width} {height}")
    ET.SubElement(root, "rect", width=str(width), height=str(height), fill="white")
    return root


def distinct_colors(n: int, seed: int = 0) -> list[str]:
    """``n`` pairwise different hex colours, shuffled by ``seed``."""
    rng = np.random.default_rng(seed)
    offset = rng.uniform()
    out, seen = [], set()
    for i in range(n):
        h = (offset + i * 0.6180339887498949) % 1.0
        s = (0.35, 0.55, 0.75)[i % 3]
        v = (0.97, 0.85)[(i // 3) % 2]
        r, g, b = (round(255 * c) for c in colorsys.hsv_to_rgb(h, s, v))
        while (r, g, b) in seen:
            b = (b + 1) % 256
            if b == 0:
                g = (g + 1) % 256
        seen.add((r, g, b))
        out.append(f"#{r:02x}{g:02x}{b:02x}")
    return out


def render_problem(spec: RenderSpec) -> ET.Element:
    root = _svg(spec.width, spec.height)
    cv = Canvas(root, (-1.15, -1.15, 1.15, 1.15), 0, 0, spec.width, spec.height)
    cv.circle((0, 0), 1.0, fill="none", stroke="#999999", stroke_dasharray="4 3")
    poly = ProblemInstance.of(spec.m).polygon
    cv.path(poly.vertices, fill="#cfe3f7", stroke="#1f4e79", stroke_width=1.5, id=f"P{spec.m}")
    cv.text((-1.1, 1.05), f"P_{spec.m}: {len(poly)} edges", font_size=14, font_family="sans-serif")
    return root


def _boundary_samples(poly, total=1536):
    v = poly.vertices
    per_edge = max(1, total // len(v))
    t = np.linspace(0, 1, per_edge, endpoint=False)[:, None, None]
    return (v[None] + t * (np.roll(v, -1, axis=0) - v)[None]).reshape(-1, 2)


def render_fold_sequence(spec: RenderSpec) -> ET.Element:
    staged = build_network(spec.m)
    poly = ProblemInstance.of(spec.m).polygon
    markers = np.array([[-0.55, 0.62], [0.3, -0.85], [-0.2, -0.15]])
    pts = np.vstack([markers, _boundary_samples(poly)])
    trace = run_stages(staged, pts, trace=True)
    # one panel for the input and one after each labelled block
    panels = [("input", trace[0])]
    labels = staged.labels
    for i, lab in enumerate(labels):
        if i + 1 == len(labels) or labels[i + 1] != lab:
            panels.append((lab, trace[i + 1]))
    cols = min(4, len(panels))
    rows = math.ceil(len(panels) / cols)
    root = _svg(spec.width, spec.height)
    pw, ph = spec.width / cols, spec.height / rows
    for k, (name, img) in enumerate(panels):
        cv = Canvas(root, (-1.2, -1.2, 1.2, 1.35), (k % cols) * pw, (k // cols) * ph, pw, ph)
        cv.path([(-1.2, 0), (1.2, 0)], closed=False, stroke="#cccccc")
        cv.path([(0, -1.2), (0, 1.2)], closed=False, stroke="#cccccc")
        for p in img[3:]:
            cv.dot(p, r=0.8, fill="#1f4e79")
        for p, color in zip(img[:3], ("#c00000", "#008000", "#7030a0")):
            cv.dot(p, r=3.5, fill=color)
        cv.text((-1.15, 1.2), f"({chr(97 + k)}) {name}", font_size=11, font_family="sans-serif")
        if k == len(panels) - 1:
            h = staged.head
            # decision line a*x + b*y + c = 0 clipped to the panel
            ends = _line_ends(h.a, h.b, h.c, 1.2)
            if ends:
                cv.path(ends, closed=False, stroke="#e07000", stroke_width=1.5, id="decision-line")
    return root


def _line_ends(a, b, c, r):
    if abs(b) > abs(a):
        return [(-r, (-c + a * r) / b), (r, (-c - a * r) / b)]
    if a == 0:
        return None
    return [((-c + b * r) / a, -r), ((-c - b * r) / a, r)]


def render_regions(spec: RenderSpec) -> ET.Element:
    d = enumerate_regions(collapse(build_network(spec.m)))
    root = _svg(spec.width, spec.height)
    cv = Canvas(root, (-2, -2, 2, 2), 0, 0, spec.width, spec.height)
    for r, color in zip(d.regions, distinct_colors(len(d), spec.seed)):
        cv.path(r.polygon.vertices, fill=color, stroke="#555555", stroke_width=0.4, class_="region")
    cv.path(ProblemInstance.of(spec.m).polygon.vertices, fill="none", stroke="black", stroke_width=1.5)
    cv.text((-1.95, 1.85), f"{len(d)} regions", font_size=14, font_family="sans-serif")
    return root


def render_witness_chords(spec: RenderSpec) -> ET.Element:
    problem = ProblemInstance.of(spec.m)
    root = _svg(spec.width, spec.height)
    cv = Canvas(root, (-1.15, -1.15, 1.15, 1.15), 0, 0, spec.width, spec.height)
    cv.path(problem.polygon.vertices, fill="#eeeeee", stroke="black", stroke_width=1.2)
    witnesses = v_even_prime(problem, default_epsilon(spec.m))
    for w in witnesses:
        cv.dot(w, r=3.5, fill="#c00000", class_="witness")
    if len(witnesses) >= 2:
        cv.path(witnesses[:2], closed=False, stroke="#00a000", stroke_width=2, id="chord")
    return root


def render_arrangement(spec: RenderSpec) -> ET.Element:
    root = _svg(spec.width, spec.height)
    rng = np.random.default_rng(spec.seed)
    if spec.n == 0:
        layers, readout, bbox = (), None, (-1.0, -1.0, 1.0, 1.0)
    else:
        layer = general_position_layer(spec.n, rng, sep=1e-2)
        layers, bbox = (layer,), arrangement_bbox(layer, pad=1.0)
        readout = AffineLayer(np.ones((2, spec.n)), np.zeros(2))
    d = enumerate_regions(MlpNetwork(layers, OutputHead(1.0, 0.0, 0.0), readout), bbox)
    defs = ET.SubElement(root, "defs")
    cv = Canvas(root, bbox, 0, 0, spec.width, spec.height)
    clip = ET.SubElement(ET.SubElement(defs, "clipPath", id="box"), "path")
    (px0, py0), (px1, py1) = cv.xy(bbox[:2]), cv.xy(bbox[2:])
    clip.set("d", f"M{px0:.3f},{py0:.3f} H{px1:.3f} V{py1:.3f} H{px0:.3f} Z")
    cv.g.set("clip-path", "url(#box)")
    for r, color in zip(d.regions, distinct_colors(len(d), spec.seed)):
        cv.path(r.polygon.vertices, fill=color, stroke="none", class_="region")
    reach = 2 * max(map(abs, bbox))
    for layer in layers:
        for w, c in zip(layer.weights, layer.bias):
            cv.path(_line_ends(w[0], w[1], c, reach), closed=False, stroke="black", stroke_width=1.2, class_="line")
    label = ET.SubElement(root, "text", {"x": "8", "y": "20", "font-size": "14", "font-family": "sans-serif", "id": "count"})
    label.text = f"{len(d)} regions"
    return root


_RENDERERS = {
    RenderTarget.PROBLEM: render_problem,
    RenderTarget.FOLDS: render_fold_sequence,
    RenderTarget.REGIONS: render_regions,
    RenderTarget.WITNESS: render_witness_chords,
    RenderTarget.ARRANGEMENT: render_arrangement,
}


def render(spec: RenderSpec) -> str:
    root = _RENDERERS[spec.target](spec)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode")


def write_svg(spec: RenderSpec, path) -> None:
    Path(path).write_text(render(spec))

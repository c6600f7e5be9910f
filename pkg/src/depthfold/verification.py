"""Checks of the depth-separation claims on concrete networks.

Each check returns a :class:`VerificationReport`.  Random sampling is seeded
so every report is reproducible from its arguments.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .geometry import (
    TOL,
    ProblemInstance,
    boundary_distance,
    chords_cross,
    classify_points,
    signed_depth,
    v_even_prime,
)
from .network import MlpNetwork, activation_bits, classify, evaluate_pre_sign
from .regions import Decomposition, region_upper_bound, regions_of_points

LINEARITY_TOL = 1e-8


@dataclass(frozen=True)
class VerificationReport:
    claim: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"claim": self.claim, "passed": bool(self.passed), "details": dict(self.details)}


def width_lower_bound(m: int, d: int) -> float:
    """Smallest width a depth-``d`` network can have while solving f_m: 2**(m / 2d)."""
    if m < 1 or d < 1:
        raise DomainError("m and d must be positive")
    return 2.0 ** (m / (2 * d))


def width_base(d: int) -> float:
    """Base b = 2**(1 / 2d) > 1 with ``width_lower_bound(m, d) == b**m``."""
    if d < 1:
        raise DomainError("d must be positive")
    return 2.0 ** (1 / (2 * d))


def default_epsilon(m: int) -> float:
    """Witness offset: 1e-3, or less when chords between adjacent witnesses would miss P_m.

    Adjacent witnesses are ``2*pi / 2**m`` apart, so their chord passes the
    odd vertex between them at radius ``(1 + eps) * cos(pi / 2**m)``.  Half of
    the slack up to radius 1 is used.
    """
    return min(1e-3, 0.5 * (1 / math.cos(math.pi / 2**m) - 1)) if m > 1 else 1e-3


def verify_lemma2(
    m: int,
    epsilon: float | None,
    decomposition: Decomposition,
    tol: float = TOL,
) -> VerificationReport:
    """Witness argument: 2**m outside points that must sit in pairwise different regions."""
    eps = default_epsilon(m) if epsilon is None else epsilon
    problem = ProblemInstance.of(m)
    witnesses = v_even_prime(problem, eps)
    for w in witnesses:
        if not decomposition.bbox.contains(w, tol):
            raise DomainError(f"witness {tuple(w)} lies outside the bounding box")
    pts = np.array(witnesses)
    labels = classify(decomposition.net, pts)
    misclassified = int(np.sum(labels != -1))
    indices = regions_of_points(decomposition, pts, tol)
    distinct = len(set(indices))
    pairs = np.array(list(itertools.combinations(range(len(pts)), 2))).reshape(-1, 2)
    crossing = int(chords_cross(problem, pts[pairs[:, 0]], pts[pairs[:, 1]], tol).sum())
    need = 2**m
    checks = {
        "all_outside_class": misclassified == 0,
        "distinct_regions": distinct == len(witnesses),
        "region_count": len(decomposition) >= need,
        "chords_cross": crossing == len(pairs),
    }
    return VerificationReport(
        f"lemma2(m={m})",
        all(checks.values()),
        {
            "epsilon": eps,
            "witnesses": len(witnesses),
            "misclassified": misclassified,
            "distinct_regions": distinct,
            "region_count": len(decomposition),
            "required": need,
            "chords": len(pairs),
            "chords_crossing": crossing,
            **{f"ok_{k}": v for k, v in checks.items()},
        },
    )


def adversarial_points(problem: ProblemInstance, margin: float) -> np.ndarray:
    """Polygon vertices and edge midpoints pushed 10*margin in and out, plus the origin."""
    v = problem.polygon.vertices
    mid = 0.5 * (v + np.roll(v, -1, axis=0))
    base = np.concatenate([v, mid])
    k = 10 * margin
    return np.concatenate([base * (1 + k), base * (1 - k), np.zeros((1, 2))])


def verify_zero_error(
    net: MlpNetwork,
    m: int,
    n_random: int = 10**5,
    seed: int = 0,
    margin: float = 1e-6,
    tol: float = TOL,
) -> VerificationReport:
    """Compare ``classify(net)`` with the ground truth away from the polygon boundary."""
    if margin < 0:
        raise DomainError("margin must be non-negative")
    problem = ProblemInstance.of(m)
    rng = np.random.default_rng(seed)
    adv = adversarial_points(problem, margin)
    pts = np.concatenate([rng.uniform(-2.0, 2.0, size=(n_random, 2)), adv])
    truth = classify_points(problem, pts, tol)
    keep = truth != 0
    # only points within margin of an edge line can be within margin of the boundary
    near = np.flatnonzero(keep & (np.abs(signed_depth(problem.polygon, pts)) < margin))
    if len(near):
        keep[near[boundary_distance(problem.polygon, pts[near]) < margin]] = False
    got = classify(net, pts[keep])
    wrong = got != truth[keep]
    origin_ok = classify(net, np.zeros(2)) == 1
    return VerificationReport(
        f"zero-error(m={m})",
        bool(not wrong.any()),
        {
            "seed": seed,
            "margin": margin,
            "n_random": n_random,
            "n_adversarial": len(adv),
            "checked": int(keep.sum()),
            "dropped": int((~keep).sum()),
            "mismatches": int(wrong.sum()),
            "origin_inside": bool(origin_ok),
        },
    )


def _interior_samples(poly, k: int, rng: np.random.Generator) -> np.ndarray:
    """Centroid plus ``k - 1`` random convex combinations of the vertices, pulled toward it."""
    c = poly.centroid
    w = rng.dirichlet(np.ones(len(poly)), size=k - 1)
    jitter = c + 0.9 * (w @ poly.vertices - c)
    return np.vstack([c, jitter])


def verify_piecewise_linearity(
    net: MlpNetwork,
    d: Decomposition,
    samples_per_region: int = 9,
    seed: int = 0,
) -> VerificationReport:
    """Inside every region the network must be one affine function.

    Checks per region: the activation pattern at each sample equals the
    region's; the region's affine form matches direct evaluation; and for
    triples p, q, r = lam*p + (1-lam)*q the value at r interpolates.
    """
    if samples_per_region < 3:
        raise DomainError("need at least 3 samples per region")
    rng = np.random.default_rng(seed)
    max_interp = max_affine = 0.0
    pattern_mismatches = 0
    for region in d.regions:
        pts = _interior_samples(region.polygon, samples_per_region, rng)
        lam = rng.uniform(0, 1, size=samples_per_region)
        p, q = pts, np.roll(pts, -1, axis=0)
        r = lam[:, None] * p + (1 - lam[:, None]) * q
        allpts = np.vstack([pts, r])
        bits = np.concatenate(activation_bits(net, allpts), axis=1) if net.hidden_layers else None
        if bits is not None:
            expected = np.concatenate([np.array(l, dtype=bool) for l in region.pattern])
            if expected.shape[0] != bits.shape[1]:
                # decomposition of a differently shaped network: nothing matches
                pattern_mismatches += len(allpts)
            else:
                pattern_mismatches += int(np.any(bits != expected, axis=1).sum())
        f = evaluate_pre_sign(net, allpts)
        fp, fr = f[:samples_per_region], f[samples_per_region:]
        interp = lam * fp + (1 - lam) * np.roll(fp, -1)
        max_interp = max(max_interp, float(np.max(np.abs(fr - interp))))
        max_affine = max(max_affine, float(np.max(np.abs(region.pre_sign_at(allpts) - f))))
    passed = pattern_mismatches == 0 and max_interp <= LINEARITY_TOL and max_affine <= LINEARITY_TOL
    return VerificationReport(
        "piecewise-linearity",
        passed,
        {
            "regions": len(d),
            "samples_per_region": samples_per_region,
            "seed": seed,
            "max_deviation": max_interp,
            "max_affine_deviation": max_affine,
            "pattern_mismatches": pattern_mismatches,
        },
    )


def verify_bound_consistency(m_range, d: int) -> VerificationReport:
    """For each m, the rounded-up minimum width must reach 2**m regions at depth d."""
    failures = []
    exact = 0
    for m in m_range:
        wl = width_lower_bound(m, d)
        w_min = math.ceil(wl)
        if region_upper_bound(w_min, d) < 2**m:
            failures.append(m)
        if m % (2 * d) == 0:
            # 2d divides m: the bound is an exact power of two and meets 2**m with equality
            if wl != 2 ** (m // (2 * d)) or w_min ** (2 * d) != 2**m:
                failures.append(m)
            exact += 1
    return VerificationReport(
        f"bounds(d={d})",
        not failures,
        {"d": d, "checked": len(list(m_range)), "exact_cases": exact, "failures": failures},
    )

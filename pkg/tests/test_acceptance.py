"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line in ``RESULTS``; ``conftest.py`` prints
them at the end of the pytest run.  Run this file directly to get the same
lines without pytest::

    python3 tests/test_acceptance.py
"""
import math
import time

import numpy as np

from depthfold.construction import build_network, drop_last_fold
from depthfold.network import MlpNetwork, AffineLayer, OutputHead, collapse, max_width, param_count, random_mlp
from depthfold.regions import (
    arrangement_bbox,
    enumerate_regions,
    general_position_layer,
    grid_pattern_count,
    line_arrangement_max_regions,
    region_upper_bound,
)
from depthfold.verification import (
    verify_bound_consistency,
    verify_lemma2,
    verify_piecewise_linearity,
    verify_zero_error,
    width_lower_bound,
)

RESULTS: dict[int, str] = {}


def record(n, title, ok, elapsed, limit, detail=""):
    timely = elapsed < limit
    status = "PASS" if ok and timely else "FAIL"
    RESULTS[n] = f"[{status}] C{n} {title}: {detail} ({elapsed:.2f}s, limit {limit:g}s)"
    assert ok, RESULTS[n]
    assert timely, RESULTS[n]


def test_c1_construction_size():
    t = time.perf_counter()
    bad = []
    for m in range(1, 13):
        net = collapse(build_network(m))
        if net.depth != m + 1 or max_width(net) != 4 or param_count(net) > 20 * (m + 2):
            bad.append(m)
    record(1, "construction size", not bad, time.perf_counter() - t, 1, f"m=1..12 failures={bad}")


def test_c2_zero_error():
    t = time.perf_counter()
    mismatches = {}
    for m in range(1, 9):
        r = verify_zero_error(collapse(build_network(m)), m, n_random=10**5, seed=0, margin=1e-6)
        if not r.passed:
            mismatches[m] = r.details["mismatches"]
    record(2, "zero error", not mismatches, time.perf_counter() - t, 30, f"m=1..8 mismatches={mismatches}")


def test_c3_witness_regions():
    t = time.perf_counter()
    bad = {}
    for m in range(1, 8):
        d = enumerate_regions(collapse(build_network(m)), (-2, -2, 2, 2))
        r = verify_lemma2(m, None, d)
        det = r.details
        if not (r.passed and det["distinct_regions"] == 2**m and det["chords_crossing"] == det["chords"]):
            bad[m] = det
    record(3, "witness regions", not bad, time.perf_counter() - t, 60, f"m=1..7 failures={sorted(bad)}")


def test_c4_one_layer_tightness():
    t = time.perf_counter()
    bad = []
    for w in range(1, 13):
        for seed in range(20):
            layer = general_position_layer(w, np.random.default_rng(1000 * w + seed))
            net = MlpNetwork((layer,), OutputHead(1.0, 0.0, 0.0), AffineLayer(np.ones((2, w)), np.zeros(2)))
            n = len(enumerate_regions(net, arrangement_bbox(layer)))
            if n != line_arrangement_max_regions(w):
                bad.append((w, seed, n))
    record(4, "one-layer tightness", not bad, time.perf_counter() - t, 10, f"240 nets failures={bad}")


def test_c5_composite_bound():
    t = time.perf_counter()
    bad = []
    for seed in range(200):
        rng = np.random.default_rng(seed)
        w, depth = int(rng.choice([2, 3, 4])), int(rng.choice([1, 2, 3]))
        net = random_mlp(rng, [w] * depth)
        n = len(enumerate_regions(net))
        g = grid_pattern_count(net)
        if not g <= n <= region_upper_bound(w, depth):
            bad.append((seed, w, depth, g, n))
    record(5, "composite bound", not bad, time.perf_counter() - t, 120, f"200 nets failures={bad}")


def test_c6_width_bound_arithmetic():
    t = time.perf_counter()
    worst = 0.0
    for m in range(1, 26):
        for d in range(1, 5):
            want = math.exp(math.log(2) * m / (2 * d))
            worst = max(worst, abs(width_lower_bound(m, d) - want) / want)
    consistent = all(verify_bound_consistency(range(1, 31), d).passed for d in range(1, 5))
    ok = worst <= 1e-12 and consistent
    record(6, "width bound arithmetic", ok, time.perf_counter() - t, 1, f"max rel err={worst:.1e} consistency={consistent}")


def test_c7_piecewise_linearity():
    t = time.perf_counter()
    worst, bad = 0.0, []
    for m in range(1, 7):
        net = collapse(build_network(m))
        r = verify_piecewise_linearity(net, enumerate_regions(net), samples_per_region=9, seed=0)
        worst = max(worst, r.details["max_deviation"], r.details["max_affine_deviation"])
        if not r.passed:
            bad.append(m)
    record(7, "piecewise linearity", not bad, time.perf_counter() - t, 30, f"m=1..6 max dev={worst:.1e} failures={bad}")


def test_c8_oracle_equivalence():
    t = time.perf_counter()
    equal, over = 0, []
    for seed in range(100):
        rng = np.random.default_rng(seed)
        widths = [int(rng.integers(1, 4)) for _ in range(int(rng.integers(1, 3)))]
        net = random_mlp(rng, widths)
        n, g = len(enumerate_regions(net)), grid_pattern_count(net, resolution=512)
        equal += g == n
        if g > n:
            over.append(seed)
    record(8, "oracle equivalence", equal >= 95 and not over, time.perf_counter() - t, 120, f"{equal}/100 equal, overcounts={over}")


def test_c9_negative_controls():
    t = time.perf_counter()
    survived = []
    for m in range(2, 9):
        staged = build_network(m)
        net = collapse(staged)
        flipped = MlpNetwork(net.hidden_layers, net.head.scaled(-1.0), net.readout)
        dropped = collapse(drop_last_fold(staged))
        for name, bad in (("flipped", flipped), ("dropped", dropped)):
            if verify_zero_error(bad, m, n_random=10**5, seed=0, margin=1e-6).passed:
                survived.append((name, m))
    record(9, "negative controls", not survived, time.perf_counter() - t, 10, f"m=2..8 controls passing={survived}")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    for test in tests:
        try:
            test()
        except AssertionError:
            pass
    for n in sorted(RESULTS):
        print(RESULTS[n])

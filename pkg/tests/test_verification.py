import json
import math

import numpy as np
import pytest

from depthfold.construction import build_network, drop_last_fold
from depthfold.errors import DomainError
from depthfold.network import MlpNetwork, OutputHead, collapse, random_mlp
from depthfold.regions import enumerate_regions
from depthfold.verification import (
    adversarial_points,
    default_epsilon,
    verify_bound_consistency,
    verify_lemma2,
    verify_piecewise_linearity,
    verify_zero_error,
    width_base,
    width_lower_bound,
)
from depthfold.geometry import ProblemInstance


def net_for(m):
    return collapse(build_network(m))


def test_width_bound_examples():
    assert width_lower_bound(4, 2) == 2.0
    assert width_lower_bound(20, 2) == 32.0
    assert all(width_lower_bound(2 * d, d) == 2.0 for d in range(1, 9))
    assert width_base(3) == pytest.approx(2 ** (1 / 6))
    for m in range(1, 20):
        assert width_lower_bound(m, 3) == pytest.approx(width_base(3) ** m, rel=1e-12)
    with pytest.raises(DomainError):
        width_lower_bound(0, 1)


def test_width_bound_monotone():
    for m in range(1, 40):
        for d in range(1, 6):
            assert width_lower_bound(m + 1, d) > width_lower_bound(m, d)
            assert width_lower_bound(m, d + 1) < width_lower_bound(m, d)


def test_bound_consistency_examples():
    r = verify_bound_consistency([6], 1)
    assert r.passed and r.details["exact_cases"] == 1
    assert math.ceil(width_lower_bound(6, 1)) ** 2 == 64
    assert verify_bound_consistency([1], 3).passed
    assert math.ceil(width_lower_bound(1, 3)) == 2


def test_default_epsilon():
    assert all(default_epsilon(m) == 1e-3 for m in range(1, 6))
    for m in range(6, 17):
        eps = default_epsilon(m)
        assert 0 < eps < 1e-3
        assert (1 + eps) * math.cos(math.pi / 2**m) < 1


def test_witnesses_m3():
    m = 3
    r = verify_lemma2(m, 1e-3, enumerate_regions(net_for(m)))
    assert r.passed and r.details["distinct_regions"] == 8


def test_witnesses_m1_two_points():
    r = verify_lemma2(1, None, enumerate_regions(net_for(1)))
    assert r.passed and r.details["witnesses"] == 2


@pytest.mark.parametrize("m", range(1, 9))
def test_witness_scale_law(m):
    r = verify_lemma2(m, None, enumerate_regions(net_for(m)))
    assert r.passed, r.details
    assert r.details["distinct_regions"] == 2**m


def test_fixed_epsilon_fails_chords_at_m7():
    # the fixed 1e-3 offset pushes the chord between adjacent witnesses outside P_7
    r = verify_lemma2(7, 1e-3, enumerate_regions(net_for(7)))
    assert not r.details["ok_chords_cross"]


def test_witnesses_flipped_head_fails_first_check():
    net = net_for(3)
    flipped = MlpNetwork(net.hidden_layers, net.head.scaled(-1.0), net.readout)
    r = verify_lemma2(3, 1e-3, enumerate_regions(flipped))
    assert not r.passed and not r.details["ok_all_outside_class"]


def test_witness_outside_bbox():
    d = enumerate_regions(net_for(2), (-0.5, -0.5, 0.5, 0.5))
    with pytest.raises(DomainError):
        verify_lemma2(2, 1e-3, d)


def test_zero_error_m5():
    r = verify_zero_error(net_for(5), 5, n_random=10**5, seed=0, margin=1e-6)
    assert r.passed and r.details["mismatches"] == 0
    assert r.details["origin_inside"]
    assert r.details["checked"] + r.details["dropped"] == 10**5 + r.details["n_adversarial"]


def test_zero_error_is_reproducible():
    a = verify_zero_error(net_for(3), 3, n_random=5000, seed=42)
    b = verify_zero_error(net_for(3), 3, n_random=5000, seed=42)
    assert a == b


def test_adversarial_points_straddle_boundary():
    problem = ProblemInstance.of(4)
    pts = adversarial_points(problem, 1e-6)
    n = len(problem.polygon)
    assert len(pts) == 4 * n + 1
    assert not pts[-1].any()


@pytest.mark.parametrize("m", [2, 3, 6])
def test_negative_controls(m):
    net = net_for(m)
    shifted = MlpNetwork(net.hidden_layers, OutputHead(net.head.a, net.head.b, net.head.c + 10), net.readout)
    flipped = MlpNetwork(net.hidden_layers, net.head.scaled(-1.0), net.readout)
    dropped = collapse(drop_last_fold(build_network(m)))
    for bad in (shifted, flipped, dropped):
        r = verify_zero_error(bad, m, n_random=20_000)
        assert not r.passed and r.details["mismatches"] > 0


def test_zero_error_rejects_negative_margin():
    with pytest.raises(DomainError):
        verify_zero_error(net_for(2), 2, margin=-1.0)


def test_linearity_identity_net_is_exact():
    net = MlpNetwork((), OutputHead(0.3, -1.2, 0.7))
    r = verify_piecewise_linearity(net, enumerate_regions(net))
    assert r.passed and r.details["regions"] == 1
    assert r.details["max_affine_deviation"] == 0.0


@pytest.mark.parametrize("m", [1, 4])
def test_linearity_constructed(m):
    net = net_for(m)
    r = verify_piecewise_linearity(net, enumerate_regions(net), 9, seed=1)
    assert r.passed and r.details["max_deviation"] <= 1e-8


def test_linearity_detects_wrong_decomposition():
    # regions from one network checked against another
    a, b = net_for(2), net_for(3)
    r = verify_piecewise_linearity(b, enumerate_regions(a))
    assert not r.passed
    # same shapes, different weights
    a, b = (random_mlp(np.random.default_rng(s), [3, 3]) for s in (1, 2))
    r = verify_piecewise_linearity(b, enumerate_regions(a))
    assert not r.passed and r.details["pattern_mismatches"] > 0


def test_linearity_needs_three_samples():
    net = net_for(1)
    with pytest.raises(DomainError):
        verify_piecewise_linearity(net, enumerate_regions(net), 2)


def test_report_json():
    r = verify_bound_consistency(range(1, 31), 2)
    doc = json.loads(json.dumps(r.to_dict()))
    assert doc["claim"] == "bounds(d=2)" and doc["passed"] is True
    assert set(doc) == {"claim", "passed", "details"}

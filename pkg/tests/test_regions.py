import itertools

import numpy as np
import pytest

from depthfold.construction import build_network
from depthfold.errors import DomainError, RegionBudgetExceeded
from depthfold.network import (
    AffineLayer,
    MlpNetwork,
    OutputHead,
    activation_bits,
    collapse,
    max_width,
    random_mlp,
)
from depthfold.regions import (
    arrangement_bbox,
    decomposition_to_json,
    enumerate_regions,
    general_position_layer,
    grid_pattern_count,
    grid_points,
    line_arrangement_max_regions,
    region_of_point,
    region_upper_bound,
    regions_of_points,
)
from depthfold.verification import verify_piecewise_linearity

HEAD = OutputHead(1.0, 0.0, 0.0)


def one_layer(weights, bias):
    w = np.asarray(weights, dtype=float)
    return MlpNetwork((AffineLayer(w, np.asarray(bias, dtype=float)),), HEAD, AffineLayer(np.ones((2, len(w))), np.zeros(2)))


def crossing_lines():
    return one_layer([[1, 0], [0, 1]], [0, 0])


def test_two_crossing_lines():
    d = enumerate_regions(crossing_lines())
    assert len(d) == 4
    assert {r.pattern for r in d.regions} == {((a, b),) for a in (0, 1) for b in (0, 1)}
    assert all(r.polygon.area == pytest.approx(4.0) for r in d.regions)


def test_single_region_and_lookup():
    net = one_layer([[1, 0]], [10])
    d = enumerate_regions(net)
    assert len(d) == 1
    assert region_of_point(d, (0.3, -1.7)) == 0


def test_split_by_vertical_line():
    d = enumerate_regions(one_layer([[1, 0]], [0]))
    assert len(d) == 2
    i = region_of_point(d, (1, 0))
    assert d.regions[i].polygon.centroid[0] > 0
    # on the shared edge: canonically first, every time
    ties = {region_of_point(d, (0, y)) for y in np.linspace(-1.9, 1.9, 7)}
    assert ties == {0}


def test_region_of_point_outside_bbox():
    d = enumerate_regions(crossing_lines())
    with pytest.raises(DomainError):
        region_of_point(d, (2.5, 0))


def test_canonical_order():
    d = enumerate_regions(random_mlp(np.random.default_rng(4), [3, 3]))
    keys = ["|".join("".join(map(str, l)) for l in r.pattern) for r in d.regions]
    assert keys == sorted(keys)
    again = enumerate_regions(d.net)
    assert [r.pattern for r in again.regions] == [r.pattern for r in d.regions]


def euler_count(layer, bbox):
    """Cells of a line arrangement inside a box: 1 + lines + interior crossings.

    Valid when every line meets the box interior and no three lines meet.
    """
    W, c = layer.weights, layer.bias
    x0, y0, x1, y1 = bbox
    inside = 0
    for i, j in itertools.combinations(range(len(W)), 2):
        px, py = np.linalg.solve(W[[i, j]], -c[[i, j]])
        inside += x0 < px < x1 and y0 < py < y1
    return 1 + len(W) + inside


def test_one_layer_matches_euler_oracle():
    exercised = 0
    for seed in range(30):
        rng = np.random.default_rng(seed)
        w = int(rng.integers(1, 9))
        layer = general_position_layer(w, rng)
        net = MlpNetwork((layer,), HEAD, AffineLayer(np.ones((2, w)), np.zeros(2)))
        assert len(enumerate_regions(net, arrangement_bbox(layer))) == line_arrangement_max_regions(w)
        # a smaller box that cuts off some crossings; usable only if every line still meets it
        x0, y0, x1, y1 = arrangement_bbox(layer, pad=0.0)
        bbox = (x0 + 0.3 * (x1 - x0), y0 + 0.3 * (y1 - y0), x1, y1)
        corners = np.array([(bbox[0], bbox[1]), (bbox[2], bbox[1]), (bbox[2], bbox[3]), (bbox[0], bbox[3])])
        side = corners @ layer.weights.T + layer.bias
        if np.all((side.min(axis=0) < -1e-6) & (side.max(axis=0) > 1e-6)):
            assert len(enumerate_regions(net, bbox)) == euler_count(layer, bbox)
            exercised += 1
    assert exercised >= 5


def test_grid_area_fractions():
    net = random_mlp(np.random.default_rng(11), [3, 2])
    d = enumerate_regions(net)
    res = 400
    pts = grid_points(d.bbox, res)
    bits = np.concatenate(activation_bits(net, pts), axis=1)
    keys, counts = np.unique(bits, axis=0, return_counts=True)
    grid_frac = {tuple(k.astype(int)): n / len(pts) for k, n in zip(keys, counts)}
    area = {}
    for r in d.regions:
        key = tuple(itertools.chain(*r.pattern))
        area[key] = area.get(key, 0.0) + r.polygon.area / d.bbox.area
    for key, frac in grid_frac.items():
        assert area[key] == pytest.approx(frac, abs=0.01)


def test_partition_areas():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        d = enumerate_regions(random_mlp(rng, [3] * int(rng.integers(1, 4))))
        assert sum(r.polygon.area for r in d.regions) == pytest.approx(16.0, rel=1e-6)


def test_regions_are_interior_disjoint():
    d = enumerate_regions(random_mlp(np.random.default_rng(8), [3, 3]))
    pts = np.random.default_rng(0).uniform(-2, 2, size=(3000, 2))
    hits = np.zeros(len(pts), dtype=int)
    for r in d.regions:
        hits += r.polygon.contains(pts, tol=-1e-9)
    assert hits.max() <= 1


@pytest.mark.parametrize("seed", range(40))
def test_upper_bound_on_random_nets(seed):
    rng = np.random.default_rng(seed)
    w, depth = int(rng.integers(2, 5)), int(rng.integers(1, 5))
    net = random_mlp(rng, [w] * depth)
    n = len(enumerate_regions(net))
    assert grid_pattern_count(net, resolution=128) <= n <= region_upper_bound(w, depth)


@pytest.mark.parametrize("m", range(1, 9))
def test_constructed_region_counts(m):
    net = collapse(build_network(m))
    n = len(enumerate_regions(net))
    assert 2**m <= n <= region_upper_bound(max_width(net), net.depth)


def test_region_invariant_at_nine_samples():
    net = random_mlp(np.random.default_rng(21), [4, 3])
    report = verify_piecewise_linearity(net, enumerate_regions(net), samples_per_region=9)
    assert report.passed, report.details


def test_flat_neuron_takes_constant_sign():
    net = MlpNetwork((AffineLayer(np.array([[0.0, 0.0], [1.0, 0.0]]), np.array([-1.0, 0.0])),), HEAD, AffineLayer(np.eye(2), np.zeros(2)))
    d = enumerate_regions(net)
    assert len(d) == 2
    assert all(r.pattern[0][0] == 0 for r in d.regions)


def test_budget_guard():
    net = random_mlp(np.random.default_rng(0), [4, 4])
    with pytest.raises(RegionBudgetExceeded):
        enumerate_regions(net, max_regions=3)


@pytest.mark.parametrize("bbox", [(0, 0, 0, 1), (1, 1, 0, 2)])
def test_degenerate_bbox(bbox):
    with pytest.raises(DomainError):
        enumerate_regions(crossing_lines(), bbox)


def test_arithmetic():
    assert [line_arrangement_max_regions(n) for n in (0, 1, 3, 4)] == [1, 2, 7, 11]
    assert region_upper_bound(2, 1) == 4
    assert region_upper_bound(3, 2) == 81
    assert all(region_upper_bound(1, d) == 1 for d in range(1, 6))
    with pytest.raises(DomainError):
        region_upper_bound(2, 32)
    with pytest.raises(DomainError):
        region_upper_bound(0, 1)
    with pytest.raises(DomainError):
        line_arrangement_max_regions(-1)


def test_grid_count_examples():
    constant = one_layer([[1, 1], [2, 3]], [1e6, 1e6])
    assert grid_pattern_count(constant) == 1
    assert grid_pattern_count(crossing_lines(), resolution=64) == 4
    with pytest.raises(DomainError):
        grid_pattern_count(constant, resolution=4)


def test_regions_of_points_matches_single_lookup():
    d = enumerate_regions(random_mlp(np.random.default_rng(2), [3, 3]))
    pts = np.random.default_rng(9).uniform(-2, 2, size=(50, 2))
    assert regions_of_points(d, pts) == [region_of_point(d, p) for p in pts]
    for p, i in zip(pts, regions_of_points(d, pts)):
        assert d.regions[i].polygon.contains(p, tol=1e-9)


def test_json_export_shape():
    doc = decomposition_to_json(enumerate_regions(crossing_lines()))
    assert len(doc) == 4
    assert set(doc[0]) == {"vertices", "pattern", "pre_sign"}
    assert doc[0]["pattern"] == ["00"]


"""
Counting linear regions
=======================

Inside a region every ReLU keeps its on/off state, so the network is affine
there.  Regions are found by clipping polygons layer by layer.
"""
import numpy as np

from depthfold import (
    build_network,
    collapse,
    enumerate_regions,
    grid_pattern_count,
    max_width,
    random_mlp,
    region_upper_bound,
)

for m in range(1, 8):
    net = collapse(build_network(m))
    d = enumerate_regions(net)
    print(f"m={m}: {len(d):4d} regions in [-2,2]^2  (need >= {2**m})")

# one region up close
d = enumerate_regions(collapse(build_network(2)))
r = d.regions[0]
print("pattern:", r.pattern)
print("vertices:\n", np.round(r.polygon.vertices, 4))
print("pre-sign on it: %+.4f x %+.4f y %+.4f" % r.pre_sign)

# random nets never beat w^(2d), and the pixel oracle never beats the exact count
rng = np.random.default_rng(1)
for _ in range(5):
    w, depth = int(rng.integers(2, 5)), int(rng.integers(1, 4))
    net = random_mlp(rng, [w] * depth)
    n = len(enumerate_regions(net))
    print(f"w={w} d={depth}: exact {n:3d}, grid {grid_pattern_count(net, resolution=512):3d}, bound {region_upper_bound(max_width(net), depth)}")

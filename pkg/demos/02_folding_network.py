"""
Folding the plane
=================

The network for f_m never learns anything: it folds the plane onto a thin
wedge using |x|, |y| and a few rotations, then draws a single line.
"""
from itertools import groupby

import numpy as np

from depthfold import build_network, collapse, classify, max_width, param_count, run_stages

staged = build_network(3)
print(len(staged.stages), "stages:", " ".join(k for k, _ in groupby(staged.labels)))

# watch three points travel through the folds
pts = np.array([[-0.55, 0.62], [0.3, -0.85], [-0.2, -0.15]])
trace = run_stages(staged, pts, trace=True)
labels = ("input",) + staged.labels
for i, (lab, img) in enumerate(zip(labels, trace)):
    if i == 0 or i == len(labels) - 1 or labels[i + 1] != lab:
        print(f"{lab:>14}: " + "  ".join(f"({x:+.3f},{y:+.3f})" for x, y in img))

# norms never change: folds and rotations are isometries on the pieces
print("norms in :", np.round(np.hypot(*pts.T), 6))
print("norms out:", np.round(np.hypot(*trace[-1].T), 6))

# the head is one line, x0 = inradius
h = staged.head
print(f"head: {h.a:+.3f} x0 {h.b:+.3f} x1 {h.c:+.6f}")

# merging adjacent linear stages gives an ordinary MLP
for m in (1, 4, 8, 12):
    net = collapse(build_network(m))
    print(f"m={m:2d}: {net.depth} hidden layers, width {max_width(net)}, {param_count(net)} parameters")

net = collapse(build_network(3))
print("origin ->", classify(net, (0, 0)), "  (0, 1.001) ->", classify(net, (0, 1.001)))

"""
The polygon family
==================

f_m labels a point +1 inside P_m, the regular polygon with 2**(m+1) corners
on the unit circle, and -1 outside.  Larger m means a rounder polygon.
"""
import math

import numpy as np

from depthfold import ProblemInstance, classify_points

for m in (1, 2, 3, 5):
    p = ProblemInstance.of(m)
    print(f"m={m}: {len(p.polygon):3d} corners, area {p.polygon.area:.5f}, inradius {p.inradius:.5f}")

# the area creeps up to pi
print("pi =", round(math.pi, 5))

# ground truth on a few points; 0 means "on the boundary"
p3 = ProblemInstance.of(3)
pts = np.array([[0, 0], [0, 0.99], [0, 1.001], [p3.inradius, 0], [1, 1]])
print(classify_points(p3, pts))

# the fraction of [-1,1]^2 covered by P_m estimates area / 4
rng = np.random.default_rng(0)
sample = rng.uniform(-1, 1, size=(200_000, 2))
for m in (1, 4):
    frac = (classify_points(ProblemInstance.of(m), sample) == 1).mean()
    print(f"m={m}: monte carlo {4 * frac:.4f} vs exact {ProblemInstance.of(m).polygon.area:.4f}")

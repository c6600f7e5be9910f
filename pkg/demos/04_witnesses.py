"""
Why shallow nets need many regions
==================================

Push every second corner of P_m out a little.  Any two of these points are
labelled -1, but the segment between them cuts through P_m, so no affine
piece can cover both.  That forces 2**m regions.
"""
import numpy as np

from depthfold import ProblemInstance, build_network, collapse, enumerate_regions, v_even_prime, verify_lemma2
from depthfold.geometry import chord_crosses_boundary
from depthfold.regions import regions_of_points
from depthfold.verification import default_epsilon

m = 3
problem = ProblemInstance.of(m)
w = np.array(v_even_prime(problem, 1e-3))
print(len(w), "witnesses:\n", np.round(w, 4))

print("chord 0-1 enters P_3:", chord_crosses_boundary(problem, w[0], w[1]))

d = enumerate_regions(collapse(build_network(m)))
print("region of each witness:", regions_of_points(d, w))

for m in range(1, 9):
    r = verify_lemma2(m, None, enumerate_regions(collapse(build_network(m))))
    det = r.details
    print(f"m={m}: eps={det['epsilon']:.2e} distinct={det['distinct_regions']:3d} chords {det['chords_crossing']}/{det['chords']} -> {'ok' if r.passed else 'FAIL'}")

# a fixed offset stops working once the gap to the circle is smaller than it
print("default eps at m=7:", default_epsilon(7))

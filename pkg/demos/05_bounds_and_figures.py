"""
Width bounds and pictures
=========================

A depth-d net solving f_m needs width at least 2**(m / 2d); the folding net
gets by with width 4 and depth m + 2.  The figures land in ./figures.
"""
from pathlib import Path

from depthfold import width_lower_bound
from depthfold.render import RenderSpec, write_svg

print(" m   d=1      d=2     d=3")
for m in (4, 8, 16, 24, 32):
    print(f"{m:2d}", *(f"{width_lower_bound(m, d):8.1f}" for d in (1, 2, 3)))

out = Path("figures")
out.mkdir(exist_ok=True)
for spec in (
    RenderSpec("problem", m=3),
    RenderSpec("folds", m=3, width=800, height=400),
    RenderSpec("regions", m=3),
    RenderSpec("witness", m=3),
    RenderSpec("arrangement", n=4),
):
    path = out / f"{spec.target.value}.svg"
    write_svg(spec, path)
    print("wrote", path, path.stat().st_size, "bytes")

# How the two reflection-symmetry scores react to progressive symmetry
# breaking, and why rotating a drawing does not change its score.

import numpy as np

from symdraw.graphgen import EdgeFeature, gen_sym_graph
from symdraw.layouts import (
    bbox_diagonal,
    displace_random_vertices,
    layout_reflectional_mirror,
    rotate_layout,
)
from symdraw.metrics import classify_by_score, klapaukh_style_score, purchase_style_score

rng = np.random.default_rng(7)
g = gen_sym_graph(12, 14, (EdgeFeature.RANDOM_NON_CROSSING, EdgeFeature.CROSSING), rng)
layout = layout_reflectional_mirror(g, rng)

print(f"mirror layout: n={g.n}, m={g.m}, diagonal={bbox_diagonal(layout.positions):.3f}\n")
print(f"{'displacement':>14}  {'purchase':>8}  {'klapaukh':>8}  verdict")
for mag in (0.0, 0.02, 0.05, 0.10, 0.20, 0.35):
    if mag == 0.0:
        probe = layout
    else:
        probe = displace_random_vertices(
            layout, np.random.default_rng(99), count=3, magnitude_range=(mag, mag)
        )
    p = purchase_style_score(probe)
    k = klapaukh_style_score(probe)
    verdict = "symmetric" if classify_by_score(p) else "non-symmetric"
    print(f"{mag:>13.2f}x  {p.value:>8.3f}  {k.value:>8.3f}  {verdict}")

print("\nscores under rotation of the intact layout:")
base = purchase_style_score(layout).value
for angle in (0, 30, 90, 137, 261):
    rotated = rotate_layout(layout, angle)
    p = purchase_style_score(rotated)
    print(
        f"  {angle:3d} deg: purchase={p.value:.3f} "
        f"(axis angle {np.degrees(p.best_axis.theta):6.1f} deg), drift={abs(p.value - base):.1e}"
    )

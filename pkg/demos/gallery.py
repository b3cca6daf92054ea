# Render one sample of every dataset class into a single contact sheet.
#
# Output: demos/out/gallery.png, a 2x4 grid in the class order printed below.

from pathlib import Path

import numpy as np

from symdraw.dataset import build_sample
from symdraw.layouts import LayoutClass
from symdraw.raster import encode_png, fit_view, rasterize

SEED = 20240817
ORDER = [
    LayoutClass.SMALL_SYM,
    LayoutClass.SMALL_NON_SYM,
    LayoutClass.REFLECTIONAL_LARGE,
    LayoutClass.NON_SYM_LARGE,
    LayoutClass.HORIZONTAL_LARGE,
    LayoutClass.VERTICAL_LARGE,
    LayoutClass.ROTATIONAL_LARGE,
    LayoutClass.TRANSLATIONAL_LARGE,
]

tiles = []
for label in ORDER:
    layout = build_sample(label, SEED, f"gallery-{label.value}")
    img = rasterize(layout, fit_view(layout))
    tiles.append(img)
    print(f"{label.value:20s} n={layout.graph.n:2d} m={layout.graph.m:2d} "
          f"rotation={layout.rotation_deg:6.1f} deg")

gap = 10
cell = 200
sheet = np.full((2 * cell + 3 * gap, 4 * cell + 5 * gap), 220, dtype=np.uint8)
for idx, img in enumerate(tiles):
    r, c = divmod(idx, 4)
    y = gap + r * (cell + gap)
    x = gap + c * (cell + gap)
    sheet[y : y + cell, x : x + cell] = img

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
(out / "gallery.png").write_bytes(encode_png(sheet))
print(f"\nwrote {out / 'gallery.png'}  (rows follow the printed class order)")

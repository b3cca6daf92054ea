"""Bit-exact rendering of layouts to 200x200 binary images.

White background (255), black ink (0).  Each vertex is a 3x3 block centered
on its rounded pixel position; each edge is a 1 px Bresenham line between the
rounded endpoint centers, drawn before the vertex blocks.  Rounding is
half-away-from-zero, fixed here so renders are reproducible byte for byte.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .layouts import Layout

__all__ = [
    "ViewTransform",
    "decode_png",
    "encode_png",
    "fit_view",
    "rasterize",
    "round_half_away",
]

DEFAULT_SIZE = 200
DEFAULT_MARGIN = 6


@dataclass(frozen=True)
class ViewTransform:
    """Uniform map from layout units to pixel coordinates.

    ``px = scale * x + offset_x`` and ``py = offset_y - scale * y`` (the y
    axis points up in layout space, down in image space).
    """

    scale: float
    offset_x: float
    offset_y: float
    width: int = DEFAULT_SIZE
    height: int = DEFAULT_SIZE
    margin: int = DEFAULT_MARGIN

    def apply(self, positions: np.ndarray) -> np.ndarray:
        positions = np.asarray(positions, dtype=np.float64)
        out = np.empty_like(positions)
        out[:, 0] = self.scale * positions[:, 0] + self.offset_x
        out[:, 1] = self.offset_y - self.scale * positions[:, 1]
        return out


def round_half_away(x: np.ndarray) -> np.ndarray:
    """Round to nearest integer, halves away from zero."""
    x = np.asarray(x, dtype=np.float64)
    return np.trunc(x + np.copysign(0.5, x)).astype(np.int64)


def fit_view(
    l: Layout,
    width: int = DEFAULT_SIZE,
    height: int = DEFAULT_SIZE,
    margin: int = DEFAULT_MARGIN,
) -> ViewTransform:
    """Uniform scale centering the layout bbox inside the margin frame."""
    lo = l.positions.min(axis=0)
    hi = l.positions.max(axis=0)
    extent = hi - lo
    if extent.max() <= 0.0:
        raise ValueError("degenerate layout: bounding box has no extent")
    scales = []
    if extent[0] > 0.0:
        scales.append((width - 2 * margin) / extent[0])
    if extent[1] > 0.0:
        scales.append((height - 2 * margin) / extent[1])
    scale = min(scales)
    cx, cy = (lo + hi) / 2.0
    return ViewTransform(
        scale=scale,
        offset_x=width / 2.0 - scale * cx,
        offset_y=height / 2.0 + scale * cy,
        width=width,
        height=height,
        margin=margin,
    )


def _draw_line(img: np.ndarray, x0: int, y0: int, x1: int, y1: int) -> None:
    """1 px Bresenham walk; pixels outside the canvas are clipped."""
    h, w = img.shape
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        if 0 <= x < w and 0 <= y < h:
            img[y, x] = 0
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy


def rasterize(l: Layout, vt: ViewTransform) -> np.ndarray:
    """Render to a (height, width) uint8 array with values in {0, 255}."""
    img = np.full((vt.height, vt.width), 255, dtype=np.uint8)
    px = round_half_away(vt.apply(l.positions))
    for u, v in l.graph.sorted_edges():
        _draw_line(img, int(px[u, 0]), int(px[u, 1]), int(px[v, 0]), int(px[v, 1]))
    for x, y in px:
        y0, y1 = max(int(y) - 1, 0), min(int(y) + 2, vt.height)
        x0, x1 = max(int(x) - 1, 0), min(int(x) + 2, vt.width)
        img[y0:y1, x0:x1] = 0
    return img


def encode_png(img: np.ndarray) -> bytes:
    """Lossless single-channel 8-bit PNG bytes."""
    img = np.ascontiguousarray(img, dtype=np.uint8)
    buf = io.BytesIO()
    Image.fromarray(img, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as im:
        return np.array(im.convert("L"), dtype=np.uint8)

"""Coordinate assignment for the eight dataset classes.

All constructors are pure functions of their arguments and an explicit
seeded generator.  Symmetric constructions are exact in double precision:
mirror copies negate the x coordinate, translated copies subtract a constant,
rotational copies apply an exact rotation matrix per copy.  Non-symmetric
constructors re-sample until the exact-mirror oracle fails at the class
tolerance, so labels are sound by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .graphgen import (
    MAX_RETRIES,
    Graph,
    MirrorPairing,
    RetryExhaustedError,
    connect_components,
    crossing_edges,
    is_connected,
    is_mirror_closed,
    parallel_edges,
)

__all__ = [
    "Layout",
    "LayoutClass",
    "SizeClass",
    "NonSymFeature",
    "MIN_VERTEX_SEPARATION",
    "bbox_diagonal",
    "displace_random_vertices",
    "layout_nonsym_feature",
    "layout_nonsym_perturb",
    "layout_nonsym_random",
    "layout_parallel_lines",
    "layout_reflectional_mirror",
    "layout_rotational",
    "layout_translational",
    "normalize_layout",
    "rotate_layout",
]

#: Minimum distance between any two vertices in generated layouts; roughly
#: 4 px after the raster mapping, so 3x3 vertex squares never merge.
MIN_VERTEX_SEPARATION = 0.04

#: Positions are kept inside this box after normalization (pre-raster space).
POSITION_BOUND = 1.2

#: Half-layouts draw x in (AXIS_GAP, 1]; the gap keeps the two mirror halves
#: visually separated from the axis.
AXIS_GAP = 0.05


class LayoutClass(Enum):
    SMALL_SYM = "SmallSym"
    SMALL_NON_SYM = "SmallNonSym"
    REFLECTIONAL_LARGE = "ReflectionalLarge"
    NON_SYM_LARGE = "NonSymLarge"
    HORIZONTAL_LARGE = "HorizontalLarge"
    VERTICAL_LARGE = "VerticalLarge"
    ROTATIONAL_LARGE = "RotationalLarge"
    TRANSLATIONAL_LARGE = "TranslationalLarge"


SYMMETRIC_CLASSES = frozenset(
    {
        LayoutClass.SMALL_SYM,
        LayoutClass.REFLECTIONAL_LARGE,
        LayoutClass.HORIZONTAL_LARGE,
        LayoutClass.VERTICAL_LARGE,
        LayoutClass.ROTATIONAL_LARGE,
        LayoutClass.TRANSLATIONAL_LARGE,
    }
)


class SizeClass(Enum):
    SMALL = (5, 8)
    LARGE = (10, 20)

    def draw(self, rng: np.random.Generator) -> int:
        lo, hi = self.value
        return int(rng.integers(lo, hi + 1))


class NonSymFeature(Enum):
    PARALLEL_LINES = "parallel-lines"
    CROSSINGS = "crossings"


@dataclass
class Layout:
    graph: Graph
    positions: np.ndarray  # (n, 2) float64
    label: LayoutClass
    rotation_deg: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        self.positions = np.asarray(self.positions, dtype=np.float64)
        if self.positions.shape != (self.graph.n, 2):
            raise ValueError(
                f"positions shape {self.positions.shape} does not match n={self.graph.n}"
            )
        if not np.isfinite(self.positions).all():
            raise ValueError("positions must be finite")


def bbox_diagonal(positions: np.ndarray) -> float:
    extent = positions.max(axis=0) - positions.min(axis=0)
    return float(np.hypot(extent[0], extent[1]))


def _too_close(p, placed, min_sep) -> bool:
    return any(np.hypot(p[0] - q[0], p[1] - q[1]) < min_sep for q in placed)


def _sample_point(rng, placed, min_sep, x_lo, x_hi):
    for _ in range(MAX_RETRIES):
        p = (x_lo + (x_hi - x_lo) * rng.random(), -1.0 + 2.0 * rng.random())
        if not _too_close(p, placed, min_sep):
            return p
    raise RetryExhaustedError("could not place a vertex with the required separation")


def _sample_half_positions(count: int, rng: np.random.Generator) -> np.ndarray:
    """Positions in (AXIS_GAP, 1] x [-1, 1] with pairwise minimum separation."""
    placed: list[tuple[float, float]] = []
    for _ in range(count):
        placed.append(_sample_point(rng, placed, MIN_VERTEX_SEPARATION, AXIS_GAP, 1.0))
    return np.array(placed, dtype=np.float64)


def layout_reflectional_mirror(
    g: Graph, rng: np.random.Generator, label: LayoutClass = LayoutClass.REFLECTIONAL_LARGE
) -> Layout:
    """Mirror drawing of a mirror-closed graph about the y axis.

    Vertex ``i < n//2`` gets ``(x, y)`` with ``x > 0``; its partner gets
    ``(-x, y)``; for odd ``n`` the fixed vertex sits on the axis at ``x = 0``.
    """
    if not is_mirror_closed(g):
        raise ValueError("graph is not closed under the mirror pairing")
    h = g.n // 2
    half = _sample_half_positions(h, rng)
    positions = np.zeros((g.n, 2), dtype=np.float64)
    positions[:h] = half
    positions[h : 2 * h] = half * np.array([-1.0, 1.0])
    if g.n % 2:
        placed = [tuple(p) for p in positions[: 2 * h]]
        for _ in range(MAX_RETRIES):
            y = -1.0 + 2.0 * rng.random()
            if not _too_close((0.0, y), placed, MIN_VERTEX_SEPARATION):
                positions[g.n - 1] = (0.0, y)
                break
        else:
            raise RetryExhaustedError("could not place the axis vertex")
    return Layout(graph=g, positions=positions, label=label)


def layout_parallel_lines(
    half: Graph,
    k_connect: int,
    rng: np.random.Generator,
    label: LayoutClass = LayoutClass.REFLECTIONAL_LARGE,
    mode: str = "parallel-only",
) -> Layout:
    """Two mirrored copies of ``half`` joined by ``k_connect`` connecting edges.

    In parallel-only mode every connecting edge joins a vertex to its mirror
    copy, which shares its y coordinate, so the connectors render as the
    horizontal "parallel lines" feature.
    """
    if not is_connected(half):
        raise ValueError("half component must be connected")
    h = half.n
    doubled = Graph(
        2 * h,
        half.edges | frozenset((u + h, v + h) for u, v in half.edges),
    )
    g = connect_components(doubled, k_connect, mode, rng)
    half_pos = _sample_half_positions(h, rng)
    positions = np.concatenate([half_pos, half_pos * np.array([-1.0, 1.0])])
    return Layout(graph=g, positions=positions, label=label)


def rotate_layout(l: Layout, angle_deg: float) -> Layout:
    """Rotate all positions about the layout centroid; an exact isometry."""
    theta = math.radians(angle_deg)
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    centroid = l.positions.mean(axis=0)
    positions = (l.positions - centroid) @ rot.T + centroid
    return replace(l, positions=positions, rotation_deg=(l.rotation_deg + angle_deg) % 360.0)


def normalize_layout(l: Layout, bound: float = POSITION_BOUND) -> Layout:
    """Uniformly scale about the origin so positions fit in [-bound, bound]^2.

    Uniform scaling preserves mirror, rotational and translational symmetry
    exactly, so class oracles are unaffected.
    """
    max_abs = float(np.abs(l.positions).max())
    if max_abs <= bound:
        return l
    return replace(l, positions=l.positions * (bound / max_abs))


def layout_translational(
    half: Graph,
    k_connect: int,
    rng: np.random.Generator,
    delta: float | None = None,
    label: LayoutClass = LayoutClass.TRANSLATIONAL_LARGE,
) -> Layout:
    """Component plus an exact translate at ``(x - delta, y)``.

    ``delta`` defaults to the placed component's width plus a 0.1 margin; a
    smaller shift would overlap the two bounding boxes and is rejected.
    """
    if not is_connected(half):
        raise ValueError("half component must be connected")
    h = half.n
    half_pos = _sample_half_positions(h, rng)
    width = float(half_pos[:, 0].max() - half_pos[:, 0].min())
    min_delta = width + 0.1
    if delta is None:
        delta = min_delta
    elif delta < min_delta - 1e-12:
        raise ValueError(
            f"delta={delta} overlaps the component bounding boxes (need >= {min_delta})"
        )
    doubled = Graph(
        2 * h,
        half.edges | frozenset((u + h, v + h) for u, v in half.edges),
    )
    g = connect_components(doubled, k_connect, "parallel-only", rng)
    positions = np.concatenate([half_pos, half_pos - np.array([delta, 0.0])])
    return Layout(graph=g, positions=positions, label=label)


def layout_rotational(
    component: Graph,
    k_axes: int,
    rng: np.random.Generator,
    label: LayoutClass = LayoutClass.ROTATIONAL_LARGE,
) -> Layout:
    """``k_axes`` rotated copies of a component, consecutive copies joined twice.

    The base component is sampled inside the wedge of angle ``2*pi/k`` at
    radius in [0.3, 1.0] (with angular padding so copies stay separated),
    then copy ``j`` is the base rotated by ``j * 2*pi/k`` about the origin.
    Two chosen vertices connect each copy to the rotationally next one.
    """
    if not 4 <= k_axes <= 10:
        raise ValueError(f"need 4 <= k_axes <= 10, got {k_axes}")
    if component.n < 2:
        raise ValueError("component needs at least 2 vertices")
    if not is_connected(component):
        raise ValueError("component must be connected")

    c = component.n
    wedge = 2.0 * math.pi / k_axes
    for _ in range(MAX_RETRIES):
        placed: list[tuple[float, float]] = []
        ok = True
        for _ in range(c):
            for _ in range(MAX_RETRIES):
                phi = wedge * (0.15 + 0.7 * rng.random())
                r = 0.3 + 0.7 * rng.random()
                p = (r * math.cos(phi), r * math.sin(phi))
                if not _too_close(p, placed, MIN_VERTEX_SEPARATION):
                    placed.append(p)
                    break
            else:
                ok = False
                break
        if ok:
            break
    else:
        raise RetryExhaustedError("component does not fit the wedge without overlap")

    base = np.array(placed, dtype=np.float64)
    positions = np.zeros((k_axes * c, 2), dtype=np.float64)
    for j in range(k_axes):
        theta = j * wedge
        rot = np.array(
            [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
        )
        positions[j * c : (j + 1) * c] = base @ rot.T

    a, b = sorted(int(i) for i in rng.choice(c, size=2, replace=False))
    edges = set()
    for j in range(k_axes):
        off, nxt = j * c, ((j + 1) % k_axes) * c
        for u, v in component.edges:
            edges.add((min(off + u, off + v), max(off + u, off + v)))
        edges.add((min(off + a, nxt + a), max(off + a, nxt + a)))
        edges.add((min(off + b, nxt + b), max(off + b, nxt + b)))
    g = Graph(k_axes * c, frozenset(edges))
    return Layout(graph=g, positions=positions, label=label)


def _fails_mirror_oracle(l: Layout, tol: float) -> bool:
    from .metrics import exact_mirror_oracle

    return exact_mirror_oracle(l, tol) is None


def layout_nonsym_random(
    g: Graph, rng: np.random.Generator, label: LayoutClass = LayoutClass.SMALL_NON_SYM
) -> Layout:
    """Random drawing of a symmetric graph; certified non-symmetric.

    Vertices with id below ``n//2`` get positive x, the rest negative x (the
    odd fixed vertex may land anywhere), y is uniform, so the drawing keeps
    the two-cloud look of its symmetric sibling without the symmetry.
    """
    h = g.n // 2
    fixed = g.n - 1 if g.n % 2 else None
    for _ in range(MAX_RETRIES):
        placed: list[tuple[float, float]] = []
        for i in range(g.n):
            if i == fixed:
                x_lo, x_hi = -1.0, 1.0
            elif i < h:
                x_lo, x_hi = 0.0, 1.0
            else:
                x_lo, x_hi = -1.0, 0.0
            placed.append(_sample_point(rng, placed, MIN_VERTEX_SEPARATION, x_lo, x_hi))
        layout = Layout(graph=g, positions=np.array(placed), label=label)
        if _fails_mirror_oracle(layout, 1e-6):
            return layout
    raise RetryExhaustedError("random positions kept passing the mirror oracle")


def layout_nonsym_feature(
    l: Layout,
    feature: NonSymFeature,
    rng: np.random.Generator,
    label: LayoutClass = LayoutClass.SMALL_NON_SYM,
) -> Layout:
    """Break a symmetric layout while keeping its decoy feature intact.

    Vertices incident to the feature edges (parallel connectors, or edges
    crossing the axis) keep their positions; every other vertex is re-sampled
    anywhere in the box until the mirror oracle fails.
    """
    g = l.graph
    if feature is NonSymFeature.PARALLEL_LINES:
        feature_edges = parallel_edges(g)
    else:
        feature_edges = crossing_edges(g)
    if not feature_edges:
        raise ValueError(f"layout does not exhibit the {feature.value} feature")
    keep = {u for e in feature_edges for u in e}
    movable = [i for i in range(g.n) if i not in keep]
    if not movable:
        raise ValueError("every vertex is incident to a feature edge; nothing to move")

    for _ in range(MAX_RETRIES):
        positions = l.positions.copy()
        placed = [tuple(positions[i]) for i in keep]
        for i in movable:
            p = _sample_point(rng, placed, MIN_VERTEX_SEPARATION, -1.0, 1.0)
            positions[i] = p
            placed.append(p)
        out = Layout(graph=g, positions=positions, label=label, seed=l.seed)
        if _fails_mirror_oracle(out, 1e-6):
            return out
    raise RetryExhaustedError("shuffled positions kept passing the mirror oracle")


def displace_random_vertices(
    l: Layout,
    rng: np.random.Generator,
    count: int | None = None,
    magnitude_range: tuple[float, float] = (0.05, 0.15),
) -> Layout:
    """Displace ``count`` random vertices by vectors sized relative to the
    bounding-box diagonal.  No asymmetry check; see layout_nonsym_perturb."""
    n = l.graph.n
    if count is None:
        count = math.ceil(n / 5)
    if not 1 <= count <= n:
        raise ValueError(f"need 1 <= count <= {n}, got {count}")
    diag = bbox_diagonal(l.positions)
    picks = sorted(int(i) for i in rng.choice(n, size=count, replace=False))
    positions = l.positions.copy()
    for i in picks:
        angle = 2.0 * math.pi * rng.random()
        lo, hi = magnitude_range
        mag = (lo + (hi - lo) * rng.random()) * diag
        positions[i] += mag * np.array([math.cos(angle), math.sin(angle)])
    return replace(l, positions=positions)


def layout_nonsym_perturb(
    l: Layout,
    rng: np.random.Generator,
    label: LayoutClass = LayoutClass.NON_SYM_LARGE,
    magnitude_range: tuple[float, float] = (0.05, 0.15),
) -> Layout:
    """Slightly perturb ceil(n/5) vertices of a symmetric layout.

    Displacements are uniform in direction with magnitude in
    ``magnitude_range`` times the bounding-box diagonal; re-drawn until the
    exact-mirror oracle fails at 0.02 * diagonal.
    """
    diag = bbox_diagonal(l.positions)
    for _ in range(MAX_RETRIES):
        out = displace_random_vertices(l, rng, magnitude_range=magnitude_range)
        out = replace(out, label=label)
        if _fails_mirror_oracle(out, 0.02 * diag):
            return out
    raise RetryExhaustedError("perturbed positions kept passing the mirror oracle")

"""Reflectional-symmetry scoring of layouts.

Two scores in [0, 1] are provided, both defined normatively here:

* ``purchase_style_score`` reflects every vertex across each candidate axis
  and counts edges whose reflected endpoints land on an existing edge; the
  score of an axis is matched-edges / m and the layout score is the maximum
  over axes.
* ``klapaukh_style_score`` lets every pair of similar-length edges vote for
  the reflection axis that maps one onto the other (plus one self-vote per
  edge for its perpendicular bisector) and reads off the best-supported axis.

``exact_mirror_oracle`` (and its rotation/translation siblings) are the
brute-force ground-truth checks used by the generators and dataset
verification: they demand a vertex permutation realizing the isometry within
an absolute tolerance *and* inducing a graph automorphism.

Axis convention: ``theta`` is the angle of the axis line measured from the
positive x direction, in [0, pi); a vertical mirror axis has theta = pi/2.
``rho`` is the signed distance of the line from the origin along the normal
``(-sin theta, cos theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .layouts import Layout

__all__ = [
    "Axis",
    "SymmetryScore",
    "candidate_axes",
    "classify_by_score",
    "exact_mirror_oracle",
    "exact_rotation_oracle",
    "exact_translation_oracle",
    "klapaukh_style_score",
    "purchase_style_score",
    "reflect_point",
]

_EPS = 1e-12


@dataclass(frozen=True)
class Axis:
    theta: float  # line angle in [0, pi)
    rho: float  # signed distance from origin along (-sin theta, cos theta)

    @property
    def normal(self) -> np.ndarray:
        return np.array([-math.sin(self.theta), math.cos(self.theta)])


@dataclass(frozen=True)
class SymmetryScore:
    value: float
    best_axis: Axis | None
    support: int


def _canonical_theta(theta: float) -> float:
    t = theta % math.pi
    if t >= math.pi:  # guard against fp wrap
        t -= math.pi
    return t


def _axis_through(p: np.ndarray, q: np.ndarray) -> Axis:
    d = q - p
    t = _canonical_theta(math.atan2(d[1], d[0]))
    normal = np.array([-math.sin(t), math.cos(t)])
    return Axis(theta=t, rho=float(p @ normal))


def _perp_bisector(p: np.ndarray, q: np.ndarray) -> Axis:
    d = q - p
    t = _canonical_theta(math.atan2(d[1], d[0]) + 0.5 * math.pi)
    normal = np.array([-math.sin(t), math.cos(t)])
    mid = 0.5 * (p + q)
    return Axis(theta=t, rho=float(mid @ normal))


def _axes_close(a: Axis, b: Axis, angle_tol: float, dist_tol: float) -> bool:
    dt = abs(a.theta - b.theta)
    if dt <= angle_tol:
        return abs(a.rho - b.rho) <= dist_tol
    if math.pi - dt <= angle_tol:
        # near the angular wrap the normal flips, so compare mirrored offsets
        return abs(a.rho + b.rho) <= dist_tol
    return False


def reflect_point(p, a: Axis) -> np.ndarray:
    """Euclidean reflection of one point (or an (n, 2) array) across an axis."""
    p = np.asarray(p, dtype=np.float64)
    n = a.normal
    d = p @ n - a.rho
    return p - 2.0 * np.multiply.outer(d, n)


def _raw_axes(positions: np.ndarray) -> list[Axis]:
    """Perpendicular bisectors and through-lines of all vertex pairs."""
    n = len(positions)
    iu, ju = np.triu_indices(n, 1)
    d = positions[ju] - positions[iu]
    keep = np.hypot(d[:, 0], d[:, 1]) >= _EPS
    iu, ju, d = iu[keep], ju[keep], d[keep]
    if len(iu) == 0:
        return []
    t_through = np.arctan2(d[:, 1], d[:, 0]) % math.pi
    t_through[t_through >= math.pi] = 0.0
    t_bisector = (t_through + 0.5 * math.pi) % math.pi
    thetas = np.concatenate([t_bisector, t_through])
    anchors = np.concatenate([0.5 * (positions[iu] + positions[ju]), positions[iu]])
    normals = np.stack([-np.sin(thetas), np.cos(thetas)], axis=1)
    rhos = (anchors * normals).sum(axis=1)
    return [Axis(float(t), float(r)) for t, r in zip(thetas, rhos)]


def _dedup_axes(axes: list[Axis], angle_tol: float, dist_tol: float) -> list[Axis]:
    kept: list[Axis] = []
    for a in sorted(axes, key=lambda x: (x.theta, x.rho)):
        if not any(_axes_close(a, b, angle_tol, dist_tol) for b in kept):
            kept.append(a)
    return kept


def candidate_axes(l: "Layout", angle_tol_deg: float = 2.0, dist_tol: float = 0.02) -> list[Axis]:
    """Perpendicular bisectors and through-lines of all vertex pairs, deduplicated."""
    if l.graph.n < 2:
        raise ValueError("need at least 2 vertices")
    return _dedup_axes(_raw_axes(l.positions), math.radians(angle_tol_deg), dist_tol)


def _scoring_axes(l: "Layout") -> list[Axis]:
    # Near-exact dedup only: merging genuinely distinct axes would change the
    # max-over-axes scores relative to an unclustered evaluation.  Duplicates
    # that survive the rounding are harmless (they score identically), so a
    # cheap rounded-key unique beats the pairwise clustering here.
    axes = _raw_axes(l.positions)
    arr = np.array([[a.theta, a.rho] for a in axes])
    _, first = np.unique(np.round(arr, 9), axis=0, return_index=True)
    return sorted((axes[i] for i in first), key=lambda a: (a.theta, a.rho))


def _diameter(positions: np.ndarray) -> float:
    """Largest pairwise distance; the rotation-invariant layout scale.

    Relative tolerances use this rather than the axis-aligned bbox diagonal:
    the bbox changes under rotation (up to sqrt(2)), which would flip
    borderline matches and break rotation equivariance of the scores.
    """
    d2 = ((positions[:, None, :] - positions[None, :, :]) ** 2).sum(axis=2)
    return float(np.sqrt(d2.max()))


def _reflect_across_all(P: np.ndarray, axes: list[Axis]) -> np.ndarray:
    """(A, n, 2) reflections of every point across every axis."""
    thetas = np.array([a.theta for a in axes])
    rhos = np.array([a.rho for a in axes])
    normals = np.stack([-np.sin(thetas), np.cos(thetas)], axis=1)  # (A, 2)
    d = P @ normals.T - rhos  # (n, A)
    return P[None, :, :] - 2.0 * d.T[:, :, None] * normals[:, None, :]


def _nn_all(R: np.ndarray, P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-axis nearest original vertex for each reflected point.

    Returns (nn, dist): both (A, n).
    """
    d2 = ((R[:, :, None, :] - P[None, None, :, :]) ** 2).sum(axis=3)
    nn = d2.argmin(axis=2)
    dist = np.sqrt(np.take_along_axis(d2, nn[:, :, None], axis=2)[:, :, 0])
    return nn, dist


def purchase_style_score(l: "Layout", tol: float = 0.04) -> SymmetryScore:
    """Best fraction of edges mapped onto edges by any single reflection.

    A vertex matches under an axis when its reflection lies within
    ``tol * diameter`` of some vertex; an edge matches when both endpoint
    reflections match the endpoints of an existing edge.  Axes matching
    fewer than two vertices are skipped.
    """
    g = l.graph
    if g.n < 2 or g.m < 1:
        raise ValueError("need n >= 2 and m >= 1")
    diag = _diameter(l.positions)
    if diag < _EPS:
        raise ValueError("degenerate layout: all vertices coincide")
    radius = tol * diag
    P = l.positions
    axes = _scoring_axes(l)

    nn, dist = _nn_all(_reflect_across_all(P, axes), P)
    ok = dist <= radius  # (A, n)
    adj = np.zeros((g.n, g.n), dtype=bool)
    for u, v in g.edges:
        adj[u, v] = adj[v, u] = True
    E = np.array(g.sorted_edges())  # (m, 2)
    endpoints_ok = ok[:, E[:, 0]] & ok[:, E[:, 1]]  # (A, m)
    image_u, image_v = nn[:, E[:, 0]], nn[:, E[:, 1]]
    edge_hits = endpoints_ok & (image_u != image_v) & adj[image_u, image_v]
    matched = edge_hits.sum(axis=1)  # (A,)
    matched[ok.sum(axis=1) < 2] = 0  # axes matching < 2 vertices are skipped

    best = int(matched.max(initial=0))
    if best == 0:
        return SymmetryScore(value=0.0, best_axis=None, support=0)
    candidates = [axes[i] for i in np.nonzero(matched == best)[0]]
    best_axis = min(candidates, key=lambda a: (a.theta, abs(a.rho), a.rho))
    return SymmetryScore(value=best / g.m, best_axis=best_axis, support=best)


def _mapping_axis(p, tp, q, tq) -> Axis | None:
    """Axis of the reflection taking p -> tp and q -> tq, if one can exist.

    The midpoints of (p, tp) and (q, tq) both lie on any such axis; when they
    coincide the axis is the perpendicular bisector of whichever pair is
    non-degenerate.
    """
    m1 = 0.5 * (p + tp)
    m2 = 0.5 * (q + tq)
    if float(np.hypot(*(m2 - m1))) > _EPS:
        return _axis_through(m1, m2)
    if float(np.hypot(*(tp - p))) > _EPS:
        return _perp_bisector(p, tp)
    if float(np.hypot(*(tq - q))) > _EPS:
        return _perp_bisector(q, tq)
    return None


def klapaukh_style_score(
    l: "Layout",
    angle_tol_deg: float = 5.0,
    length_tol: float = 0.10,
    mapping_tol: float = 0.05,
) -> SymmetryScore:
    """Edge-pair voting for reflection axes.

    Every unordered pair of edges with lengths within ``length_tol`` of each
    other contributes one vote: the endpoint correspondence with the smaller
    mapping error determines the axis, and the vote is dropped when even that
    error exceeds ``mapping_tol * diameter``.  Each edge additionally votes
    once for its own perpendicular bisector (the axis it crosses
    perpendicularly).  Votes are pooled in windows of ``angle_tol_deg`` by
    ``0.05 * diameter`` centered on each vote; the value is
    ``clamp(2 * best_window / m, 0, 1)``.
    """
    g = l.graph
    if g.m < 1:
        raise ValueError("need m >= 1")
    diag = _diameter(l.positions)
    if diag < _EPS:
        raise ValueError("degenerate layout: all vertices coincide")

    P = l.positions
    centroid = P.mean(axis=0)
    edges = g.sorted_edges()
    segs = [(P[u], P[v]) for u, v in edges]
    lengths = [float(np.hypot(*(b - a))) for a, b in segs]

    votes: list[Axis] = []
    for (a, b), length in zip(segs, lengths):
        if length > _EPS:
            votes.append(_perp_bisector(a, b))
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            li, lj = lengths[i], lengths[j]
            if min(li, lj) < (1.0 - length_tol) * max(li, lj):
                continue
            a1, b1 = segs[i]
            a2, b2 = segs[j]
            best_err = math.inf
            best: Axis | None = None
            for tp, tq in ((a2, b2), (b2, a2)):
                axis = _mapping_axis(a1, tp, b1, tq)
                if axis is None:
                    continue
                err = max(
                    float(np.hypot(*(reflect_point(a1, axis) - tp))),
                    float(np.hypot(*(reflect_point(b1, axis) - tq))),
                )
                if err < best_err:
                    best_err = err
                    best = axis
            if best is not None and best_err <= mapping_tol * diag:
                votes.append(best)

    if not votes:
        return SymmetryScore(value=0.0, best_axis=None, support=0)

    # Offsets measured from the centroid make the windows invariant under
    # rotating the whole layout about its centroid.
    angle_win = 0.5 * math.radians(angle_tol_deg)
    rho_win = 0.5 * 0.05 * diag
    centered = [Axis(v.theta, v.rho - float(centroid @ v.normal)) for v in votes]

    best_count = 0
    best_axis = votes[0]
    order = sorted(range(len(votes)), key=lambda i: (votes[i].theta, abs(votes[i].rho), votes[i].rho))
    for i in order:
        count = sum(
            1 for c in centered if _axes_close(centered[i], c, angle_win, rho_win)
        )
        if count > best_count:
            best_count = count
            best_axis = votes[i]
    value = min(1.0, 2.0 * best_count / g.m)
    return SymmetryScore(value=value, best_axis=best_axis, support=best_count)


def classify_by_score(s: SymmetryScore, threshold: float = 0.5) -> bool:
    """True (symmetric) iff the score value reaches the threshold."""
    return s.value >= threshold


def _permutation_under(
    P: np.ndarray, Q: np.ndarray, tol: float
) -> np.ndarray | None:
    """Nearest-neighbor assignment P[i] -> Q[sigma[i]], verified bijective."""
    d2 = ((P[:, None, :] - Q[None, :, :]) ** 2).sum(axis=2)
    nn = d2.argmin(axis=1)
    if np.sqrt(d2[np.arange(len(P)), nn]).max() > tol:
        return None
    if len(set(int(i) for i in nn)) != len(P):
        return None
    return nn


def _is_automorphism(g, sigma: np.ndarray) -> bool:
    for u, v in g.edges:
        a, b = int(sigma[u]), int(sigma[v])
        if ((a, b) if a < b else (b, a)) not in g.edges:
            return False
    return True


def exact_mirror_oracle(l: "Layout", tol: float) -> Axis | None:
    """Axis admitting a reflection that permutes vertices (within ``tol``)
    and induces a graph automorphism, or None."""
    if l.graph.n < 2:
        raise ValueError("need at least 2 vertices")
    P = l.positions
    axes = _scoring_axes(l)
    nn, dist = _nn_all(_reflect_across_all(P, axes), P)
    for i in np.nonzero(dist.max(axis=1) <= tol)[0]:
        sigma = nn[i]
        if len(set(int(j) for j in sigma)) == l.graph.n and _is_automorphism(
            l.graph, sigma
        ):
            return axes[i]
    return None


def exact_rotation_oracle(l: "Layout", tol: float, k_axes: int | None = None) -> int | None:
    """Smallest k (in [4, 10], dividing n) whose 2*pi/k rotation about the
    centroid permutes the vertex set and preserves edges, or None."""
    n = l.graph.n
    candidates = [k_axes] if k_axes is not None else [k for k in range(4, 11) if n % k == 0]
    P = l.positions
    c = P.mean(axis=0)
    for k in candidates:
        theta = 2.0 * math.pi / k
        rot = np.array(
            [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
        )
        Q = (P - c) @ rot.T + c
        sigma = _permutation_under(Q, P, tol)
        if sigma is not None and _is_automorphism(l.graph, sigma):
            return k
    return None


def exact_translation_oracle(l: "Layout", tol: float) -> np.ndarray | None:
    """Constant vector carrying the first id-half onto the second, or None.

    Requires the second half's internal edges to mirror the first half's.
    """
    n = l.graph.n
    if n % 2:
        return None
    h = n // 2
    d = l.positions[h:] - l.positions[:h]
    shift = d.mean(axis=0)
    if float(np.abs(d - shift).max()) > tol:
        return None
    if float(np.hypot(*shift)) <= tol:
        return None
    for u, v in l.graph.edges:
        if v < h and (u + h, v + h) not in l.graph.edges:
            return None
        if u >= h and (u - h, v - h) not in l.graph.edges:
            return None
    return shift

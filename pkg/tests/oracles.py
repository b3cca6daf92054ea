"""Independent brute-force re-implementations used as test oracles.

These follow the same normative metric definitions as the package but share
no geometry code with it: lines are represented as anchor + unit direction,
everything runs in plain Python loops, and there is no deduplication,
clustering or vectorization anywhere.
"""

import math

import numpy as np

from symdraw.graphgen import EdgeFeature, Graph, gen_sym_graph
from symdraw.layouts import Layout, LayoutClass, layout_reflectional_mirror


class BFLine:
    def __init__(self, anchor, direction):
        d = np.asarray(direction, dtype=float)
        n = math.hypot(d[0], d[1])
        self.d = d / n
        self.a = np.asarray(anchor, dtype=float)

    def reflect(self, p):
        w = np.asarray(p, dtype=float) - self.a
        return self.a + 2.0 * float(w @ self.d) * self.d - w

    def theta(self):
        t = math.atan2(self.d[1], self.d[0]) % math.pi
        return 0.0 if t >= math.pi else t

    def offset_from(self, origin):
        t = self.theta()
        normal = (-math.sin(t), math.cos(t))
        rel = self.a - np.asarray(origin, dtype=float)
        return rel[0] * normal[0] + rel[1] * normal[1]


def bf_all_axes(positions):
    axes = []
    n = len(positions)
    for i in range(n):
        for j in range(i + 1, n):
            p, q = positions[i], positions[j]
            d = q - p
            if math.hypot(d[0], d[1]) < 1e-12:
                continue
            axes.append(BFLine((p + q) / 2.0, (-d[1], d[0])))  # perpendicular bisector
            axes.append(BFLine(p, d))  # line through the pair
    return axes


def bf_diag(positions):
    # largest pairwise distance, the scale reference of both metrics
    best = 0.0
    for i in range(len(positions)):
        for j in range(i + 1, len(positions)):
            best = max(best, math.hypot(*(positions[i] - positions[j])))
    return best


def bf_purchase(layout, tol=0.04):
    P = layout.positions
    edges = sorted(layout.graph.edges)
    radius = tol * bf_diag(P)
    best = 0.0
    for line in bf_all_axes(P):
        reflected = [line.reflect(p) for p in P]
        nearest = []
        for r in reflected:
            dists = [math.hypot(*(r - q)) for q in P]
            jmin = min(range(len(P)), key=lambda j: dists[j])
            nearest.append(jmin if dists[jmin] <= radius else None)
        if sum(1 for x in nearest if x is not None) < 2:
            continue
        matched = 0
        for u, v in edges:
            a, b = nearest[u], nearest[v]
            if a is None or b is None or a == b:
                continue
            if (min(a, b), max(a, b)) in layout.graph.edges:
                matched += 1
        best = max(best, matched / len(edges))
    return best


def bf_axes_same_window(t1, o1, t2, o2, ang_win, off_win):
    dt = abs(t1 - t2)
    if dt <= ang_win:
        return abs(o1 - o2) <= off_win
    if math.pi - dt <= ang_win:
        return abs(o1 + o2) <= off_win
    return False


def bf_klapaukh(layout, angle_tol_deg=5.0, length_tol=0.10, mapping_tol=0.05):
    P = layout.positions
    edges = sorted(layout.graph.edges)
    diag = bf_diag(P)
    centroid = P.mean(axis=0)
    segs = [(P[u], P[v]) for u, v in edges]
    lengths = [math.hypot(*(b - a)) for a, b in segs]

    def mapping_line(p, tp, q, tq):
        m1 = (p + tp) / 2.0
        m2 = (q + tq) / 2.0
        if math.hypot(*(m2 - m1)) > 1e-12:
            return BFLine(m1, m2 - m1)
        if math.hypot(*(tp - p)) > 1e-12:
            return BFLine(m1, (-(tp - p)[1], (tp - p)[0]))
        if math.hypot(*(tq - q)) > 1e-12:
            return BFLine(m2, (-(tq - q)[1], (tq - q)[0]))
        return None

    votes = []
    for (a, b), length in zip(segs, lengths):
        if length > 1e-12:
            d = b - a
            votes.append(BFLine((a + b) / 2.0, (-d[1], d[0])))
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if min(lengths[i], lengths[j]) < (1.0 - length_tol) * max(lengths[i], lengths[j]):
                continue
            a1, b1 = segs[i]
            a2, b2 = segs[j]
            best_err, best_line = math.inf, None
            for tp, tq in ((a2, b2), (b2, a2)):
                line = mapping_line(a1, tp, b1, tq)
                if line is None:
                    continue
                err = max(
                    math.hypot(*(line.reflect(a1) - tp)),
                    math.hypot(*(line.reflect(b1) - tq)),
                )
                if err < best_err:
                    best_err, best_line = err, line
            if best_line is not None and best_err <= mapping_tol * diag:
                votes.append(best_line)

    if not votes:
        return 0.0
    ang_win = 0.5 * math.radians(angle_tol_deg)
    off_win = 0.5 * 0.05 * diag
    rep = [(v.theta(), v.offset_from(centroid)) for v in votes]
    best = 0
    for t1, o1 in rep:
        count = sum(1 for t2, o2 in rep if bf_axes_same_window(t1, o1, t2, o2, ang_win, off_win))
        best = max(best, count)
    return min(1.0, 2.0 * best / len(edges))


# ---------------------------------------------------------------------------
# Shared layout builders for metric suites
# ---------------------------------------------------------------------------


def random_layout(n, m, seed):
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    picks = rng.choice(len(pairs), size=m, replace=False)
    g = Graph.from_edges(n, [pairs[int(i)] for i in picks])
    positions = rng.uniform(-1, 1, size=(n, 2))
    return Layout(graph=g, positions=positions, label=LayoutClass.SMALL_NON_SYM)


def mirror_layout(n, m, seed):
    rng = np.random.default_rng(seed)
    g = gen_sym_graph(n, m, (EdgeFeature.RANDOM_NON_CROSSING, EdgeFeature.CROSSING), rng)
    return layout_reflectional_mirror(g, rng, label=LayoutClass.SMALL_SYM)


def two_point_layout():
    return Layout(
        graph=Graph.from_edges(2, [(0, 1)]),
        positions=np.array([[-1.0, 0.0], [1.0, 0.0]]),
        label=LayoutClass.SMALL_SYM,
    )

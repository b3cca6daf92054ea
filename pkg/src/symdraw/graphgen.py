"""Random simple graphs whose edge sets are closed under a mirror vertex pairing.

Vertices are integers ``0..n-1``.  The mirror pairing maps ``u`` to
``u + n//2`` (mod the two halves), with ``n-1`` a fixed point when ``n`` is
odd.  Symmetric generators insert every edge together with its mirror image,
so the resulting edge set is closed under the pairing and a mirror drawing of
the graph is geometrically exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Edge",
    "EdgeFeature",
    "Graph",
    "GenerationError",
    "GenerationInfeasibleError",
    "MirrorPairing",
    "RetryExhaustedError",
    "MAX_RETRIES",
    "connect_components",
    "crossing_edges",
    "gen_component_graph",
    "gen_sym_graph",
    "is_connected",
    "is_mirror_closed",
    "mirror_edge",
    "parallel_edges",
]

Edge = tuple[int, int]

#: Bound on rejection-sampling attempts before giving up.  Large enough that
#: hitting it at dataset sizes indicates an infeasible request, small enough
#: to keep runtime bounded.
MAX_RETRIES = 1000


class GenerationError(Exception):
    """Base class for graph/layout generation failures."""


class GenerationInfeasibleError(GenerationError):
    """The request can never be satisfied (too many edges, unreachable vertices)."""


class RetryExhaustedError(GenerationError):
    """Rejection sampling did not converge within ``MAX_RETRIES`` attempts."""


class EdgeFeature(Enum):
    """Edge types a symmetric generator may draw from."""

    RANDOM_ANY = "random-any"
    RANDOM_NON_CROSSING = "random-non-crossing"
    PARALLEL = "parallel"
    CROSSING = "crossing"


@dataclass(frozen=True)
class MirrorPairing:
    """The vertex involution ``u <-> u + n//2``, fixing ``n-1`` for odd ``n``."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"pairing needs n >= 2, got {self.n}")

    @property
    def half(self) -> int:
        return self.n // 2

    @property
    def odd_fixed(self) -> int | None:
        return self.n - 1 if self.n % 2 else None

    def mirror(self, u: int) -> int:
        if not 0 <= u < self.n:
            raise ValueError(f"vertex id {u} out of range for n={self.n}")
        if u == self.odd_fixed:
            return u
        return u + self.half if u < self.half else u - self.half


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def mirror_edge(pairing: MirrorPairing, edge: Edge) -> Edge:
    return _norm_edge(pairing.mirror(edge[0]), pairing.mirror(edge[1]))


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset[Edge]

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        es = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop ({u},{v}) not allowed")
            es.add(_norm_edge(u, v))
        return cls(n=n, edges=frozenset(es))

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        """Edges in deterministic (u, v) order; use this wherever order matters."""
        return sorted(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * g.n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == g.n


def is_mirror_closed(g: Graph) -> bool:
    pairing = MirrorPairing(g.n)
    return all(mirror_edge(pairing, e) in g.edges for e in g.edges)


def parallel_edges(g: Graph) -> list[Edge]:
    """Edges joining a vertex to its mirror partner (the self-symmetric edges)."""
    pairing = MirrorPairing(g.n)
    return sorted(e for e in g.edges if mirror_edge(pairing, e) == e)


def crossing_edges(g: Graph) -> list[Edge]:
    """Edges straddling the two halves that are not parallel edges."""
    h = g.n // 2
    pairing = MirrorPairing(g.n)
    return sorted(
        (u, v) for u, v in g.edges if u < h <= v and mirror_edge(pairing, (u, v)) != (u, v)
    )


def _feature_candidates(feature: EdgeFeature, n: int) -> list[Edge]:
    h = n // 2
    if feature is EdgeFeature.RANDOM_ANY:
        return [(u, v) for u in range(n) for v in range(u + 1, n)]
    if feature is EdgeFeature.RANDOM_NON_CROSSING:
        return [(u, v) for u in range(h) for v in range(u + 1, h)]
    if feature is EdgeFeature.PARALLEL:
        return [(u, u + h) for u in range(h)]
    if feature is EdgeFeature.CROSSING:
        # v == u + h is the parallel edge; a crossing draw must actually cross.
        return [(u, v) for u in range(h) for v in range(h, n) if v != u + h]
    raise ValueError(f"unknown edge feature {feature!r}")


def _reachable_closure(n: int, features) -> set[Edge]:
    pairing = MirrorPairing(n)
    reach: set[Edge] = set()
    for f in set(features):
        for e in _feature_candidates(f, n):
            reach.add(e)
            reach.add(mirror_edge(pairing, e))
    return reach


def gen_sym_graph(n: int, m: int, features, rng: np.random.Generator) -> Graph:
    """Generate a connected mirror-closed graph with exactly ``m`` edges.

    Each draw picks a feature uniformly from the requested multiset, draws an
    unused edge of that type and inserts it together with its mirror image.
    When exactly one edge of budget remains, a free parallel edge
    ``(u, u + n//2)`` is inserted instead, since those are the only edges
    fixed by the pairing.  The whole construction is rejection-sampled until
    it is connected and every requested feature has a witness edge.
    """
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    if not n <= m <= math.floor(1.2 * n):
        raise ValueError(f"need n <= m <= floor(1.2n); got n={n}, m={m}")
    features = list(features)
    if not features:
        raise ValueError("need at least one edge feature")

    pairing = MirrorPairing(n)
    h = pairing.half
    all_parallel = [(u, u + h) for u in range(h)]

    reach = _reachable_closure(n, features)
    max_edges = len(reach) + (0 if set(all_parallel) <= reach else 1)
    if m > max_edges:
        raise GenerationInfeasibleError(
            f"m={m} exceeds the {max_edges} distinct mirror-closed edges "
            f"reachable with features {sorted(f.value for f in set(features))}"
        )
    union = Graph(n, frozenset(reach | set(all_parallel)))
    if not is_connected(union):
        raise GenerationInfeasibleError(
            "requested features cannot connect all vertices"
        )

    feature_kinds = sorted(set(features), key=lambda f: f.value)
    for _ in range(MAX_RETRIES):
        edges = _try_build(n, m, features, pairing, all_parallel, rng)
        if edges is None:
            continue
        g = Graph(n, frozenset(edges))
        if not is_connected(g):
            continue
        if EdgeFeature.PARALLEL in feature_kinds and not parallel_edges(g):
            continue
        if EdgeFeature.CROSSING in feature_kinds and not crossing_edges(g):
            continue
        return g
    raise RetryExhaustedError(
        f"no valid graph after {MAX_RETRIES} attempts (n={n}, m={m})"
    )


def _try_build(n, m, features, pairing, all_parallel, rng) -> set[Edge] | None:
    edges: set[Edge] = set()
    while len(edges) < m:
        remaining = m - len(edges)
        if remaining == 1:
            free = [e for e in all_parallel if e not in edges]
            if not free:
                return None
            edges.add(free[rng.integers(len(free))])
            continue
        pool = [f for f in features if any(e not in edges for e in _feature_candidates(f, n))]
        if not pool:
            return None
        feature = pool[rng.integers(len(pool))]
        candidates = [e for e in _feature_candidates(feature, n) if e not in edges]
        e = candidates[rng.integers(len(candidates))]
        edges.add(e)
        edges.add(mirror_edge(pairing, e))
    return edges


def gen_component_graph(n_half: int, m_half: int, rng: np.random.Generator) -> Graph:
    """Random connected simple graph: random spanning tree plus uniform extra edges."""
    if n_half < 2:
        raise ValueError(f"need n_half >= 2, got {n_half}")
    if m_half < n_half - 1:
        raise ValueError(f"m_half={m_half} below the tree bound {n_half - 1}")
    max_m = n_half * (n_half - 1) // 2
    if m_half > max_m:
        raise ValueError(f"m_half={m_half} exceeds simple-graph maximum {max_m}")

    edges: set[Edge] = set()
    for i in range(1, n_half):
        parent = int(rng.integers(i))
        edges.add(_norm_edge(parent, i))
    extra = m_half - (n_half - 1)
    if extra:
        free = sorted(
            (u, v)
            for u in range(n_half)
            for v in range(u + 1, n_half)
            if (u, v) not in edges
        )
        picks = rng.choice(len(free), size=extra, replace=False)
        for idx in sorted(int(i) for i in picks):
            edges.add(free[idx])
    return Graph(n_half, frozenset(edges))


def _check_two_components(g: Graph) -> int:
    """Validate the two-disjoint-mirror-copies shape; return the half size."""
    if g.n % 2:
        raise ValueError("two-component graph must have an even vertex count")
    h = g.n // 2
    for u, v in g.edges:
        if u < h <= v:
            raise ValueError(f"edge ({u},{v}) already straddles the two components")
    for u, v in g.edges:
        if v < h and _norm_edge(u + h, v + h) not in g.edges:
            raise ValueError("second component is not a mirror copy of the first")
        if u >= h and _norm_edge(u - h, v - h) not in g.edges:
            raise ValueError("first component is not a mirror copy of the second")
    return h


def connect_components(g: Graph, k: int, mode: str, rng: np.random.Generator) -> Graph:
    """Add exactly ``k`` connecting edges between the two mirror components.

    ``parallel-only`` joins chosen vertices to their mirror partners.
    ``mixed`` draws uniformly over free parallel edges and free crossing
    mirror-pairs; a crossing pair inserts two edges, so it is only drawn
    while at least two edges of budget remain.
    """
    h = _check_two_components(g)
    if mode not in ("parallel-only", "mixed"):
        raise ValueError(f"unknown mode {mode!r}")
    if not 1 <= k <= g.n // 3:
        raise ValueError(f"need 1 <= k <= floor(n/3) = {g.n // 3}, got k={k}")

    pairing = MirrorPairing(g.n)
    if mode == "parallel-only":
        if k > h:
            raise GenerationInfeasibleError(f"only {h} parallel connections exist")
        picks = sorted(int(i) for i in rng.choice(h, size=k, replace=False))
        new = {(u, u + h) for u in picks}
        return Graph(g.n, g.edges | new)

    crossing_pairs = [
        (_norm_edge(u, v + h), mirror_edge(pairing, (u, v + h)))
        for u in range(h)
        for v in range(h)
        if v != u
    ]
    crossing_pairs = sorted(set(tuple(sorted(p)) for p in crossing_pairs))
    if k > h + 2 * len(crossing_pairs):
        raise GenerationInfeasibleError(f"cannot place {k} connecting edges")

    for _ in range(MAX_RETRIES):
        added: set[Edge] = set()
        ok = True
        while len(added) < k:
            remaining = k - len(added)
            free_par = [(u, u + h) for u in range(h) if (u, u + h) not in added]
            options: list[tuple[Edge, ...]] = [(e,) for e in free_par]
            if remaining >= 2:
                options += [
                    p for p in crossing_pairs if p[0] not in added and p[1] not in added
                ]
            if not options:
                ok = False
                break
            choice = options[rng.integers(len(options))]
            added.update(choice)
        if ok and len(added) == k:
            return Graph(g.n, g.edges | added)
    raise RetryExhaustedError(f"could not place {k} connecting edges in {MAX_RETRIES} tries")

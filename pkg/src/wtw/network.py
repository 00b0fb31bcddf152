"""Weighted directed trade-share networks and their undirected reductions.

A :class:`ShareNetwork` is the per-year directed graph in which an arc
``i -> j`` carries the fraction of country ``i``'s total trade that goes
to ``j``. :class:`UndirectedWeighted` is the symmetrized carrier used by
the island decomposition. Both are immutable; arcs and edges are stored
in canonical sorted order so every derived artifact is independent of
construction order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .flows import FlowTable

DENOMINATOR_RULES = ("exports", "exports_plus_imports")
SYMMETRIZE_RULES = ("max", "sum", "min")

# Arcs are (source_index, target_index, weight); edges are
# (u_index, v_index, weight) with u < v. Plain tuples keep the hot
# per-year loops cheap on large panels.
Arc = tuple[int, int, float]
Edge = tuple[int, int, float]


def _check_nodes(nodes: tuple[str, ...]) -> dict[str, int]:
    index: dict[str, int] = {}
    for i, label in enumerate(nodes):
        if not isinstance(label, str) or not label:
            raise ValueError(f"node label {label!r} must be a non-empty string")
        if label in index:
            raise ValueError(f"duplicate node label {label!r}")
        index[label] = i
    return index


@dataclass(frozen=True)
class ShareNetwork:
    """Directed graph of trade shares for one year.

    Invariants enforced on construction: no self-arcs, at most one arc
    per ordered pair, every weight in (0, 1], and each node's outgoing
    weights summing to at most 1 (plus float noise).
    """

    year: int
    nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        index = _check_nodes(self.nodes)
        n = len(self.nodes)
        arcs = tuple(sorted((int(s), int(t), float(w)) for s, t, w in self.arcs))
        out_sums: dict[int, float] = {}
        prev = None
        for source, target, weight in arcs:
            if not (0 <= source < n and 0 <= target < n):
                raise ValueError(f"arc ({source}, {target}) references an unknown node index")
            if source == target:
                raise ValueError(f"self-arc on node {self.nodes[source]!r}")
            if (source, target) == prev:
                raise ValueError(f"duplicate arc ({self.nodes[source]!r}, {self.nodes[target]!r})")
            prev = (source, target)
            if not (0.0 < weight <= 1.0) or not math.isfinite(weight):
                raise ValueError(f"arc weight {weight!r} outside (0, 1]")
            out_sums[source] = out_sums.get(source, 0.0) + weight
        heavy = [s for s, total in out_sums.items() if total > 1.0 + 1e-9]
        if heavy:
            raise ValueError(f"outgoing weights of node {self.nodes[heavy[0]]!r} sum above 1")
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "_index", index)

    @classmethod
    def _trusted(cls, year: int, nodes: tuple[str, ...], arcs: tuple[Arc, ...],
                 index: dict[str, int]) -> "ShareNetwork":
        # Fast path for internal constructors that guarantee the
        # invariants structurally (normalize, threshold_filter).
        self = object.__new__(cls)
        object.__setattr__(self, "year", year)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "_index", index)
        return self

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"node {label!r} not in network") from None


@dataclass(frozen=True)
class UndirectedWeighted:
    """Undirected weighted graph over the same node registry.

    Edges are stored as ``(u, v, weight)`` with ``u < v``; reversed input
    pairs are normalized, duplicates rejected, weights must be positive.
    """

    year: int
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        index = _check_nodes(self.nodes)
        n = len(self.nodes)
        normalized = []
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references an unknown node index")
            if u == v:
                raise ValueError(f"self-edge on node {self.nodes[u]!r}")
            if u > v:
                u, v = v, u
            if not (w > 0.0) or not math.isfinite(w):
                raise ValueError(f"edge weight {w!r} must be a positive finite number")
            normalized.append((u, v, w))
        edges = tuple(sorted(normalized))
        for a, b in zip(edges, edges[1:]):
            if a[:2] == b[:2]:
                raise ValueError(f"duplicate edge ({self.nodes[a[0]]!r}, {self.nodes[a[1]]!r})")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_index", index)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"node {label!r} not in network") from None


def normalize(table: FlowTable, denominator_rule: str = "exports") -> ShareNetwork:
    """Turn raw dollar flows into a trade-share network.

    The arc ``i -> j`` exists iff ``flow(i, j) > 0`` and ``i``'s
    denominator is positive; its weight is ``flow / denominator``. With
    the default ``exports`` rule the denominator is the reporter's total
    outflow, so each reporter's outgoing weights sum to 1; under
    ``exports_plus_imports`` the denominator also counts what flows in.
    Countries with no outgoing flows stay in the network as isolated
    sources.
    """
    if denominator_rule not in DENOMINATOR_RULES:
        raise ValueError(f"denominator_rule must be one of {DENOMINATOR_RULES}")
    nodes = table.countries
    index = {code: i for i, code in enumerate(nodes)}
    if denominator_rule == "exports":
        denom = table.out_totals
    else:
        denom = {c: table.out_totals[c] + table.in_totals[c] for c in nodes}
    arcs = []
    for (reporter, partner), value in table.flows.items():
        d = denom[reporter]
        if d > 0.0:
            arcs.append((index[reporter], index[partner], value / d))
    # flows iterate in sorted code order and index order follows code
    # order, so the arc list is already canonically sorted.
    return ShareNetwork._trusted(table.year, nodes, tuple(arcs), index)


def threshold_filter(g: ShareNetwork, tau: float) -> ShareNetwork:
    """Drop arcs whose weight is strictly below ``tau``; keep all nodes.

    An arc of weight exactly ``tau`` survives: the cut removes links
    carrying less than the threshold share, not at it.
    """
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must lie in [0, 1], got {tau!r}")
    kept = tuple(a for a in g.arcs if a[2] >= tau)
    return ShareNetwork._trusted(g.year, g.nodes, kept, g._index)


def symmetrize(g: ShareNetwork, rule: str = "max") -> UndirectedWeighted:
    """Collapse directed arcs into undirected edges.

    ``max`` and ``sum`` create an edge when either direction is present
    (the missing direction counts as 0); ``min`` requires both arcs.
    """
    if rule not in SYMMETRIZE_RULES:
        raise ValueError(f"rule must be one of {SYMMETRIZE_RULES}")
    pair_weights: dict[tuple[int, int], list[float]] = {}
    for source, target, weight in g.arcs:
        key = (source, target) if source < target else (target, source)
        pair_weights.setdefault(key, []).append(weight)
    edges = []
    for (u, v), weights in pair_weights.items():
        if rule == "max":
            edges.append((u, v, max(weights)))
        elif rule == "sum":
            edges.append((u, v, math.fsum(weights)))
        elif len(weights) == 2:
            edges.append((u, v, min(weights)))
    return UndirectedWeighted(g.year, g.nodes, tuple(edges))


def in_degree(g: ShareNetwork, node: str) -> int:
    """Number of arcs pointing at ``node``."""
    target = g.index(node)
    return sum(1 for _, t, _ in g.arcs if t == target)


def weak_components(g: ShareNetwork | UndirectedWeighted) -> list[list[int]]:
    """Partition node indices into weakly connected components.

    Components are sorted by their smallest member index and each
    component lists its members in ascending index order.
    """
    links = g.arcs if isinstance(g, ShareNetwork) else g.edges
    n = len(g.nodes)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for a, b, _ in links:
        adjacency[a].append(b)
        adjacency[b].append(a)
    seen = [False] * n
    components: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        stack = [start]
        members = []
        while stack:
            u = stack.pop()
            members.append(u)
            for v in adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        components.append(sorted(members))
    return components

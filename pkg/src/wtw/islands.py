"""Weight-dominated island decomposition of undirected weighted graphs.

An island is a connected vertex set whose internal cohesion strictly
dominates its surroundings: the bottleneck weight of a maximum spanning
tree of the induced subgraph (the ``support_weight``) exceeds the weight
of every edge crossing the boundary (the ``boundary_weight``, minus
infinity when the set is a whole component). Islands of a graph form a
laminar family, so they can all be read off one merge dendrogram built
by processing edges in descending weight order.

``extract_islands`` walks that dendrogram; ``is_island`` checks the
declarative condition directly for a single vertex set and is kept
independent of the dendrogram so the two routes can cross-validate each
other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, NamedTuple

from .network import ShareNetwork, UndirectedWeighted


class Merge(NamedTuple):
    """One coalescing step: two components joined by an edge of ``weight``."""

    left: int
    right: int
    weight: float
    size: int


@dataclass(frozen=True)
class MergeDendrogram:
    """Forest recording the order in which components coalesce.

    Node ids 0..n_leaves-1 are leaves (graph nodes); id ``n_leaves + k``
    is ``merges[k]``. Merge weights never increase from leaf to root, a
    child's size never exceeds its parent's, and there is one root per
    weak component.
    """

    n_leaves: int
    merges: tuple[Merge, ...]
    roots: tuple[int, ...]

    def node_size(self, node: int) -> int:
        return 1 if node < self.n_leaves else self.merges[node - self.n_leaves].size

    def leaves_under(self, node: int) -> list[int]:
        """Leaf ids in the subtree of ``node``, ascending."""
        leaves = []
        stack = [node]
        while stack:
            cur = stack.pop()
            if cur < self.n_leaves:
                leaves.append(cur)
            else:
                merge = self.merges[cur - self.n_leaves]
                stack.append(merge.left)
                stack.append(merge.right)
        return sorted(leaves)


@dataclass(frozen=True)
class Island:
    """A weight-dominated community.

    ``hubs`` ranks every member by in-degree on the directed network
    restricted to the island (filled by :func:`decompose`; plain
    :func:`extract_islands` leaves it empty).
    """

    members: tuple[str, ...]
    support_weight: float
    boundary_weight: float
    hubs: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if len(self.members) < 2:
            raise ValueError("an island needs at least 2 members")
        if not self.support_weight > self.boundary_weight:
            raise ValueError("island support must strictly dominate its boundary")


def build_dendrogram(g: UndirectedWeighted) -> MergeDendrogram:
    """Union components in strictly decreasing edge-weight order.

    Ties are broken by the lexicographic (u, v) index order of the edge,
    which makes the dendrogram itself deterministic; the island sets it
    yields are independent of the tie order.
    """
    n = len(g.nodes)
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    comp_node = list(range(n))  # union-find root -> dendrogram node id
    comp_size = [1] * n
    merges: list[Merge] = []
    for u, v, w in sorted(g.edges, key=lambda e: (-e[2], e[0], e[1])):
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        size = comp_size[ru] + comp_size[rv]
        merges.append(Merge(comp_node[ru], comp_node[rv], w, size))
        parent[rv] = ru
        comp_node[ru] = n + len(merges) - 1
        comp_size[ru] = size
    roots = []
    seen = set()
    for i in range(n):
        root = find(i)
        if root not in seen:
            seen.add(root)
            roots.append(comp_node[root])
    return MergeDendrogram(n, tuple(merges), tuple(roots))


def _dominance_arrays(d: MergeDendrogram) -> tuple[list[float], list[float]]:
    """Per dendrogram node: smallest merge weight inside it, and the weight
    at which it is absorbed into its parent (-inf for roots)."""
    total = d.n_leaves + len(d.merges)
    min_internal = [math.inf] * total
    absorbed_at = [-math.inf] * total
    for k, merge in enumerate(d.merges):  # children always precede parents
        node = d.n_leaves + k
        min_internal[node] = min(merge.weight, min_internal[merge.left], min_internal[merge.right])
        absorbed_at[merge.left] = merge.weight
        absorbed_at[merge.right] = merge.weight
    return min_internal, absorbed_at


def extract_islands(d: MergeDendrogram, g: UndirectedWeighted,
                    min_size: int = 2, max_size: int | None = None) -> list[Island]:
    """Maximal dendrogram nodes whose members dominate their boundary.

    A node qualifies when its size lies in ``[min_size, max_size]`` and
    the weight at which it merges into its parent is strictly below
    every merge weight inside it (whole components qualify whenever
    their size fits). Qualifying nodes nested inside larger qualifying
    nodes are absorbed; the survivors come back sorted by descending
    size, ties by smallest member index. ``hubs`` is left empty.
    """
    if min_size < 2:
        raise ValueError("min_size must be at least 2")
    if max_size is None:
        max_size = d.n_leaves
    if min_size > max_size:
        raise ValueError("min_size must not exceed max_size")
    min_internal, absorbed_at = _dominance_arrays(d)
    chosen = []
    stack = list(d.roots)
    while stack:
        node = stack.pop()
        size = d.node_size(node)
        if size < min_size:
            continue
        if size <= max_size and absorbed_at[node] < min_internal[node]:
            chosen.append(node)
            continue
        if node >= d.n_leaves:
            merge = d.merges[node - d.n_leaves]
            stack.append(merge.left)
            stack.append(merge.right)
    islands = []
    for node in chosen:
        leaves = d.leaves_under(node)
        islands.append((len(leaves), leaves[0], Island(
            members=tuple(g.nodes[i] for i in leaves),
            support_weight=min_internal[node],
            boundary_weight=absorbed_at[node],
        )))
    islands.sort(key=lambda item: (-item[0], item[1]))
    return [island for _, _, island in islands]


def _member_indices(g: UndirectedWeighted | ShareNetwork, members: Iterable[str]) -> set[int]:
    return {g.index(code) for code in members}


def _connected(members: set[int], edges: list[tuple[int, int]]) -> bool:
    if len(members) <= 1:
        return True
    adjacency: dict[int, list[int]] = {m: [] for m in members}
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    start = next(iter(members))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adjacency[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(members)


def _induced_and_boundary(g: UndirectedWeighted,
                          idxs: set[int]) -> tuple[list[tuple[int, int, float]], float]:
    induced = []
    boundary = -math.inf
    for u, v, w in g.edges:
        inside = (u in idxs) + (v in idxs)
        if inside == 2:
            induced.append((u, v, w))
        elif inside == 1:
            boundary = max(boundary, w)
    return induced, boundary


def _bottleneck(idxs: set[int], induced: list[tuple[int, int, float]]) -> float:
    # Largest threshold at which the members stay connected; equals the
    # minimum edge weight of a maximum spanning tree of the induced
    # subgraph.
    for level in sorted({w for _, _, w in induced}, reverse=True):
        if _connected(idxs, [(u, v) for u, v, w in induced if w >= level]):
            return level
    return -math.inf


def support_and_boundary(g: UndirectedWeighted, members: Iterable[str]) -> tuple[float, float]:
    """(support_weight, boundary_weight) of a connected member set.

    Support is the maximum-spanning-tree bottleneck of the induced
    subgraph; boundary is the heaviest crossing edge (-inf if none).
    Raises if the induced subgraph is disconnected.
    """
    idxs = _member_indices(g, members)
    if len(idxs) < 2:
        raise ValueError("need at least 2 members")
    induced, boundary = _induced_and_boundary(g, idxs)
    if not _connected(idxs, [(u, v) for u, v, _ in induced]):
        raise ValueError("member set does not induce a connected subgraph")
    return _bottleneck(idxs, induced), boundary


def is_island(g: UndirectedWeighted, members: Iterable[str]) -> bool:
    """Declarative island test for an explicit vertex set.

    True iff the induced subgraph is connected and its maximum-spanning
    -tree bottleneck strictly exceeds the heaviest boundary edge (an
    empty boundary always loses).
    """
    idxs = _member_indices(g, members)
    if len(idxs) < 2:
        raise ValueError("need at least 2 members")
    induced, boundary = _induced_and_boundary(g, idxs)
    if not _connected(idxs, [(u, v) for u, v, _ in induced]):
        return False
    return _bottleneck(idxs, induced) > boundary


def island_hubs(members: Iterable[str], g: ShareNetwork, k: int) -> list[tuple[str, int]]:
    """Top-``k`` members by in-degree on the directed subgraph induced by ``members``.

    Ties rank by node index; small islands return fewer than ``k``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    idxs = _member_indices(g, members)
    if not idxs:
        raise ValueError("members must be non-empty")
    degree = {i: 0 for i in idxs}
    for source, target, _ in g.arcs:
        if source in idxs and target in idxs:
            degree[target] += 1
    ranked = sorted(idxs, key=lambda i: (-degree[i], i))
    return [(g.nodes[i], degree[i]) for i in ranked[:k]]


def decompose(directed: ShareNetwork, undirected: UndirectedWeighted,
              min_size: int = 2, max_size: int | None = None) -> tuple[list[Island], list[str]]:
    """Full decomposition of one year: hub-ranked islands plus the residual.

    ``directed`` supplies in-degrees for hub ranking and must share the
    node registry of ``undirected`` (its symmetrization). The residual
    lists every node belonging to no island, in node order; countries
    that dropped out of all islands are reported there rather than
    silently vanishing.
    """
    if directed.nodes != undirected.nodes:
        raise ValueError("directed and undirected networks must share the same node registry")
    dendrogram = build_dendrogram(undirected)
    bare = extract_islands(dendrogram, undirected, min_size, max_size)
    islands = [replace(island, hubs=tuple(island_hubs(island.members, directed, len(island.members))))
               for island in bare]
    covered = {code for island in islands for code in island.members}
    residual = [code for code in undirected.nodes if code not in covered]
    return islands, residual

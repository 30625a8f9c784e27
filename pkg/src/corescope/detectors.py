"""Detectors for subgraph- and constituent-level targets.

Every detector returns members in a stable order (by smallest member id) so that
results serialize deterministically. Each member carries an annotation mapping
with at least a numeric ``weight`` used for "largest" selection when chaining.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import ceil
from typing import Iterable, Literal, Optional

import numpy as np

from .census import distance_summary, kcore
from .graph import CoreGraph, Edge

Kind = Literal["nodes", "edges", "subgraphs"]

EXHAUSTIVE_LIMIT = 12
DEFAULT_LACUNA_LENGTH = 12
DEFAULT_PATH_CAP = 1000


@dataclass(frozen=True)
class ElementSet:
    kind: Kind
    target: str
    members: tuple = ()
    annotations: tuple[dict, ...] = ()

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def node_sets(self) -> list[frozenset[int]]:
        if self.kind == "nodes":
            return [frozenset([m]) for m in self.members]
        return [frozenset(m) for m in self.members]

    def nodes(self) -> frozenset[int]:
        return frozenset().union(*self.node_sets()) if self.members else frozenset()

    def to_record(self) -> dict:
        def plain(m):
            return list(m) if isinstance(m, tuple) else m
        return {
            "kind": self.kind,
            "target": self.target,
            "members": [plain(m) for m in self.members],
            "annotations": [dict(a) for a in self.annotations],
        }


def _min_id(member) -> int:
    return member if isinstance(member, int) else min(member)


def element_set(kind: Kind, target: str, items: Iterable[tuple[object, dict]]) -> ElementSet:
    items = sorted(items, key=lambda it: (_min_id(it[0]), sorted([it[0]] if isinstance(it[0], int) else it[0]), it[0]))
    return ElementSet(kind, target, tuple(m for m, _ in items), tuple(a for _, a in items))


# -- articulation nodes and bridges ----------------------------------------


def cut_elements(g: CoreGraph) -> tuple[ElementSet, ElementSet]:
    """Articulation nodes and bridge edges in one iterative low-link pass.

    Articulation annotations give the number of components left after removal;
    bridge annotations give the size of the smaller side.
    """
    n = g.node_count
    adj = g.adjacency
    disc = [-1] * n
    low = [0] * n
    size = [1] * n
    splits = [0] * n
    bridges: list[tuple[Edge, dict]] = []
    clock = 0
    disc[0] = low[0] = clock
    stack = [(0, -1, iter(adj[0]))]
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if w == parent:
                continue
            if disc[w] < 0:
                clock += 1
                disc[w] = low[w] = clock
                stack.append((w, v, iter(adj[w])))
                advanced = True
                break
            low[v] = min(low[v], disc[w])
        if advanced:
            continue
        stack.pop()
        if parent >= 0:
            low[parent] = min(low[parent], low[v])
            size[parent] += size[v]
            if low[v] >= disc[parent]:
                splits[parent] += 1
            if low[v] > disc[parent]:
                edge = (min(parent, v), max(parent, v))
                bridges.append((edge, {"weight": min(size[v], n - size[v])}))
    arts = []
    for v in range(n):
        parts = splits[v] if v == 0 else splits[v] + 1
        if parts >= 2:
            arts.append((v, {"weight": parts}))
    return element_set("nodes", "articulation-node", arts), element_set("edges", "bridge-edge", bridges)


# -- degree and eccentricity targets ----------------------------------------


def degree_targets(g: CoreGraph) -> tuple[ElementSet, ElementSet]:
    """Hubs (degree strictly above the mean 2E/N) and dead-end (degree-1) nodes."""
    n, m = g.node_count, g.edge_count
    hubs = [(v, {"weight": d}) for v, d in enumerate(g.degrees) if d * n > 2 * m]
    ends = [(v, {"weight": 1}) for v, d in enumerate(g.degrees) if d == 1]
    return element_set("nodes", "hub", hubs), element_set("nodes", "dead-end", ends)


def eccentricity_targets(g: CoreGraph) -> tuple[ElementSet, ElementSet]:
    """Centre nodes (eccentricity = radius) and diameter endpoints (eccentricity = diameter)."""
    ds = distance_summary(g)
    centres = [(v, {"weight": e}) for v, e in enumerate(ds.eccentricities) if e == ds.radius]
    ends = [(v, {"weight": e}) for v, e in enumerate(ds.eccentricities) if e == ds.diameter]
    return element_set("nodes", "center-node", centres), element_set("nodes", "diameter-endpoint", ends)


# -- cliques and clusters ----------------------------------------------------


def iter_maximal_cliques(g: CoreGraph):
    """Bron–Kerbosch with Tomita pivoting; yields sorted tuples."""
    adj = [set(a) for a in g.adjacency]

    def expand(r: list[int], p: set[int], x: set[int]):
        if not p and not x:
            yield tuple(sorted(r))
            return
        pivot = max(sorted(p | x), key=lambda u: len(p & adj[u]))
        for v in sorted(p - adj[pivot]):
            yield from expand(r + [v], p & adj[v], x & adj[v])
            p.discard(v)
            x.add(v)

    yield from expand([], set(range(g.node_count)), set())


def maximal_cliques(g: CoreGraph, min_size: int = 3) -> ElementSet:
    if min_size < 2:
        raise ValueError("min_size must be at least 2")
    items = [(c, {"weight": len(c)}) for c in iter_maximal_cliques(g) if len(c) >= min_size]
    return element_set("subgraphs", "clique", items)


def _density(g: CoreGraph, nodes: frozenset[int]) -> float:
    s = len(nodes)
    if s < 2:
        return 0.0
    inside = sum(1 for v in nodes for w in g.adjacency[v] if w in nodes) // 2
    return 2 * inside / (s * (s - 1))


def _is_connected(g: CoreGraph, nodes: frozenset[int]) -> bool:
    start = next(iter(nodes))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w in nodes and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(nodes)


def _maximal_only(sets: Iterable[frozenset[int]]) -> list[frozenset[int]]:
    ordered = sorted(set(sets), key=len, reverse=True)
    kept: list[frozenset[int]] = []
    for s in ordered:
        if not any(s < k for k in kept):
            kept.append(s)
    return kept


def clusters(g: CoreGraph, density_threshold: float = 0.8, min_size: int = 4,
             exhaustive: Optional[bool] = None) -> ElementSet:
    """Maximal connected node sets with induced density at least ``density_threshold``.

    Exhaustive over all node subsets up to ``EXHAUSTIVE_LIMIT`` nodes; above that,
    maximal cliques of size >= 3 seed a greedy growth step.
    """
    tau = density_threshold
    if not 0 < tau <= 1:
        raise ValueError("density_threshold must lie in (0, 1]")
    n = g.node_count
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_LIMIT
    found: list[frozenset[int]] = []
    if exhaustive:
        masks = [sum(1 << w for w in a) for a in g.adjacency]
        for subset in range(1, 1 << n):
            s = subset.bit_count()
            if s < max(2, min_size):
                continue
            inside = sum((masks[v] & subset).bit_count() for v in range(n) if subset >> v & 1) // 2
            if 2 * inside < tau * s * (s - 1):
                continue
            nodes = frozenset(v for v in range(n) if subset >> v & 1)
            if _is_connected(g, nodes):
                found.append(nodes)
    else:
        adj = g.adjacency
        seeds = [c for c in iter_maximal_cliques(g) if len(c) >= 3]
        for seed in seeds:
            grown = set(seed)
            inside = len(seed) * (len(seed) - 1) // 2
            while True:
                links: dict[int, int] = {}
                for v in grown:
                    for w in adj[v]:
                        if w not in grown:
                            links[w] = links.get(w, 0) + 1
                if not links:
                    break
                best = min(links, key=lambda w: (-links[w], w))
                s = len(grown) + 1
                if 2 * (inside + links[best]) < tau * s * (s - 1):
                    break
                grown.add(best)
                inside += links[best]
            if len(grown) >= min_size:
                found.append(frozenset(grown))
    items = [(tuple(sorted(c)), {"weight": len(c), "density": round(_density(g, c), 12)})
             for c in _maximal_only(found)]
    return element_set("subgraphs", "cluster", items)


# -- cycles, lacunae, chains, stars ------------------------------------------


def chordless_cycles(g: CoreGraph, min_length: int = 3, max_length: int = DEFAULT_LACUNA_LENGTH):
    """Induced cycles with ``min_length <= length <= max_length``.

    Each cycle is produced once, starting at its smallest node and oriented
    towards the smaller of that node's two cycle neighbours.
    """
    adj = [set(a) for a in g.adjacency]
    found = []
    for s in range(g.node_count):
        # path is induced; interior nodes other than path[1] are not adjacent to s
        stack = [[s, v] for v in sorted(adj[s], reverse=True) if v > s]
        while stack:
            path = stack.pop()
            tail = path[-1]
            inner = path[1:-1]
            for w in sorted(adj[tail], reverse=True):
                if w <= s or w in path:
                    continue
                if any(w in adj[x] for x in inner):
                    continue
                if s in adj[w]:
                    length = len(path) + 1
                    if length >= min_length and path[1] < w:
                        found.append(tuple(path) + (w,))
                elif len(path) + 1 < max_length:
                    stack.append(path + [w])
    found.sort()
    return found


def lacunae(g: CoreGraph, max_length: int = DEFAULT_LACUNA_LENGTH) -> ElementSet:
    if max_length < 4:
        raise ValueError("max_length must be at least 4")
    items = [(c, {"weight": len(c)}) for c in chordless_cycles(g, 4, max_length)]
    return element_set("subgraphs", "lacuna", items)


def cycles(g: CoreGraph, max_length: int = DEFAULT_LACUNA_LENGTH) -> ElementSet:
    items = [(c, {"weight": len(c)}) for c in chordless_cycles(g, 3, max_length)]
    return element_set("subgraphs", "cycle", items)


def chains(g: CoreGraph, min_interior: int = 1) -> ElementSet:
    """Maximal runs of degree-2 nodes together with their two end nodes.

    Runs that close on themselves (a cycle, or a loop hanging off one node) are
    not chains, and neither are runs whose two ends are adjacent.
    """
    if min_interior < 1:
        raise ValueError("min_interior must be at least 1")
    deg = g.degrees
    adj = g.adjacency
    seen: set[int] = set()
    items = []
    for v in range(g.node_count):
        if deg[v] != 2 or v in seen:
            continue
        run = [v]
        seen.add(v)
        ends = []
        closed = False
        for step in adj[v]:
            prev, cur = v, step
            side = []
            while deg[cur] == 2 and cur != v:
                side.append(cur)
                seen.add(cur)
                prev, cur = cur, adj[cur][0] if adj[cur][1] == prev else adj[cur][1]
            if cur == v:
                closed = True
                break
            ends.append((side, cur))
        if closed:
            continue
        (left, a), (right, b) = ends
        if a == b or g.has_edge(a, b):
            continue
        interior = list(reversed(left)) + run + right
        if len(interior) < min_interior:
            continue
        chain = (a, *interior, b)
        if chain[-1] < chain[0]:
            chain = chain[::-1]
        items.append((chain, {"weight": len(chain), "interior": len(interior)}))
    return element_set("subgraphs", "chain", items)


def stars(g: CoreGraph) -> ElementSet:
    """A centre with at least two degree-1 neighbours; other neighbours are allowed."""
    deg = g.degrees
    items = []
    for c in range(g.node_count):
        leaves = [w for w in g.adjacency[c] if deg[w] == 1]
        if len(leaves) >= 2:
            items.append(((c, *leaves), {"weight": len(leaves), "center": c}))
    return element_set("subgraphs", "star", items)


# -- geodesics ---------------------------------------------------------------


@dataclass(frozen=True)
class GeodesicReport:
    mode: str
    length: int
    count: int
    paths: tuple[tuple[int, ...], ...] = ()
    truncated: bool = False

    def to_record(self) -> dict:
        return {"mode": self.mode, "length": self.length, "count": self.count,
                "paths": [list(p) for p in self.paths], "truncated": self.truncated}


def _bfs_dag(g: CoreGraph, root: int) -> tuple[list[int], list[int]]:
    n = g.node_count
    dist = [-1] * n
    sigma = [0] * n
    dist[root], sigma[root] = 0, 1
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
            if dist[w] == dist[u] + 1:
                sigma[w] += sigma[u]
    return dist, sigma


def _paths_to(g: CoreGraph, dist: list[int], target: int, limit: int) -> list[tuple[int, ...]]:
    """Shortest paths ending at ``target`` (as root -> target), at most ``limit``."""
    out: list[tuple[int, ...]] = []
    stack = [(target,)]
    while stack and len(out) < limit:
        tail = stack.pop()
        head = tail[0]
        if dist[head] == 0:
            out.append(tail)
            continue
        preds = [p for p in g.adjacency[head] if dist[p] == dist[head] - 1]
        for p in reversed(preds):
            stack.append((p,) + tail)
    return out


def geodesic_analysis(g: CoreGraph, mode: str = "longest", u: Optional[int] = None,
                      v: Optional[int] = None, path_cap: int = DEFAULT_PATH_CAP) -> GeodesicReport:
    """Shortest paths between two nodes, or all diameter-length shortest paths.

    Paths are counted as unordered node sequences; at most ``path_cap`` are listed.
    """
    if mode == "between":
        if u is None or v is None:
            raise ValueError("between mode needs both u and v")
        u, v = g.check_node(u), g.check_node(v)
        dist, sigma = _bfs_dag(g, u)
        paths = _paths_to(g, dist, v, path_cap)
        return GeodesicReport("between", dist[v], sigma[v], tuple(paths), sigma[v] > len(paths))
    if mode != "longest":
        raise ValueError(f"unknown geodesic mode {mode!r}")
    diameter = max(distance_summary(g).eccentricities)
    total = 0
    paths: list[tuple[int, ...]] = []
    for a in range(g.node_count):
        dist, sigma = _bfs_dag(g, a)
        for b in range(a + 1, g.node_count):
            if dist[b] == diameter and (diameter > 0):
                total += sigma[b]
                if len(paths) < path_cap:
                    paths.extend(_paths_to(g, dist, b, path_cap - len(paths)))
    if diameter == 0:
        total, paths = 1, [(0,)]
    return GeodesicReport("longest", diameter, total, tuple(paths), total > len(paths))


# -- core / periphery ----------------------------------------------------------


@dataclass(frozen=True)
class CorePeripheryPartition:
    core: frozenset[int]
    periphery: frozenset[int]
    basis: int
    degenerate: bool = False

    def to_record(self) -> dict:
        return {"core": sorted(self.core), "periphery": sorted(self.periphery),
                "basis": self.basis, "degenerate": self.degenerate}


def core_periphery(g: CoreGraph) -> CorePeripheryPartition:
    """Core = nodes of maximum core number; everything else is periphery."""
    core_number = kcore(g).core_number
    top = max(core_number)
    core = frozenset(v for v, k in enumerate(core_number) if k == top)
    periphery = frozenset(range(g.node_count)) - core
    return CorePeripheryPartition(core, periphery, top, degenerate=not periphery)


# -- bottlenecks ---------------------------------------------------------------


def _side(g: CoreGraph, start: int, removed: set[Edge], limit: Optional[int] = None) -> set[int]:
    """Component of ``start`` after deleting ``removed``; stops early once it
    exceeds ``limit`` nodes."""
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for w in g.adjacency[x]:
            if w not in seen and ((x, w) if x < w else (w, x)) not in removed:
                seen.add(w)
                queue.append(w)
                if limit is not None and len(seen) > limit:
                    return seen
    return seen


def _as_bond(g: CoreGraph, cut: tuple[Edge, ...], need: int) -> Optional[frozenset[int]]:
    """If deleting ``cut`` leaves exactly two components, both of at least ``need``
    nodes, with every cut edge running between them, return one side."""
    removed = set(cut)
    a0, b0 = cut[0]
    # cheap rejection: a side smaller than ``need`` is found without a full traversal
    for start in (a0, b0):
        if len(_side(g, start, removed, limit=need - 1)) < need:
            return None
    side = _side(g, a0, removed)
    if b0 in side:
        return None
    other = _side(g, b0, removed)
    if len(side) + len(other) != g.node_count:
        return None
    if any((x in side) == (y in side) for x, y in cut):
        return None
    return frozenset(side)


def _candidate_cuts_exhaustive(g: CoreGraph, max_cut: int):
    edges = g.sorted_edges()
    for k in range(1, max_cut + 1):
        yield from combinations(edges, k)


def _cut_labels(g: CoreGraph, seed: int) -> tuple[list[Edge], np.ndarray]:
    """Random XOR labels that vanish exactly on edge sets in the cut space."""
    n = g.node_count
    rng = np.random.default_rng(seed)
    parent = [-1] * n
    order = [0]
    parent[0] = 0
    for x in order:
        for w in g.adjacency[x]:
            if parent[w] < 0:
                parent[w] = x
                order.append(w)
    edges = g.sorted_edges()
    labels = np.zeros(len(edges), dtype=np.uint64)
    pot = np.zeros(n, dtype=np.uint64)
    tree_index: dict[int, int] = {}
    for i, (a, b) in enumerate(edges):
        if parent[b] == a and b != 0:
            tree_index[b] = i
        elif parent[a] == b and a != 0:
            tree_index[a] = i
        else:
            r = rng.integers(1, np.iinfo(np.uint64).max, dtype=np.uint64, endpoint=True)
            labels[i] = r
            pot[a] ^= r
            pot[b] ^= r
    for x in reversed(order[1:]):
        labels[tree_index[x]] = pot[x]
        pot[parent[x]] ^= pot[x]
    return edges, labels


def _candidate_cuts_xor(g: CoreGraph, max_cut: int, seed: int = 0):
    edges, labels = _cut_labels(g, seed)
    zero = labels == 0
    for i in np.flatnonzero(zero):
        yield (edges[i],)
    if max_cut < 2:
        return
    by_label: dict[int, list[int]] = {}
    for i, lab in enumerate(labels.tolist()):
        if lab:
            by_label.setdefault(lab, []).append(i)
    for group in by_label.values():
        for i, j in combinations(group, 2):
            yield (edges[i], edges[j])
    if max_cut < 3:
        return
    order = np.argsort(labels, kind="stable")
    sorted_labels = labels[order]
    for i in range(len(edges)):
        if zero[i]:
            continue
        x = labels[i + 1:] ^ labels[i]
        pos = np.searchsorted(sorted_labels, x)
        pos[pos >= len(sorted_labels)] = 0
        hits = np.flatnonzero((sorted_labels[pos] == x) & (x != 0) & ~zero[i + 1:])
        for off in hits.tolist():
            j = i + 1 + off
            for k in by_label.get(int(x[off]), ()):
                if k > j:
                    yield (edges[i], edges[j], edges[k])


def bottlenecks(g: CoreGraph, max_cut: int = 3, balance: float = 0.1,
                exhaustive: Optional[bool] = None) -> ElementSet:
    """Small balanced edge cuts, merged into bottleneck regions.

    Candidate cuts are minimal edge cuts (bonds) of at most ``max_cut`` edges that
    leave two parts of at least ``balance * N`` nodes each. Cuts whose endpoint
    sets overlap are merged; a region reports the nodes common to all of its
    cuts, or their union when nothing is common.
    """
    if max_cut < 1:
        raise ValueError("max_cut must be at least 1")
    if not 0 < balance <= 0.5:
        raise ValueError("balance must lie in (0, 0.5]")
    n = g.node_count
    need = max(1, ceil(balance * n))
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_LIMIT
    source = _candidate_cuts_exhaustive(g, max_cut) if exhaustive else _candidate_cuts_xor(g, max_cut)
    bonds: list[tuple[Edge, ...]] = []
    for cut in source:
        if _as_bond(g, cut, need) is not None:
            bonds.append(tuple(sorted(cut)))
    bonds = sorted(set(bonds))

    touched = [frozenset(x for e in cut for x in e) for cut in bonds]
    parent = list(range(len(bonds)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(len(bonds)), 2):
        if touched[i] & touched[j]:
            parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(bonds)):
        groups.setdefault(find(i), []).append(i)
    items = []
    for members in groups.values():
        common = frozenset.intersection(*(touched[i] for i in members))
        region = common or frozenset().union(*(touched[i] for i in members))
        items.append((tuple(sorted(region)), {
            "weight": len(region),
            "cut_size": min(len(bonds[i]) for i in members),
            "cuts": len(members),
        }))
    return element_set("subgraphs", "bottleneck", items)

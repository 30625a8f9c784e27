"""Named graph families and seeded random generators."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .graph import CoreGraph, RawNetwork, normalize_to_core


def path(n: int) -> CoreGraph:
    return CoreGraph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> CoreGraph:
    if n < 3:
        raise ValueError("cycles need at least 3 nodes")
    return CoreGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> CoreGraph:
    return CoreGraph(n, tuple(combinations(range(n), 2)))


def star(leaves: int) -> CoreGraph:
    """Centre 0 with ``leaves`` pendant nodes."""
    return CoreGraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def complete_multipartite(*sizes: int) -> CoreGraph:
    parts, start = [], 0
    for s in sizes:
        parts.append(range(start, start + s))
        start += s
    edges = [(u, v) for a, b in combinations(parts, 2) for u in a for v in b]
    return CoreGraph(start, tuple(edges))


def petersen() -> CoreGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return CoreGraph(10, tuple(outer + spokes + inner))


def from_edges(edges: Iterable[tuple[int, int]]) -> CoreGraph:
    """Build from integer edges, keeping the given ids (must be dense and connected)."""
    edges = [(int(u), int(v)) for u, v in edges]
    n = 1 + max((max(e) for e in edges), default=0)
    return CoreGraph(n, tuple(edges))


def disjoint_union(*graphs: CoreGraph) -> tuple[int, list[tuple[int, int]], list[int]]:
    """Edges of the disjoint union plus the id offset of every part."""
    edges, offsets, n = [], [], 0
    for g in graphs:
        offsets.append(n)
        edges.extend((u + n, v + n) for u, v in g.edge_list)
        n += g.node_count
    return n, edges, offsets


def join(graphs: Sequence[CoreGraph], links: Iterable[tuple[int, int, int, int]],
         extra_nodes: int = 0, extra_edges: Iterable[tuple[int, int]] = ()) -> CoreGraph:
    """Disjoint union with connecting edges.

    ``links`` holds ``(part_a, node_a, part_b, node_b)``; extra nodes get ids after
    all parts and ``extra_edges`` use global ids.
    """
    n, edges, off = disjoint_union(*graphs)
    edges += [(off[a] + u, off[b] + v) for a, u, b, v in links]
    edges += list(extra_edges)
    return CoreGraph(n + extra_nodes, tuple(edges))


def with_pendant_path(g: CoreGraph, attach: int, length: int) -> CoreGraph:
    """Hang a path of ``length`` new nodes off node ``attach``."""
    n = g.node_count
    edges = list(g.edge_list)
    prev = attach
    for i in range(length):
        edges.append((prev, n + i))
        prev = n + i
    return CoreGraph(n + length, tuple(edges))


def _largest(n: int, edges) -> CoreGraph:
    raw = RawNetwork.from_pairs(edges)
    parts = normalize_to_core(raw) if edges else []
    return parts[0] if parts else CoreGraph(1)


def gnp(n: int, p: float, seed: int) -> CoreGraph:
    """Erdős–Rényi G(n, p); returns the largest connected component."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    hit = rng.random(iu.size) < p
    return _largest(n, zip(iu[hit].tolist(), ju[hit].tolist()))


def gnm(n: int, m: int, seed: int) -> CoreGraph:
    """Uniform G(n, m); returns the largest connected component."""
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    chosen = rng.choice(total, size=min(m, total), replace=False)
    iu, ju = np.triu_indices(n, 1)
    return _largest(n, zip(iu[chosen].tolist(), ju[chosen].tolist()))


def connected_gnm(n: int, m: int, seed: int) -> CoreGraph:
    """Connected graph with exactly ``n`` nodes and ``m`` edges: a random
    recursive tree topped up with uniformly random extra edges."""
    if m < n - 1 or m > n * (n - 1) // 2:
        raise ValueError("edge count out of range for a connected simple graph")
    rng = np.random.default_rng(seed)
    edges: set[tuple[int, int]] = set()
    order = rng.permutation(n)
    for i in range(1, n):
        u, v = int(order[i]), int(order[rng.integers(0, i)])
        edges.add((min(u, v), max(u, v)))
    while len(edges) < m:
        batch = rng.integers(0, n, size=(2 * (m - len(edges)) + 16, 2))
        for u, v in batch.tolist():
            if u != v and len(edges) < m:
                edges.add((min(u, v), max(u, v)))
    return CoreGraph(n, tuple(sorted(edges)))


def barabasi_albert(n: int, m: int, seed: int) -> CoreGraph:
    """Preferential attachment: each new node links to ``m`` existing nodes."""
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i, j in combinations(range(m + 1), 2)]
    targets = [v for e in edges for v in e]
    for new in range(m + 1, n):
        picked: set[int] = set()
        while len(picked) < m:
            picked.add(targets[int(rng.integers(0, len(targets)))])
        for t in sorted(picked):
            edges.append((t, new))
            targets += [t, new]
    return CoreGraph(n, tuple(edges))


def watts_strogatz(n: int, k: int, p: float, seed: int) -> CoreGraph:
    """Ring lattice with ``k`` neighbours per node, each edge rewired with probability ``p``."""
    rng = np.random.default_rng(seed)
    edges = {(i, (i + j) % n) for i in range(n) for j in range(1, k // 2 + 1)}
    edges = {(min(e), max(e)) for e in edges}
    for u, v in sorted(edges):
        if rng.random() < p:
            w = int(rng.integers(0, n))
            key = (min(u, w), max(u, w))
            if w != u and key not in edges:
                edges.discard((u, v))
                edges.add(key)
    return _largest(n, sorted(edges))

"""Hop censuses, the BMatrix, distance summaries and k-core decomposition.

Single-root queries use a plain breadth-first traversal. All-roots queries go
through :func:`iter_distance_rows`, which hands out blocks of the hop-distance
matrix so that large graphs never need the full N x N matrix in memory.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Literal, Optional

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .graph import CoreGraph

CensusKind = Literal["node", "stub"]
ROW_CHUNK = 256


@dataclass(frozen=True)
class CensusVector:
    root: int
    kind: CensusKind
    counts: tuple[int, ...]

    @property
    def eccentricity(self) -> int:
        return len(self.counts) - 1

    def to_record(self) -> dict:
        return {"kind": self.kind, "root": self.root, "counts": list(self.counts)}


@dataclass(frozen=True, eq=False)
class BMatrix:
    """``counts[h, k]`` = number of roots with exactly ``k`` nodes at hop ``h``."""

    counts: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.counts, other.counts))

    def __getitem__(self, hk: tuple[int, int]) -> int:
        h, k = hk
        rows, cols = self.shape
        if 0 <= h < rows and 0 <= k < cols:
            return int(self.counts[h, k])
        return 0

    def padded(self, rows: int, cols: int, node_count: int) -> np.ndarray:
        """Grow to ``rows x cols``; extra rows hold every root at k=0."""
        out = np.zeros((rows, cols), dtype=np.int64)
        r, c = self.shape
        out[:r, :c] = self.counts
        out[r:, 0] = node_count
        return out

    def to_record(self) -> dict:
        rows, cols = self.shape
        return {"rows": rows, "cols": cols, "cells": self.counts.tolist()}


@dataclass(frozen=True)
class DistanceSummary:
    eccentricities: tuple[int, ...]
    diameter: int
    radius: int
    girth: Optional[int]  # None for acyclic graphs

    def to_record(self) -> dict:
        return {
            "diameter": self.diameter,
            "radius": self.radius,
            "girth": self.girth,
            "eccentricities": list(self.eccentricities),
        }


@dataclass(frozen=True)
class KCoreDecomposition:
    core_number: tuple[int, ...]
    shells: dict[int, tuple[int, ...]] = field(default_factory=dict)
    # for each shell level k: connected components of the subgraph on nodes with core >= k
    core_components: dict[int, tuple[frozenset[int], ...]] = field(default_factory=dict)

    @property
    def max_core(self) -> int:
        return max(self.core_number)

    def to_record(self) -> dict:
        return {
            "core_number": list(self.core_number),
            "shell_sizes": {str(k): len(v) for k, v in sorted(self.shells.items())},
        }


# -- traversal kernels ------------------------------------------------------


def bfs_distances(g: CoreGraph, root: int) -> list[int]:
    root = g.check_node(root)
    dist = [-1] * g.node_count
    dist[root] = 0
    queue = deque([root])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def iter_distance_rows(g: CoreGraph, chunk: int = ROW_CHUNK) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(roots, D)`` with ``D[i, v]`` the hop distance from ``roots[i]`` to ``v``."""
    n = g.node_count
    adj = g.csr
    for start in range(0, n, chunk):
        roots = np.arange(start, min(n, start + chunk))
        d = csgraph.shortest_path(adj, method="D", directed=False, unweighted=True, indices=roots)
        yield roots, d.astype(np.int32)


def _hop_tables(g: CoreGraph) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    deg = np.asarray(g.degrees, dtype=np.int64)
    nodes, stubs = [], []
    for _, d in iter_distance_rows(g):
        width = int(d.max()) + 1
        offset = d + (np.arange(d.shape[0], dtype=np.int64) * width)[:, None]
        flat = offset.ravel()
        nc = np.bincount(flat, minlength=d.shape[0] * width).reshape(-1, width)
        sc = np.bincount(flat, weights=np.broadcast_to(deg, d.shape).ravel(),
                         minlength=d.shape[0] * width).reshape(-1, width).astype(np.int64)
        for row_n, row_s, ecc in zip(nc, sc, d.max(axis=1)):
            nodes.append(tuple(int(x) for x in row_n[: ecc + 1]))
            stubs.append(tuple(int(x) for x in row_s[: ecc + 1]))
    return nodes, stubs


# -- censuses ---------------------------------------------------------------


def node_census(g: CoreGraph, root: int) -> CensusVector:
    dist = bfs_distances(g, root)
    counts = [0] * (max(dist) + 1)
    for d in dist:
        counts[d] += 1
    return CensusVector(root, "node", tuple(counts))


def stub_census(g: CoreGraph, root: int) -> CensusVector:
    dist = bfs_distances(g, root)
    counts = [0] * (max(dist) + 1)
    for v, d in enumerate(dist):
        counts[d] += g.degrees[v]
    return CensusVector(root, "stub", tuple(counts))


def all_censuses(g: CoreGraph, kind: CensusKind = "node") -> list[CensusVector]:
    """Censuses for every root, ordered by root id."""
    nodes, stubs = _hop_tables(g)
    table = nodes if kind == "node" else stubs
    return [CensusVector(r, kind, c) for r, c in enumerate(table)]


def census_pair(g: CoreGraph) -> tuple[list[CensusVector], list[CensusVector]]:
    nodes, stubs = _hop_tables(g)
    return ([CensusVector(r, "node", c) for r, c in enumerate(nodes)],
            [CensusVector(r, "stub", c) for r, c in enumerate(stubs)])


def bmatrix(g: CoreGraph, censuses: Optional[list[CensusVector]] = None) -> BMatrix:
    if censuses is None:
        censuses = all_censuses(g, "node")
    rows = 1 + max(c.eccentricity for c in censuses)
    cols = 1 + max(max(c.counts) for c in censuses)
    counts = np.zeros((rows, cols), dtype=np.int64)
    for c in censuses:
        counts[np.arange(len(c.counts)), c.counts] += 1
        counts[len(c.counts):, 0] += 1
    return BMatrix(counts)


# -- distances --------------------------------------------------------------


def _girth_block(d: np.ndarray, us: np.ndarray, vs: np.ndarray,
                 into_u: sparse.csr_matrix, into_v: sparse.csr_matrix) -> float:
    """Shortest cycle detectable from the roots of one distance block.

    An edge with equal depth at both ends closes an odd cycle of length 2d+1;
    a node with two parents one level up closes an even cycle of length 2d.
    """
    du, dv = d[:, us], d[:, vs]
    best = np.inf
    level = du == dv
    if level.any():
        best = min(best, float(2 * du[level].min() + 1))
    parents = sparse.csr_matrix((du + 1 == dv).astype(np.int32)) @ into_v
    parents = parents + sparse.csr_matrix((dv + 1 == du).astype(np.int32)) @ into_u
    parents = parents.toarray()
    multi = parents >= 2
    if multi.any():
        best = min(best, float(2 * d[multi].min()))
    return best


def distance_summary(g: CoreGraph) -> DistanceSummary:
    n, m = g.node_count, g.edge_count
    ecc: list[int] = []
    girth = np.inf
    if m >= n:
        e = np.asarray(g.sorted_edges(), dtype=np.int64)
        us, vs = e[:, 0], e[:, 1]
        ones = np.ones(m, dtype=np.int32)
        into_u = sparse.csr_matrix((ones, (np.arange(m), us)), shape=(m, n))
        into_v = sparse.csr_matrix((ones, (np.arange(m), vs)), shape=(m, n))
    for _, d in iter_distance_rows(g):
        ecc.extend(int(x) for x in d.max(axis=1))
        if m >= n and girth > 3:
            girth = min(girth, _girth_block(d, us, vs, into_u, into_v))
    return DistanceSummary(
        eccentricities=tuple(ecc),
        diameter=max(ecc),
        radius=min(ecc),
        girth=None if girth == np.inf else int(girth),
    )


# -- k-core -----------------------------------------------------------------


def core_numbers(g: CoreGraph) -> list[int]:
    """Bucket-queue peeling (Batagelj & Zaversnik), O(N + E)."""
    n = g.node_count
    deg = list(g.degrees)
    max_deg = max(deg)
    bins = [0] * (max_deg + 1)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(max_deg + 1):
        bins[d], start = start, start + bins[d]
    pos = [0] * n
    order = [0] * n
    for v in range(n):
        pos[v] = bins[deg[v]]
        order[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(max_deg, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0
    adj = g.adjacency
    for i in range(n):
        v = order[i]
        for u in adj[v]:
            if deg[u] > deg[v]:
                du = deg[u]
                pu, pw = pos[u], bins[du]
                w = order[pw]
                if u != w:
                    order[pu], order[pw] = w, u
                    pos[u], pos[w] = pw, pu
                bins[du] += 1
                deg[u] -= 1
    return deg


def _components(g: CoreGraph, nodes: set[int]) -> list[frozenset[int]]:
    seen: set[int] = set()
    out = []
    for s in sorted(nodes):
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w in nodes and w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


def kcore(g: CoreGraph) -> KCoreDecomposition:
    core = core_numbers(g)
    shells: dict[int, list[int]] = {}
    for v, k in enumerate(core):
        shells.setdefault(k, []).append(v)
    comps = {}
    for k in sorted(shells):
        comps[k] = tuple(_components(g, {v for v, c in enumerate(core) if c >= k}))
    return KCoreDecomposition(
        core_number=tuple(core),
        shells={k: tuple(v) for k, v in sorted(shells.items())},
        core_components=comps,
    )


def describe(g: CoreGraph) -> dict:
    """All descriptors in one record-friendly mapping."""
    nodes, stubs = census_pair(g)
    return {
        "node_count": g.node_count,
        "edge_count": g.edge_count,
        "censuses": [c.to_record() for c in nodes] + [c.to_record() for c in stubs],
        "bmatrix": bmatrix(g, nodes).to_record(),
        "distance": distance_summary(g).to_record(),
        "kcore": kcore(g).to_record(),
    }

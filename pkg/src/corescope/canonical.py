"""Canonical codes and exhaustive enumeration of small connected graphs.

These are oracle-grade routines for desk-scale verification, not a production
isomorphism engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import LimitError
from .graph import CoreGraph

CANONICAL_LIMIT = 10
ENUMERATION_LIMIT = 7
LABELLED_LIMIT = 6


class CanonicalCode(bytes):
    """Byte string identifying an isomorphism class: node count, then the packed
    upper triangle of the adjacency matrix under the canonical ordering."""

    def __str__(self) -> str:
        return self.hex()

    def __repr__(self) -> str:
        return f"CanonicalCode({self.hex()!r})"


def _rank(keys: list) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(adj: list[frozenset[int]], colors: list[int]) -> list[int]:
    """Colour refinement to the coarsest equitable partition below ``colors``.

    Colours are re-ranked from sorted signatures, so the result depends only on
    the structure, never on node ids.
    """
    n_colors = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(len(adj))]
        colors = _rank(sigs)
        k = len(set(colors))
        if k == n_colors:
            return colors
        n_colors = k


def _leaf_code(adj: list[frozenset[int]], colors: list[int]) -> bytes:
    n = len(adj)
    order = sorted(range(n), key=colors.__getitem__)
    bits = 0
    nbits = 0
    for i in range(n):
        row = adj[order[i]]
        for j in range(i + 1, n):
            bits = (bits << 1) | (order[j] in row)
            nbits += 1
    nbytes = (nbits + 7) // 8
    return bytes([n]) + (bits << (nbytes * 8 - nbits)).to_bytes(nbytes, "big") if nbytes else bytes([n])


def _search(adj: list[frozenset[int]], colors: list[int], best: list[bytes]) -> None:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
    if target is None:
        code = _leaf_code(adj, colors)
        if not best or code > best[0]:
            best[:] = [code]
        return
    # twins are swapped by an automorphism fixing everything already individualized,
    # so one branch per twin class is enough
    branches: list[int] = []
    for v in target:
        if not any(adj[v] - {u} == adj[u] - {v} for u in branches):
            branches.append(v)
    for v in branches:
        split = [2 * c + (u != v) for u, c in enumerate(colors)]
        _search(adj, _refine(adj, _rank(split)), best)


def canonical_code(g: CoreGraph) -> CanonicalCode:
    """Isomorphism-class code for graphs of at most ``CANONICAL_LIMIT`` nodes.

    Refines by degree, then explores every individualization choice inside each
    non-trivial cell; the lexicographically largest leaf code wins.
    """
    n = g.node_count
    if n > CANONICAL_LIMIT:
        raise LimitError("canonical_code", n, CANONICAL_LIMIT)
    adj = [frozenset(a) for a in g.adjacency]
    best: list[bytes] = []
    _search(adj, _refine(adj, _rank(list(g.degrees))), best)
    return CanonicalCode(best[0])


def graph_from_code(code: bytes | str) -> CoreGraph:
    raw = bytes.fromhex(code) if isinstance(code, str) else bytes(code)
    n = raw[0]
    bits = int.from_bytes(raw[1:], "big") if len(raw) > 1 else 0
    nbits = n * (n - 1) // 2
    bits >>= (len(raw) - 1) * 8 - nbits
    edges = []
    pos = nbits - 1
    for i in range(n):
        for j in range(i + 1, n):
            if (bits >> pos) & 1:
                edges.append((i, j))
            pos -= 1
    return CoreGraph(n, tuple(edges))


@dataclass(frozen=True)
class Enumeration:
    n: int
    labelled: bool
    count: int
    codes: tuple[CanonicalCode, ...] = ()

    def graphs(self) -> list[CoreGraph]:
        return [graph_from_code(c) for c in self.codes]


def _edge_mask_table(n: int):
    """For every edge subset of K_n (as an integer mask): per-node adjacency bitmasks."""
    pairs = list(combinations(range(n), 2))
    masks = np.arange(1 << len(pairs), dtype=np.uint32)
    adj = np.zeros((n, masks.size), dtype=np.uint16)
    for i, (u, v) in enumerate(pairs):
        bit = ((masks >> i) & 1).astype(np.uint16)
        adj[u] |= bit << v
        adj[v] |= bit << u
    return pairs, masks, adj


def _connected(n: int, adj: np.ndarray) -> np.ndarray:
    full = (1 << n) - 1
    reach = np.ones(adj.shape[1], dtype=np.uint16)
    for _ in range(n - 1):
        grown = reach.copy()
        for v in range(n):
            grown |= adj[v] * ((reach >> v) & 1)
        reach = grown
    return reach == full


def enumerate_connected(n: int, labelled: bool = False) -> Enumeration:
    """Brute force over all 2^C(n,2) edge sets of K_n, keeping the connected ones.

    Unlabelled mode deduplicates by canonical code. Only edge sets whose degree
    sequence is non-increasing in node id are canonicalized; every isomorphism
    class has such a member, so no class is lost.
    """
    limit = LABELLED_LIMIT if labelled else ENUMERATION_LIMIT
    if n < 1 or n > limit:
        raise LimitError("enumerate_connected" + (" (labelled)" if labelled else ""), n, limit)
    if n == 1:
        return Enumeration(1, labelled, 1, () if labelled else (canonical_code(CoreGraph(1)),))

    pairs, masks, adj = _edge_mask_table(n)
    connected = _connected(n, adj)
    if labelled:
        return Enumeration(n, True, int(connected.sum()))

    deg = np.zeros((n, masks.size), dtype=np.uint8)
    for v in range(n):
        a = adj[v].copy()
        while a.any():
            deg[v] += (a & 1).astype(np.uint8)
            a >>= 1
    keep = connected.copy()
    for v in range(n - 1):
        keep &= deg[v] >= deg[v + 1]

    codes: set[CanonicalCode] = set()
    for m in masks[keep]:
        m = int(m)
        edges = tuple(p for i, p in enumerate(pairs) if (m >> i) & 1)
        codes.add(canonical_code(CoreGraph(n, edges)))
    ordered = tuple(sorted(codes))
    return Enumeration(n, False, len(ordered), ordered)

"""Core-layer graphs: parsing raw edge lists and stripping them to bare topology."""

from __future__ import annotations

import hashlib
import io
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np
from scipy import sparse

from .errors import GraphError, ParseError, PermutationError

Edge = tuple[int, int]


@dataclass(frozen=True)
class RawNetwork:
    """Token pairs exactly as read, before any normalization."""

    pairs: tuple[tuple[str, str], ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[object, object]]) -> "RawNetwork":
        return cls(tuple((str(a), str(b)) for a, b in pairs))

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True, eq=False)
class CoreGraph:
    """Immutable simple undirected connected graph on ids ``0..node_count-1``.

    ``edge_list`` keeps the order and orientation in which edges were supplied so
    that a graph can be written back out and re-read without its ids moving.
    Equality and hashing only look at the unordered edge set.
    """

    node_count: int
    edge_list: tuple[Edge, ...] = ()
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = self.node_count
        if n < 1:
            raise GraphError("a core graph needs at least one node")
        seen: set[Edge] = set()
        kept: list[Edge] = []
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edge_list:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self loop at node {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            kept.append((u, v))
            nbrs[u].append(v)
            nbrs[v].append(u)
        object.__setattr__(self, "edge_list", tuple(kept))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in nbrs))
        if len(_reach(self.adjacency, 0)) != n:
            raise GraphError("core graphs must be connected")

    # -- identity ---------------------------------------------------------

    @cached_property
    def edges(self) -> frozenset[Edge]:
        return frozenset((u, v) if u < v else (v, u) for u, v in self.edge_list)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoreGraph):
            return NotImplemented
        return self.node_count == other.node_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges))

    # -- queries ----------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edge_list)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[self.check_node(v)])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[self.check_node(v)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def check_node(self, v: int) -> int:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.node_count:
            raise GraphError(f"node {v!r} is not in 0..{self.node_count - 1}")
        return int(v)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    @cached_property
    def csr(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency as a CSR matrix (int8)."""
        n = self.node_count
        if not self.edge_list:
            return sparse.csr_matrix((n, n), dtype=np.int8)
        e = np.asarray(self.edge_list, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(len(rows), dtype=np.int8)
        return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))

    def induced(self, nodes: Iterable[int]) -> "CoreGraph":
        """Induced subgraph on ``nodes``, relabelled densely in ascending id order.

        Raises GraphError if the induced subgraph is disconnected.
        """
        keep = sorted({self.check_node(v) for v in nodes})
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.sorted_edges() if u in index and v in index]
        return CoreGraph(len(keep), tuple(edges))

    def to_edge_list(self) -> str:
        """Serialize in stored order; re-reading reproduces the same ids when the
        graph came out of :func:`normalize_to_core`."""
        if not self.edge_list:
            return ""
        return "".join(f"{u} {v}\n" for u, v in self.edge_list)

    def __repr__(self) -> str:
        return f"CoreGraph(N={self.node_count}, E={self.edge_count})"


def _reach(adjacency: Sequence[Sequence[int]], start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def parse_edge_list(text: str | TextIO) -> RawNetwork:
    """Read whitespace-separated token pairs; blank lines and ``#`` comments are skipped."""
    stream = io.StringIO(text) if isinstance(text, str) else text
    pairs = []
    for lineno, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise ParseError(lineno, f"arity: expected 2 tokens, found {len(tokens)}")
        pairs.append((tokens[0], tokens[1]))
    return RawNetwork(tuple(pairs))


def normalize_to_core(raw: RawNetwork) -> list[CoreGraph]:
    """Drop loops, direction and duplicates; split into connected components.

    Ids are dense and follow first appearance in the stream (nodes seen only in
    self loops come last and end up as single-node graphs). Components come
    largest first; equal sizes are ordered by canonical code where the graphs are
    small enough, otherwise by edge count (descending) and then first appearance.
    """
    # self-loop pairs are skipped on the first pass so that a token's id comes
    # from the first edge that survives normalization
    ids: dict[str, int] = {}
    for loops in (False, True):
        for a, b in raw.pairs:
            if (a == b) != loops:
                continue
            for tok in (a, b):
                if tok not in ids:
                    ids[tok] = len(ids)
    if not ids:
        return []

    n = len(ids)
    seen: set[Edge] = set()
    oriented: list[Edge] = []
    for a, b in raw.pairs:
        u, v = ids[a], ids[b]
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        oriented.append((u, v))

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in oriented:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    # ids are first-appearance ordered, so iterating ids in order walks the stream order
    members: dict[int, list[int]] = {}
    for v in range(n):
        members.setdefault(find(v), []).append(v)
    comp_edges: dict[int, list[Edge]] = {r: [] for r in members}
    for u, v in oriented:
        comp_edges[find(u)].append((u, v))

    graphs: list[tuple[int, CoreGraph]] = []
    for order, (root, nodes) in enumerate(members.items()):
        local = {v: i for i, v in enumerate(nodes)}
        edges = tuple((local[u], local[v]) for u, v in comp_edges[root])
        graphs.append((order, CoreGraph(len(nodes), edges)))

    from .canonical import CANONICAL_LIMIT, canonical_code

    def sort_key(item: tuple[int, CoreGraph]):
        order, g = item
        code = canonical_code(g).hex() if g.node_count <= CANONICAL_LIMIT else ""
        return (-g.node_count, code, -g.edge_count, order)

    graphs.sort(key=sort_key)
    return [g for _, g in graphs]


def permute_nodes(g: CoreGraph, perm: Sequence[int] | Mapping[int, int]) -> CoreGraph:
    """Relabel node ``v`` as ``perm[v]``."""
    n = g.node_count
    if isinstance(perm, Mapping):
        mapping = [perm.get(v) for v in range(n)]
    else:
        mapping = list(perm)
    if len(mapping) != n or sorted(mapping, key=lambda x: (x is None, x)) != list(range(n)):
        raise PermutationError(f"not a bijection on 0..{n - 1}: {perm!r}")
    mapping = [int(x) for x in mapping]
    return CoreGraph(n, tuple((mapping[u], mapping[v]) for u, v in g.edge_list))


def fingerprint(g: CoreGraph) -> str:
    """sha256 over the node count and sorted edge set; stable under edge reordering."""
    text = f"{g.node_count}\n" + "".join(f"{u} {v}\n" for u, v in g.sorted_edges())
    return hashlib.sha256(text.encode()).hexdigest()


def read_graphs(path) -> list[CoreGraph]:
    with open(path, encoding="utf-8") as fh:
        return normalize_to_core(parse_edge_list(fh))

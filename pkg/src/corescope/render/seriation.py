"""Adjacency-matrix row/column orderings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import pdist

from ..graph import CoreGraph

SeriationMethod = Literal["hierarchical", "degree-sort", "identity"]
SERIATION_METHODS = ("hierarchical", "degree-sort", "identity")


@dataclass(frozen=True)
class Seriation:
    method: str
    ordering: tuple[int, ...]

    def to_record(self) -> dict:
        return {"method": self.method, "ordering": list(self.ordering)}


def _leaf_order(z: np.ndarray, n: int) -> list[int]:
    """Dendrogram leaves, visiting the child holding the lower node id first."""
    members: list[list[int]] = [[i] for i in range(n)]
    low = list(range(n))
    for a, b, _, _ in z:
        a, b = int(a), int(b)
        first, second = (a, b) if low[a] <= low[b] else (b, a)
        members.append(members[first] + members[second])
        low.append(min(low[a], low[b]))
    return members[-1]


def seriate(g: CoreGraph, method: SeriationMethod = "hierarchical") -> Seriation:
    n = g.node_count
    if method == "identity" or n < 3 and method == "hierarchical":
        return Seriation(method, tuple(range(n)))
    if method == "degree-sort":
        deg = g.degrees
        return Seriation(method, tuple(sorted(range(n), key=lambda v: (-deg[v], v))))
    if method != "hierarchical":
        raise ValueError(f"unknown seriation method {method!r}; choose from {SERIATION_METHODS}")
    rows = g.csr.toarray().astype(bool)
    z = linkage(pdist(rows, metric="jaccard"), method="average")
    return Seriation(method, tuple(_leaf_order(z, n)))

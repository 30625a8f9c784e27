"""Label-free graph comparison: pair distances, comparison reports, distance
matrices, average-linkage grouping and medoid ranking."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from .census import BMatrix, bmatrix, census_pair, distance_summary, kcore
from .errors import ArityError
from .graph import CoreGraph

Metric = Literal["portrait", "census"]
METRICS = ("portrait", "census")
DEFAULT_LINK_THRESHOLD = 0.1


@dataclass(frozen=True, eq=False)
class Descriptors:
    """Everything the pair metrics need from one graph, computed once."""

    node_count: int
    edge_count: int
    bmatrix: BMatrix
    node_hops: np.ndarray  # summed node census per hop, all roots
    stub_hops: np.ndarray  # summed stub census per hop, all roots

    @classmethod
    def of(cls, g: CoreGraph) -> "Descriptors":
        nodes, stubs = census_pair(g)
        width = 1 + max(c.eccentricity for c in nodes)
        node_hops = np.zeros(width, dtype=np.int64)
        stub_hops = np.zeros(width, dtype=np.int64)
        for c in nodes:
            node_hops[: len(c.counts)] += c.counts
        for c in stubs:
            stub_hops[: len(c.counts)] += c.counts
        return cls(g.node_count, g.edge_count, bmatrix(g, nodes), node_hops, stub_hops)


def _describe(x: CoreGraph | Descriptors) -> Descriptors:
    return x if isinstance(x, Descriptors) else Descriptors.of(x)


def _js_sqrt(p: np.ndarray, q: np.ndarray) -> float:
    m = (p + q) / 2
    total = 0.0
    for a in (p, q):
        mask = a > 0
        total += 0.5 * float(np.sum(a[mask] * np.log2(a[mask] / m[mask])))
    return math.sqrt(min(1.0, max(0.0, total)))


def portrait_divergence(g1: CoreGraph | Descriptors, g2: CoreGraph | Descriptors) -> float:
    """Square root of the Jensen–Shannon divergence (base 2) between the two
    BMatrices read as joint distributions over (hop, count).

    Both matrices are padded to a common shape first; padded rows put every
    root at count 0, matching how short-eccentricity roots are already stored.
    """
    a, b = _describe(g1), _describe(g2)
    rows = max(a.bmatrix.shape[0], b.bmatrix.shape[0])
    cols = max(a.bmatrix.shape[1], b.bmatrix.shape[1])
    pa = a.bmatrix.padded(rows, cols, a.node_count).astype(float)
    pb = b.bmatrix.padded(rows, cols, b.node_count).astype(float)
    return _js_sqrt(pa / pa.sum(), pb / pb.sum())


def _hop_distribution(hops: np.ndarray, width: int, total: int) -> np.ndarray:
    out = np.zeros(width)
    if total == 0:
        out[0] = 1.0
        return out
    out[: len(hops)] = hops / total
    return out


def census_distance(g1: CoreGraph | Descriptors, g2: CoreGraph | Descriptors) -> float:
    """Mean total-variation distance between hop distributions, node and stub flavour.

    Each graph's censuses are summed over all roots into per-hop totals and
    normalized (by N^2 for nodes, N * 2E for stubs). Lies in [0, 1].
    """
    a, b = _describe(g1), _describe(g2)
    width = max(len(a.node_hops), len(b.node_hops))
    node_l1 = np.abs(_hop_distribution(a.node_hops, width, a.node_count ** 2)
                     - _hop_distribution(b.node_hops, width, b.node_count ** 2)).sum()
    stub_l1 = np.abs(_hop_distribution(a.stub_hops, width, a.node_count * 2 * a.edge_count)
                     - _hop_distribution(b.stub_hops, width, b.node_count * 2 * b.edge_count)).sum()
    return float(0.25 * (node_l1 + stub_l1))


def pair_distance(g1, g2, metric: Metric = "portrait") -> float:
    if metric == "portrait":
        return portrait_divergence(g1, g2)
    if metric == "census":
        return census_distance(g1, g2)
    raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")


# -- comparison report -----------------------------------------------------------


def _histogram_tv(xs: Sequence[int], ys: Sequence[int]) -> float:
    width = 1 + max(max(xs), max(ys))
    hx = np.bincount(xs, minlength=width) / len(xs)
    hy = np.bincount(ys, minlength=width) / len(ys)
    return float(0.5 * np.abs(hx - hy).sum())


@dataclass(frozen=True)
class CompareReport:
    node_delta: int
    edge_delta: int
    degree_distance: float
    diameter_delta: int
    radius_delta: int
    girth: tuple[Optional[int], Optional[int]]
    girth_delta: Optional[int]
    portrait_divergence: float
    census_distance: float
    kcore_distance: float
    max_core_delta: int
    verdict: str = field(init=False)

    def __post_init__(self) -> None:
        same = (
            self.node_delta == 0 and self.edge_delta == 0 and self.degree_distance == 0
            and self.diameter_delta == 0 and self.radius_delta == 0
            and self.girth[0] == self.girth[1] and self.portrait_divergence == 0
            and self.census_distance == 0 and self.kcore_distance == 0 and self.max_core_delta == 0
        )
        object.__setattr__(self, "verdict", "indistinguishable-by-descriptors" if same else "different")

    def to_record(self) -> dict:
        return {
            "node_delta": self.node_delta,
            "edge_delta": self.edge_delta,
            "degree_distance": self.degree_distance,
            "diameter_delta": self.diameter_delta,
            "radius_delta": self.radius_delta,
            "girth": list(self.girth),
            "girth_delta": self.girth_delta,
            "portrait_divergence": self.portrait_divergence,
            "census_distance": self.census_distance,
            "kcore_distance": self.kcore_distance,
            "max_core_delta": self.max_core_delta,
            "verdict": self.verdict,
        }


def compare_report(g1: CoreGraph, g2: CoreGraph) -> CompareReport:
    """Facet-by-facet differences, signed as ``g2 - g1``."""
    s1, s2 = distance_summary(g1), distance_summary(g2)
    k1, k2 = kcore(g1).core_number, kcore(g2).core_number
    d1, d2 = Descriptors.of(g1), Descriptors.of(g2)
    girth_delta = None if s1.girth is None or s2.girth is None else s2.girth - s1.girth
    return CompareReport(
        node_delta=g2.node_count - g1.node_count,
        edge_delta=g2.edge_count - g1.edge_count,
        degree_distance=_histogram_tv(g1.degrees, g2.degrees),
        diameter_delta=s2.diameter - s1.diameter,
        radius_delta=s2.radius - s1.radius,
        girth=(s1.girth, s2.girth),
        girth_delta=girth_delta,
        portrait_divergence=portrait_divergence(d1, d2),
        census_distance=census_distance(d1, d2),
        kcore_distance=_histogram_tv(k1, k2),
        max_core_delta=max(k2) - max(k1),
    )


# -- collections -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    metric: str
    distances: np.ndarray
    ids: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.distances.shape[0]

    def to_record(self) -> dict:
        return {"metric": self.metric, "n": self.n, "ids": list(self.ids),
                "distances": self.distances.tolist()}


def similarity_matrix(gs: Sequence[CoreGraph | Descriptors], metric: Metric = "portrait",
                      ids: Optional[Sequence[str]] = None) -> SimilarityMatrix:
    if len(gs) < 2:
        raise ArityError("a similarity matrix needs at least 2 graphs")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")
    desc = [_describe(g) for g in gs]
    n = len(desc)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = dist[j, i] = pair_distance(desc[i], desc[j], metric)
    if ids is None:
        ids = [str(i) for i in range(n)]
    return SimilarityMatrix(metric, dist, tuple(ids))


@dataclass(frozen=True)
class Merge:
    left: tuple[int, ...]
    right: tuple[int, ...]
    distance: float


@dataclass(frozen=True)
class Grouping:
    assignment: tuple[int, ...]
    linkage: tuple[Merge, ...]
    threshold: float
    metric: str = ""

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i, gid in enumerate(self.assignment):
            out.setdefault(gid, []).append(i)
        return [out[k] for k in sorted(out)]

    def to_record(self) -> dict:
        return {
            "metric": self.metric,
            "threshold": self.threshold,
            "assignment": list(self.assignment),
            "groups": self.groups(),
            "linkage": [{"left": list(m.left), "right": list(m.right), "distance": m.distance}
                        for m in self.linkage],
        }


def average_linkage(dist: np.ndarray, threshold: float = math.inf) -> tuple[list[list[int]], list[Merge]]:
    """Agglomerative clustering with average linkage.

    Merges continue while the closest pair is within ``threshold``. Ties go to the
    pair whose smallest member indices are lexicographically lowest.
    """
    clusters = [[i] for i in range(dist.shape[0])]
    merges: list[Merge] = []
    while len(clusters) > 1:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                d = math.fsum(dist[i, j] for i in clusters[a] for j in clusters[b]) / (
                    len(clusters[a]) * len(clusters[b]))
                if best is None or d < best[0]:
                    best = (d, a, b)
        d, a, b = best
        if d > threshold:
            break
        merges.append(Merge(tuple(clusters[a]), tuple(clusters[b]), d))
        clusters[a] = sorted(clusters[a] + clusters[b])
        del clusters[b]
    return clusters, merges


def group_matrix(matrix: SimilarityMatrix, link_threshold: float = DEFAULT_LINK_THRESHOLD) -> Grouping:
    if matrix.n < 3:
        raise ArityError("grouping works on at least 3 graphs")
    clusters, merges = average_linkage(matrix.distances, link_threshold)
    assignment = [0] * matrix.n
    for gid, members in enumerate(sorted(clusters)):
        for i in members:
            assignment[i] = gid
    return Grouping(tuple(assignment), tuple(merges), link_threshold, matrix.metric)


def group_graphs(gs: Sequence[CoreGraph], metric: Metric = "portrait",
                 link_threshold: float = DEFAULT_LINK_THRESHOLD) -> Grouping:
    if len(gs) < 3:
        raise ArityError("grouping works on at least 3 graphs")
    return group_matrix(similarity_matrix(gs, metric), link_threshold)


@dataclass(frozen=True)
class Ranking:
    order: tuple[int, ...]
    totals: tuple[float, ...]
    metric: str = ""

    @property
    def medoid(self) -> int:
        return self.order[0]

    def to_record(self) -> dict:
        return {"metric": self.metric, "order": list(self.order), "totals": list(self.totals),
                "medoid": self.medoid}


def rank_matrix(matrix: SimilarityMatrix) -> Ranking:
    if matrix.n < 3:
        raise ArityError("ranking works on at least 3 graphs")
    totals = [math.fsum(row) for row in matrix.distances.tolist()]
    order = sorted(range(matrix.n), key=lambda i: (totals[i], i))
    return Ranking(tuple(order), tuple(totals), matrix.metric)


def rank_medoid(gs: Sequence[CoreGraph], metric: Metric = "portrait") -> Ranking:
    if len(gs) < 3:
        raise ArityError("ranking works on at least 3 graphs")
    return rank_matrix(similarity_matrix(gs, metric))

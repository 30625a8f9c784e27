"""Whole-graph categories: exact structural classes, their near variants, and
three degree/distance heuristics (scale-free, random, small-world)."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .census import distance_summary, iter_distance_rows
from .generators import gnm
from .graph import CoreGraph

CLASS_NAMES = ("tree", "complete", "regular", "multipartite", "scale-free", "random", "small-world")
NEAR_NAMES = ("near-tree", "near-complete", "near-regular", "near-multipartite")


@dataclass(frozen=True)
class ClassifierConfig:
    near_tolerance: float = 0.1
    exponent_window: tuple[float, float] = (1.8, 3.5)
    top_decile_factor: float = 3.0
    tail_min_nodes: int = 10
    heuristic_min_nodes: int = 20
    dispersion_sigmas: float = 2.0
    clustering_factor: float = 5.0
    path_factor: float = 1.5
    baseline_seed: int = 20250417


@dataclass(frozen=True)
class LabelInfo:
    name: str
    exact: bool
    near: bool
    score: float
    evidence: dict = field(default_factory=dict)

    @property
    def display(self) -> str:
        k = self.evidence.get("parts")
        return f"{self.name}({k})" if self.name == "multipartite" and k else self.name

    def to_record(self) -> dict:
        return {"name": self.display, "exact": self.exact, "near": self.near,
                "score": self.score, "evidence": self.evidence}


@dataclass(frozen=True)
class CategoryReport:
    labels: dict[str, LabelInfo]
    bipartite: bool
    evidence: dict = field(default_factory=dict)

    def has(self, name: str) -> bool:
        """``near-x`` asks for the near flag of ``x``; a bare name for the label
        without the near flag."""
        if name.startswith("near-"):
            info = self.labels.get(name[5:])
            return bool(info and info.near)
        if name == "bipartite":
            return self.bipartite
        info = self.labels.get(name)
        return bool(info and not info.near)

    def names(self) -> list[str]:
        return sorted(info.display if not info.near else f"near-{info.display}" for info in self.labels.values())

    def to_record(self) -> dict:
        return {
            "labels": [self.labels[k].to_record() for k in sorted(self.labels)],
            "bipartite": self.bipartite,
            "evidence": self.evidence,
        }


# -- structural helpers -------------------------------------------------------


def complement_components(g: CoreGraph) -> list[list[int]]:
    """Connected components of the complement graph, without building it."""
    unvisited = set(range(g.node_count))
    comps = []
    while unvisited:
        s = min(unvisited)
        unvisited.discard(s)
        comp, frontier = [s], [s]
        while frontier:
            u = frontier.pop()
            reach = sorted(unvisited.difference(g.adjacency[u]))
            for w in reach:
                unvisited.discard(w)
            comp.extend(reach)
            frontier.extend(reach)
        comps.append(sorted(comp))
    return comps


def two_coloring(g: CoreGraph) -> Optional[list[int]]:
    color = [-1] * g.node_count
    color[0] = 0
    stack = [0]
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if color[w] < 0:
                color[w] = 1 - color[u]
                stack.append(w)
            elif color[w] == color[u]:
                return None
    return color


def mean_clustering(g: CoreGraph) -> float:
    adj = [set(a) for a in g.adjacency]
    local = []
    for v, nbrs in enumerate(g.adjacency):
        d = len(nbrs)
        if d < 2:
            local.append(0.0)
            continue
        links = sum(len(adj[w].intersection(nbrs)) for w in nbrs) // 2
        local.append(2 * links / (d * (d - 1)))
    return math.fsum(local) / g.node_count


def mean_path_length(g: CoreGraph) -> float:
    n = g.node_count
    if n < 2:
        return 0.0
    total = 0
    for _, d in iter_distance_rows(g):
        total += int(d.sum(dtype=np.int64))
    return total / (n * (n - 1))


def powerlaw_fit(degrees, min_tail: int = 10) -> tuple[float, int]:
    """Discrete power-law tail fit (continuity-corrected MLE).

    The lower cutoff is chosen by the smallest Kolmogorov–Smirnov distance among
    cutoffs that leave at least ``min_tail`` values in the tail.
    """
    data = sorted(int(d) for d in degrees if d > 0)
    best = (math.inf, math.nan, data[0] if data else 1)
    for dmin in sorted(set(data)):
        tail = [d for d in data if d >= dmin]
        if len(tail) < min_tail:
            break
        logsum = math.fsum(math.log(d / (dmin - 0.5)) for d in tail)
        if logsum <= 0:
            continue
        alpha = 1 + len(tail) / logsum
        ks = 0.0
        for i, x in enumerate(sorted(set(tail))):
            emp = sum(1 for d in tail if d >= x) / len(tail)
            model = ((x - 0.5) / (dmin - 0.5)) ** (1 - alpha)
            ks = max(ks, abs(emp - model))
        if ks < best[0]:
            best = (ks, alpha, dmin)
    return best[1], best[2]


# -- categorize -----------------------------------------------------------------


def _label(labels: dict, name: str, exact: bool, within: bool, score: float, **evidence) -> None:
    if exact:
        labels[name] = LabelInfo(name, True, False, 1.0, evidence)
    elif within:
        labels[name] = LabelInfo(name, False, True, score, evidence)


def categorize_graph(g: CoreGraph, near_tolerance: Optional[float] = None,
                     config: ClassifierConfig = ClassifierConfig()) -> CategoryReport:
    eps = config.near_tolerance if near_tolerance is None else near_tolerance
    if not 0 <= eps < 1:
        raise ValueError("near_tolerance must lie in [0, 1)")
    n, m = g.node_count, g.edge_count
    deg = g.degrees
    mean_deg = 2 * m / n
    pairs = n * (n - 1) // 2
    density = m / pairs if pairs else 1.0
    labels: dict[str, LabelInfo] = {}
    evidence: dict = {"config": {**asdict(config), "near_tolerance": eps}, "heuristic_labels": True}

    _label(labels, "tree", m == n - 1, m <= (1 + eps) * (n - 1),
           (n - 1) / m if m else 1.0, edges=m, nodes=n)
    _label(labels, "complete", m == pairs, density >= 1 - eps, density, density=density)
    spread = max(deg) - min(deg)
    _label(labels, "regular", spread == 0, spread <= eps * mean_deg,
           max(0.0, 1 - spread / mean_deg) if mean_deg else 1.0, degree_spread=spread)

    parts = complement_components(g)
    if len(parts) >= 2:
        where = {v: i for i, p in enumerate(parts) for v in p}
        defect = sum(1 for u, v in g.edge_list if where[u] == where[v])
        _label(labels, "multipartite", defect == 0, defect <= eps * m,
               1 - defect / m if m else 1.0, parts=len(parts), inner_edges=defect)

    bipartite = two_coloring(g) is not None
    evidence.update(density=density, mean_degree=mean_deg, bipartite=bipartite)

    if n >= config.heuristic_min_nodes:
        _heuristics(g, labels, evidence, eps, config, density)

    if not labels:
        labels["unclassified"] = LabelInfo("unclassified", False, False, 0.0, {})
    return CategoryReport(labels, bipartite, evidence)


def _heuristics(g: CoreGraph, labels: dict, evidence: dict, eps: float,
                config: ClassifierConfig, density: float) -> None:
    n, m = g.node_count, g.edge_count
    deg = sorted(g.degrees, reverse=True)

    alpha, dmin = powerlaw_fit(deg, config.tail_min_nodes)
    top = max(1, math.ceil(0.1 * n))
    share = sum(deg[:top]) / (2 * m)
    lo, hi = config.exponent_window
    checks = [not math.isnan(alpha) and lo <= alpha <= hi,
              share >= config.top_decile_factor * top / n]
    evidence.update(powerlaw_exponent=alpha, powerlaw_dmin=dmin, top_decile_share=share)
    if all(checks):
        labels["scale-free"] = LabelInfo("scale-free", False, False, 1.0,
                                         {"exponent": alpha, "top_decile_share": share, "heuristic": True})

    mean = math.fsum(deg) / n
    var = math.fsum((d - mean) ** 2 for d in deg) / n
    ratio = var / mean
    band = max(eps, config.dispersion_sigmas * math.sqrt(2 / (n - 1)))
    clustering = mean_clustering(g)
    girth = distance_summary(g).girth
    expected_triangles = math.comb(n, 3) * density ** 3
    # binomial degrees have variance/mean = 1 - p, which tends to the Poisson value 1
    checks = [abs(ratio - (1 - density)) <= band,
              clustering <= max(3 * density, density + 0.05),
              expected_triangles < 3 or girth == 3]
    evidence.update(dispersion_ratio=ratio, dispersion_band=band, clustering=clustering)
    if all(checks):
        labels["random"] = LabelInfo("random", False, False, 1.0,
                                     {"dispersion_ratio": ratio, "clustering": clustering, "heuristic": True})

    base = gnm(n, m, config.baseline_seed)
    base_c = max(mean_clustering(base), 2 * base.edge_count / (base.node_count * (base.node_count - 1)))
    base_l = mean_path_length(base)
    path_len = mean_path_length(g)
    evidence.update(path_length=path_len, baseline_clustering=base_c, baseline_path_length=base_l)
    if clustering >= config.clustering_factor * base_c and path_len <= config.path_factor * base_l:
        labels["small-world"] = LabelInfo("small-world", False, False, 1.0, {
            "clustering_ratio": clustering / base_c, "path_ratio": path_len / base_l, "heuristic": True})

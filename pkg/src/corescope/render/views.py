"""The six encodings: AM, NL, HC, CC, NP and GT.

Every drawn mark carries ``data-*`` attributes holding the exact values it
encodes, so tests and downstream tools can read the data layer back out of the
SVG without inverting the geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..census import bmatrix, census_pair, kcore
from ..graph import CoreGraph, fingerprint
from .layout import CANVAS, DEFAULT_ITERATIONS, DEFAULT_SEED, MARGIN, force_layout
from .seriation import SERIATION_METHODS, seriate
from .svg import HEAT_HIGH, HEAT_LOW, Element, document, fmt, lerp_color, points, serialize

ENCODINGS = ("AM", "NL", "HC", "CC", "NP", "GT")

# k-core level colours: 1-core blue, 2-core green, 3-core bright orange, deeper
# levels shade towards dark orange
GT_BLUE, GT_GREEN, GT_ORANGE, GT_DARK_ORANGE = "#3a78c9", "#4caf50", "#ffa21f", "#b34a00"

DEFAULTS: dict[str, dict[str, Any]] = {
    "AM": {"seriation": "hierarchical"},
    "NL": {"seed": DEFAULT_SEED, "iterations": DEFAULT_ITERATIONS},
    "HC": {"census": "stub", "log": False},
    "CC": {"log": False},
    "NP": {"log": True},
    "GT": {},
}


@dataclass(frozen=True)
class RenderDocument:
    svg: bytes
    encoding: str
    fingerprint: str
    params: dict
    sidecar: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {"encoding": self.encoding, "fingerprint": self.fingerprint,
                "params": self.params, "sidecar": self.sidecar, "bytes": len(self.svg)}


def level_color(k: int, top: int) -> str:
    if k <= 1:
        return GT_BLUE
    if k == 2:
        return GT_GREEN
    if k == 3 or top <= 3:
        return GT_ORANGE
    return lerp_color(GT_ORANGE, GT_DARK_ORANGE, (k - 3) / (top - 3))


def _heat(value: float, top: float, log: bool) -> str:
    if top <= 0:
        return HEAT_LOW
    t = math.log1p(value) / math.log1p(top) if log else value / top
    return lerp_color(HEAT_LOW, HEAT_HIGH, t)


def _scale(values, lo: float, hi: float, log: bool):
    """Map values into [lo, hi]; the value range always includes 0."""
    arr = np.asarray(values, dtype=float)
    if log:
        arr = np.log1p(arr)
    top = float(arr.max()) if arr.size else 0.0
    if top == 0:
        return np.full(arr.shape, lo)
    return lo + arr / top * (hi - lo)


def _frame(root: Element) -> None:
    root.add(Element("rect", {"x": 0, "y": 0, "width": CANVAS, "height": CANVAS,
                              "fill": "#ffffff", "stroke": "none"}))


# -- encodings --------------------------------------------------------------------


def _am(g: CoreGraph, opts: dict, root: Element) -> dict:
    order = seriate(g, opts["seriation"]).ordering
    pos = {v: i for i, v in enumerate(order)}
    n = g.node_count
    cell = (CANVAS - 2 * MARGIN) / n
    grid = root.add(Element("g", {"class": "cells"}))
    filled = sorted((pos[a], pos[b]) for u, v in g.sorted_edges() for a, b in ((u, v), (v, u)))
    for i, j in filled:
        grid.add(Element("rect", {
            "x": MARGIN + j * cell, "y": MARGIN + i * cell, "width": cell, "height": cell,
            "fill": "#222222", "data-row": i, "data-col": j,
            "data-u": order[i], "data-v": order[j],
        }))
    root.add(Element("rect", {"x": MARGIN, "y": MARGIN, "width": n * cell, "height": n * cell,
                              "fill": "none", "stroke": "#888888", "stroke-width": 1}))
    return {"ordering": list(order)}


def _nl(g: CoreGraph, opts: dict, root: Element) -> dict:
    lay = force_layout(g, int(opts["seed"]), int(opts["iterations"]))
    p = lay.positions
    edges = root.add(Element("g", {"class": "edges", "stroke": "#555555", "stroke-width": 1}))
    for u, v in g.sorted_edges():
        edges.add(Element("line", {"x1": float(p[u, 0]), "y1": float(p[u, 1]),
                                   "x2": float(p[v, 0]), "y2": float(p[v, 1]),
                                   "data-u": u, "data-v": v}))
    nodes = root.add(Element("g", {"class": "nodes", "fill": "#1f1f1f"}))
    for v in range(g.node_count):
        nodes.add(Element("circle", {"cx": float(p[v, 0]), "cy": float(p[v, 1]), "r": 4, "data-node": v}))
    return {"layout": lay.to_record()}


def _hc(g: CoreGraph, opts: dict, root: Element) -> dict:
    if opts["census"] not in ("stub", "node"):
        raise ValueError("HC census option must be 'stub' or 'node'")
    nodes, stubs = census_pair(g)
    table = stubs if opts["census"] == "stub" else nodes
    width = max(c.eccentricity for c in table)
    top = max(max(c.counts) for c in table)
    group = root.add(Element("g", {"class": "polylines", "fill": "none", "stroke": "#1f4e99",
                                   "stroke-opacity": 0.5, "stroke-width": 1}))
    for c in table:
        xs = [MARGIN + h / max(width, 1) * (CANVAS - 2 * MARGIN) for h in range(len(c.counts))]
        ys = CANVAS - _scale(list(c.counts) + [top], MARGIN, CANVAS - MARGIN, opts["log"])[:-1]
        group.add(Element("polyline", {"points": points(zip(xs, ys)), "data-root": c.root,
                                       "data-values": " ".join(map(str, c.counts))}))
    return {"census": opts["census"], "max_hop": width}


def _cc(g: CoreGraph, opts: dict, root: Element) -> dict:
    nodes, stubs = census_pair(g)
    top_n = max(max(c.counts) for c in nodes)
    top_s = max(max(c.counts) for c in stubs)
    group = root.add(Element("g", {"class": "trajectories", "fill": "none", "stroke": "#7a1f99",
                                   "stroke-opacity": 0.5, "stroke-width": 1}))
    for cn, cs in zip(nodes, stubs):
        xs = _scale(list(cn.counts) + [top_n], MARGIN, CANVAS - MARGIN, opts["log"])[:-1]
        ys = CANVAS - _scale(list(cs.counts) + [top_s], MARGIN, CANVAS - MARGIN, opts["log"])[:-1]
        group.add(Element("polyline", {
            "points": points(zip(xs, ys)), "data-root": cn.root,
            "data-node-census": " ".join(map(str, cn.counts)),
            "data-stub-census": " ".join(map(str, cs.counts)),
        }))
    return {}


def _np(g: CoreGraph, opts: dict, root: Element) -> dict:
    b = bmatrix(g).counts
    rows, cols = b.shape
    size = (CANVAS - 2 * MARGIN) / max(rows, cols)
    top = float(b.max())
    group = root.add(Element("g", {"class": "cells"}))
    for h, k in zip(*np.nonzero(b)):
        value = int(b[h, k])
        group.add(Element("rect", {
            "x": MARGIN + int(k) * size, "y": MARGIN + int(h) * size, "width": size, "height": size,
            "fill": _heat(value, top, opts["log"]),
            "data-h": int(h), "data-k": int(k), "data-value": value,
        }))
    return {"rows": rows, "cols": cols}


def _gt(g: CoreGraph, opts: dict, root: Element) -> dict:
    dec = kcore(g)
    levels = sorted(dec.shells)
    core = dec.core_number
    top = levels[-1]
    # bubble tree: each component at level k sits inside the level-(k-1) component containing it
    bubbles: list[dict] = []
    index: dict[tuple[int, frozenset], int] = {}
    for depth, k in enumerate(levels):
        for comp in dec.core_components[k]:
            parent = None
            if depth:
                prev = levels[depth - 1]
                parent = next(index[(prev, c)] for c in dec.core_components[prev] if comp <= c)
            index[(k, comp)] = len(bubbles)
            bubbles.append({"level": k, "nodes": comp, "parent": parent, "children": [],
                            "members": sum(1 for v in comp if core[v] == k)})
            if parent is not None:
                bubbles[parent]["children"].append(index[(k, comp)])

    n = g.node_count
    full = CANVAS / 2 - MARGIN
    for b in bubbles:
        b["r"] = full * math.sqrt(len(b["nodes"]) / n)
    # place children: a single child shares its parent's centre, several are spread on a ring
    for i, b in enumerate(bubbles):
        if b["parent"] is None:
            b["cx"] = b["cy"] = CANVAS / 2
        kids = b["children"]
        if len(kids) == 1:
            c = bubbles[kids[0]]
            c["cx"], c["cy"] = b["cx"], b["cy"]
            c["r"] = min(c["r"], 0.9 * b["r"])
        elif kids:
            m = len(kids)
            fit = b["r"] * math.sin(math.pi / m) / (1 + math.sin(math.pi / m))
            for j, ci in enumerate(kids):
                c = bubbles[ci]
                c["r"] = min(c["r"], 0.95 * fit)
                angle = 2 * math.pi * j / m - math.pi / 2
                ring = b["r"] - fit
                c["cx"] = b["cx"] + ring * math.cos(angle)
                c["cy"] = b["cy"] + ring * math.sin(angle)
    group = root.add(Element("g", {"class": "bubbles", "stroke": "#ffffff", "stroke-width": 1}))
    for i, b in enumerate(bubbles):
        group.add(Element("circle", {
            "cx": b["cx"], "cy": b["cy"], "r": b["r"], "fill": level_color(b["level"], top),
            "data-bubble": i, "data-level": b["level"], "data-members": b["members"],
            "data-size": len(b["nodes"]), "data-parent": -1 if b["parent"] is None else b["parent"],
        }))
    return {"bubbles": [{"level": b["level"], "members": b["members"], "size": len(b["nodes"]),
                         "parent": b["parent"]} for b in bubbles]}


_VIEWS = {"AM": _am, "NL": _nl, "HC": _hc, "CC": _cc, "NP": _np, "GT": _gt}


def render_view(g: CoreGraph, encoding: str, options: dict | None = None) -> RenderDocument:
    enc = encoding.upper()
    if enc not in _VIEWS:
        raise ValueError(f"unknown encoding {encoding!r}; choose from {ENCODINGS}")
    opts = dict(DEFAULTS[enc])
    for key, value in (options or {}).items():
        if key not in opts:
            raise ValueError(f"encoding {enc} has no option {key!r} (options: {sorted(opts)})")
        opts[key] = value
    if enc == "AM" and opts["seriation"] not in SERIATION_METHODS:
        raise ValueError(f"unknown seriation method {opts['seriation']!r}")
    fp = fingerprint(g)
    root = document(CANVAS, CANVAS, f"{enc} N={g.node_count} E={g.edge_count}")
    root.attrs.update({"data-encoding": enc, "data-fingerprint": fp,
                       "data-params": " ".join(f"{k}={fmt(v)}" for k, v in sorted(opts.items()))})
    _frame(root)
    sidecar = _VIEWS[enc](g, opts, root)
    return RenderDocument(serialize(root), enc, fp, opts, sidecar)

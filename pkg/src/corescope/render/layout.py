"""Seeded force-directed layout (Fruchterman–Reingold), numpy-vectorized."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import CoreGraph

CANVAS = 1000.0
MARGIN = 50.0
DEFAULT_SEED = 20250417
DEFAULT_ITERATIONS = 200


@dataclass(frozen=True, eq=False)
class Layout:
    positions: np.ndarray  # (N, 2) canvas units
    seed: int
    iterations: int
    canvas: float = CANVAS

    def to_record(self) -> dict:
        return {"seed": self.seed, "iterations": self.iterations, "canvas": self.canvas,
                "positions": [[round(float(x), 3), round(float(y), 3)] for x, y in self.positions]}


def _normalize(pos: np.ndarray, canvas: float) -> np.ndarray:
    lo, hi = pos.min(axis=0), pos.max(axis=0)
    span = float((hi - lo).max())
    centre = np.full(2, canvas / 2)
    if span == 0:
        return np.tile(centre, (len(pos), 1))
    scale = (canvas - 2 * MARGIN) / span
    return centre + (pos - (lo + hi) / 2) * scale


def force_layout(g: CoreGraph, seed: int = DEFAULT_SEED, iterations: int = DEFAULT_ITERATIONS,
                 canvas: float = CANVAS) -> Layout:
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    n = g.node_count
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    if n > 1:
        e = np.asarray(g.sorted_edges(), dtype=np.int64)
        k = np.sqrt(1.0 / n)
        temp = 0.1
        cool = temp / (iterations + 1)
        for _ in range(iterations):
            delta = pos[:, None, :] - pos[None, :, :]
            dist = np.maximum(np.sqrt((delta ** 2).sum(axis=-1)), 1e-9)
            np.fill_diagonal(dist, np.inf)
            disp = (delta * (k * k / dist ** 2)[:, :, None]).sum(axis=1)
            d = pos[e[:, 0]] - pos[e[:, 1]]
            length = np.maximum(np.sqrt((d ** 2).sum(axis=1)), 1e-9)
            pull = d * (length / k)[:, None]
            np.add.at(disp, e[:, 0], -pull)
            np.add.at(disp, e[:, 1], pull)
            size = np.maximum(np.sqrt((disp ** 2).sum(axis=1)), 1e-9)
            pos = pos + disp / size[:, None] * np.minimum(size, temp)[:, None]
            temp -= cool
    return Layout(_normalize(pos, canvas), seed, iterations, canvas)

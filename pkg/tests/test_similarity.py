import math

import numpy as np
import pytest
from scipy.spatial.distance import jensenshannon

from corescope.census import bmatrix, census_pair
from corescope.errors import ArityError
from corescope.generators import complete, connected_gnm, cycle, path, petersen, star, with_pendant_path
from corescope.graph import permute_nodes
from corescope.similarity import (Descriptors, census_distance, compare_report, group_graphs, group_matrix,
                                  portrait_divergence, rank_matrix, rank_medoid, similarity_matrix)


def _portrait_reference(g1, g2):
    b1, b2 = bmatrix(g1), bmatrix(g2)
    rows = max(b1.shape[0], b2.shape[0])
    cols = max(b1.shape[1], b2.shape[1])
    p = b1.padded(rows, cols, g1.node_count).ravel().astype(float)
    q = b2.padded(rows, cols, g2.node_count).ravel().astype(float)
    return float(jensenshannon(p / p.sum(), q / q.sum(), base=2))


def _census_reference(g1, g2):
    """Per-hop totals summed over roots, by plain Python loops."""
    def dists(g):
        nodes, stubs = census_pair(g)
        width = 1 + max(c.eccentricity for c in nodes)
        nh, sh = [0] * width, [0] * width
        for c in nodes:
            for h, x in enumerate(c.counts):
                nh[h] += x
        for c in stubs:
            for h, x in enumerate(c.counts):
                sh[h] += x
        n, m = g.node_count, g.edge_count
        return [x / n ** 2 for x in nh], ([x / (2 * n * m) for x in sh] if m else [1.0])
    (a1, s1), (a2, s2) = dists(g1), dists(g2)
    w = max(len(a1), len(a2), len(s1), len(s2))
    pad = lambda v: v + [0.0] * (w - len(v))
    l1 = lambda x, y: sum(abs(p - q) for p, q in zip(pad(x), pad(y)))
    return 0.25 * (l1(a1, a2) + l1(s1, s2))


PAIRS = [(path(10), complete(10)), (path(4), star(3)), (cycle(5), petersen()),
         (connected_gnm(20, 30, 1), connected_gnm(25, 40, 2)), (path(1), path(2))]


@pytest.mark.parametrize("g1,g2", PAIRS)
def test_portrait_matches_scipy_jensenshannon(g1, g2):
    assert math.isclose(portrait_divergence(g1, g2), _portrait_reference(g1, g2), abs_tol=1e-12)


@pytest.mark.parametrize("g1,g2", PAIRS)
def test_census_distance_matches_loop_reference(g1, g2):
    assert math.isclose(census_distance(g1, g2), _census_reference(g1, g2), abs_tol=1e-12)


@pytest.mark.parametrize("fn", [portrait_divergence, census_distance])
def test_metric_axioms(fn, small_corpus):
    gs = small_corpus[:40]
    for a in gs:
        assert fn(a, a) == 0
        for b in gs:
            d = fn(a, b)
            assert d >= 0 and d == fn(b, a) and d <= 1


@pytest.mark.parametrize("fn", [portrait_divergence, census_distance])
def test_isomorphic_inputs_have_zero_distance(fn):
    rng = np.random.default_rng(4)
    for seed in range(5):
        g = connected_gnm(18, 30, seed)
        h = permute_nodes(g, rng.permutation(18).tolist())
        assert fn(g, h) == 0


def test_examples():
    assert portrait_divergence(path(10), complete(10)) > 0
    assert census_distance(cycle(6), permute_nodes(cycle(6), [3, 1, 5, 0, 2, 4])) == 0
    assert census_distance(path(4), star(3)) > 0


def test_compare_identical():
    r = compare_report(petersen(), permute_nodes(petersen(), list(range(9, -1, -1))))
    assert r.verdict == "indistinguishable-by-descriptors"
    assert r.portrait_divergence == 0 and r.census_distance == 0 and r.edge_delta == 0


def test_compare_path_vs_cycle():
    r = compare_report(path(4), cycle(4))
    assert r.girth == (None, 4) and r.edge_delta == 1 and r.verdict == "different"


def test_compare_tree_plus_edge():
    tree = path(6)
    r = compare_report(tree, from_tree_plus_edge(tree))
    assert r.edge_delta == 1 and r.girth[0] is None and r.girth[1] is not None


def from_tree_plus_edge(tree):
    from corescope.graph import CoreGraph
    return CoreGraph(tree.node_count, tree.edge_list + ((0, 5),))


def test_matrix_examples():
    g = petersen()
    assert not similarity_matrix([g, g, g]).distances.any()
    for metric in ("portrait", "census"):
        m = similarity_matrix([path(10), path(10), complete(10)], metric)
        d = m.distances
        assert d[0, 1] == 0 < d[0, 2]
        assert (d == d.T).all() and not np.diag(d).any()


def test_matrix_needs_two_graphs():
    with pytest.raises(ArityError):
        similarity_matrix([path(3)])


def test_grouping_examples():
    gs = [path(10), path(10), complete(10)]
    for metric in ("portrait", "census"):
        assert group_graphs(gs, metric).groups() == [[0, 1], [2]]
    assert group_graphs([cycle(5)] * 3).groups() == [[0, 1, 2]]
    with pytest.raises(ArityError):
        group_graphs([path(3), path(4)])


def test_grouping_tie_break_lowest_pair():
    d = np.array([[0, 1, 1, 5], [1, 0, 1, 5], [1, 1, 0, 5], [5, 5, 5, 0]], dtype=float)
    from corescope.similarity import SimilarityMatrix
    gr = group_matrix(SimilarityMatrix("x", d), link_threshold=1.0)
    assert gr.linkage[0].left == (0,) and gr.linkage[0].right == (1,)
    assert gr.groups() == [[0, 1, 2], [3]]


def test_ranking():
    g, h = path(8), complete(8)
    r = rank_medoid([g, g, h])
    assert r.medoid in (0, 1) and r.order == (0, 1, 2)
    assert rank_medoid([cycle(5)] * 4).order == (0, 1, 2, 3)
    with pytest.raises(ArityError):
        rank_medoid([g, h])


def test_group_and_rank_depend_only_on_matrix():
    gs = [connected_gnm(12, 14 + i, seed=i) for i in range(6)]
    m = similarity_matrix(gs)
    stored = type(m)(m.metric, np.array(m.distances.tolist()), m.ids)
    assert group_matrix(m, 0.3) == group_matrix(stored, 0.3)
    assert rank_matrix(m) == rank_matrix(stored)
    assert group_graphs(gs, link_threshold=0.3) == group_matrix(stored, 0.3)


def test_descriptors_reusable():
    d = Descriptors.of(petersen())
    assert portrait_divergence(d, petersen()) == 0
    assert census_distance(d, d) == 0


def test_large_collection_ranking_completes():
    gs = [connected_gnm(10 + i % 7, 16 + i % 11, seed=i) for i in range(81)]
    r = rank_medoid(gs, "census")
    assert sorted(r.order) == list(range(81))

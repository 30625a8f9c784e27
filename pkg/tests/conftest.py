import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corescope.canonical import enumerate_connected  # noqa: E402

CORPUS_MAX_N = 7


@pytest.fixture(scope="session")
def corpus():
    """Every connected graph on 1..7 nodes, one per isomorphism class."""
    graphs = []
    for n in range(1, CORPUS_MAX_N + 1):
        graphs.extend(enumerate_connected(n).graphs())
    return graphs


@pytest.fixture(scope="session")
def small_corpus(corpus):
    return [g for g in corpus if g.node_count <= 5]

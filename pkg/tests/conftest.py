"""Shared fixtures: the small-graph corpus and seeded random graphs."""

from __future__ import annotations

import numpy as np
import pytest

from ramalift import Graph, biclique, complete_bipartite, cycle, path, star


def build_corpus() -> list[tuple[str, Graph]]:
    """Ten named graphs with at most 10 edges each, used by the oracle and
    matching-polynomial checks."""
    return [
        ("P2", path(2)),
        ("P3", path(3)),
        ("P4", path(4)),
        ("P5", path(5)),
        ("C4", cycle(4)),
        ("C6", cycle(6)),
        ("K22", biclique(2, 2)),
        ("K23", biclique(2, 3)),
        ("K33", complete_bipartite(3)),
        ("S4", star(4)),
    ]


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def regular_corpus(corpus):
    """The d-regular members: C4, C6 (d=2), K22 (d=2), K33 (d=3), P2 (d=1)."""
    from ramalift import validate

    out = []
    for name, g in corpus:
        rep = validate(g)
        if rep.is_regular:
            out.append((name, g, rep.degree))
    return out


def random_graph(rng: np.random.Generator, max_n: int = 8) -> Graph:
    """Seeded Erdos-Renyi graph on 2..max_n vertices with at least one edge."""
    n = int(rng.integers(2, max_n + 1))
    edges = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if rng.random() < 0.5
    ]
    if not edges:
        edges = [(1, 2)]
    return Graph(n, edges)

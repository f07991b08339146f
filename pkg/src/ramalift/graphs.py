"""Simple undirected graphs with a canonical edge order.

Vertices are 1-based integers 1..n.  Every edge is stored as an oriented
pair (u, v) with u < v, and the edge list is kept sorted lexicographically,
so the j-th edge is well defined across runs.  Shift assignments elsewhere
in the package index edges by this order.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass

import numpy as np


class GraphFormatError(ValueError):
    """Raised when a graph file or JSON object is malformed."""


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices 1..n.

    ``edges`` is a lexicographically sorted tuple of (u, v) pairs with
    u < v.  ``bipartition`` is an optional pair of vertex classes; when
    present, every edge must cross the two classes.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    bipartition: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __init__(self, n, edges, bipartition=None):
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {n}")
        canon = []
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u},{v}) out of range 1..{n}")
            canon.append((u, v) if u < v else (v, u))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {a}")
        if bipartition is not None:
            left, right = (tuple(sorted(c)) for c in bipartition)
            seen = set(left) | set(right)
            if len(left) + len(right) != n or seen != set(range(1, n + 1)):
                raise ValueError("bipartition classes must partition 1..n")
            left_set = set(left)
            for u, v in canon:
                if (u in left_set) == (v in left_set):
                    raise ValueError(f"edge ({u},{v}) does not cross the bipartition")
            if left and right and right[0] < left[0]:
                left, right = right, left
            bipartition = (left, right)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "bipartition", bipartition)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[set[int]]:
        """Adjacency sets indexed 1..n (index 0 unused)."""
        adj = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u - 1, v - 1] = 1.0
            a[v - 1, u - 1] = 1.0
        return a

    def degree_sequence(self) -> list[int]:
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg[1:]


@dataclass(frozen=True)
class RegularityReport:
    """Structural facts recomputed from scratch; nothing trusted from input."""

    is_regular: bool
    degree: int | None
    is_bipartite: bool
    is_connected: bool


def validate(g: Graph) -> RegularityReport:
    """Report regularity, bipartiteness (by 2-coloring) and connectivity."""
    degs = g.degree_sequence()
    is_regular = len(set(degs)) == 1
    degree = degs[0] if is_regular else None

    adj = g.neighbors()
    color = [None] * (g.n + 1)
    is_bipartite = True
    components = 0
    for start in range(1, g.n + 1):
        if color[start] is not None:
            continue
        components += 1
        color[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if color[w] is None:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    is_bipartite = False
    return RegularityReport(
        is_regular=is_regular,
        degree=degree,
        is_bipartite=is_bipartite,
        is_connected=components == 1,
    )


def two_coloring(g: Graph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """A recomputed bipartition, or None if the graph is not bipartite."""
    adj = g.neighbors()
    color = [None] * (g.n + 1)
    for start in range(1, g.n + 1):
        if color[start] is not None:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if color[w] is None:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return None
    left = tuple(v for v in range(1, g.n + 1) if color[v] == 0)
    right = tuple(v for v in range(1, g.n + 1) if color[v] == 1)
    return (left, right)


# ----------------------------------------------------------------------
# Canonical base graphs
# ----------------------------------------------------------------------

def complete_bipartite(d: int) -> Graph:
    """K_{d,d}: classes {1..d} and {d+1..2d}, every cross pair an edge."""
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    return biclique(d, d)


def biclique(a: int, b: int) -> Graph:
    """K_{a,b} with classes {1..a} and {a+1..a+b}."""
    if a < 1 or b < 1:
        raise ValueError("both classes must be nonempty")
    edges = [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)]
    classes = (tuple(range(1, a + 1)), tuple(range(a + 1, a + b + 1)))
    return Graph(a + b, edges, classes)


def path(n: int) -> Graph:
    """Path on n vertices, edges (i, i+1)."""
    if n < 1:
        raise ValueError("path needs >= 1 vertex")
    g = Graph(n, [(i, i + 1) for i in range(1, n)])
    return Graph(g.n, g.edges, two_coloring(g))


def cycle(n: int) -> Graph:
    """Cycle on n >= 3 vertices; bipartition attached when n is even."""
    if n < 3:
        raise ValueError("cycle needs >= 3 vertices")
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    g = Graph(n, edges)
    return Graph(g.n, g.edges, two_coloring(g))


def star(leaves: int) -> Graph:
    """Star K_{1,leaves}: center 1, leaves 2..leaves+1."""
    if leaves < 1:
        raise ValueError("star needs >= 1 leaf")
    return biclique(1, leaves)


# ----------------------------------------------------------------------
# Serialization: JSON object and plain edge-list text
# ----------------------------------------------------------------------

def graph_to_json(g: Graph) -> dict:
    return {
        "n": g.n,
        "edges": [[u, v] for u, v in g.edges],
        "bipartition": [list(c) for c in g.bipartition] if g.bipartition else None,
    }


def graph_from_json(obj: dict) -> Graph:
    try:
        n = int(obj["n"])
        edges = [(int(u), int(v)) for u, v in obj["edges"]]
        bip = obj.get("bipartition")
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"malformed graph object: {exc}") from exc
    if bip is not None:
        bip = tuple(tuple(int(v) for v in c) for c in bip)
        if len(bip) != 2:
            raise GraphFormatError("bipartition must have exactly two classes")
    try:
        return Graph(n, edges, bip)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def graph_to_edgelist(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def graph_from_edgelist(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphFormatError("edge list must start with a 'n m' header line")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(u), int(v)) for u, v in rows[1:]]
    except ValueError as exc:
        raise GraphFormatError(f"malformed edge list: {exc}") from exc
    if len(edges) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(edges)}")
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def load_graph(path_: str) -> Graph:
    """Load a graph file, sniffing JSON vs edge-list text."""
    with open(path_, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc}") from exc
        return graph_from_json(obj)
    return graph_from_edgelist(text)


def save_graph(g: Graph, path_: str, fmt: str = "json") -> None:
    with open(path_, "w", encoding="utf-8") as fh:
        if fmt == "json":
            json.dump(graph_to_json(g), fh, indent=1)
            fh.write("\n")
        elif fmt == "edgelist":
            fh.write(graph_to_edgelist(g))
        else:
            raise ValueError(f"unknown format {fmt!r}")


def graph_hash(g: Graph) -> str:
    """Content digest of the canonical serialization."""
    payload = json.dumps(graph_to_json(g), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()

"""Simple undirected graphs with integer vertex labels.

Small, immutable, and deterministic: vertex and edge orders are always
sorted, so every downstream computation (flows, matrix builds, verdict
JSON) is reproducible run to run.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable


class Graph:
    """Immutable simple undirected graph (no loops, no parallel edges)."""

    __slots__ = ("_vertices", "_edges", "_adj")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        vs = tuple(sorted(set(vertices)))
        vset = set(vs)
        es: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u},{v}) references unknown vertex")
            es.add((u, v) if u < v else (v, u))
        adj: dict[int, set[int]] = {v: set() for v in vs}
        for u, v in es:
            adj[u].add(v)
            adj[v].add(u)
        self._vertices = vs
        self._edges = tuple(sorted(es))
        self._adj = {v: frozenset(nb) for v, nb in adj.items()}

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def min_degree(self) -> int:
        return min(len(nb) for nb in self._adj.values())

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, frozenset())

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {self._vertices[0]}
        queue = deque(seen)
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n

    def without_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            raise ValueError(f"edge ({u},{v}) not in graph")
        key = (u, v) if u < v else (v, u)
        return Graph(self._vertices, (e for e in self._edges if e != key))

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph(self._vertices, self._edges + ((u, v),))

    def induced(self, vertices: Iterable[int]) -> "Graph":
        keep = set(vertices)
        return Graph(keep, ((u, v) for u, v in self._edges if u in keep and v in keep))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._vertices, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def complete_graph(n: int) -> Graph:
    """K_n on vertices 1..n."""
    vs = range(1, n + 1)
    return Graph(vs, ((u, v) for u in vs for v in vs if u < v))


def path_graph(n: int) -> Graph:
    return Graph(range(1, n + 1), ((i, i + 1) for i in range(1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    return Graph(range(1, n + 1), edges)

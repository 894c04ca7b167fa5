"""Vertex connectivity and quasi connectivity via unit-capacity max-flow.

Vertex capacities are enforced by the usual node-splitting reduction:
each capacity-1 vertex v becomes an arc v_in -> v_out, and each
undirected edge becomes a pair of opposite arcs between out/in copies.
Max-flow then counts internally disjoint paths (Menger).

Quasi connectivity of a correspondence graph constrains only the node
side of the bipartition: paths between two patches may revisit patch
vertices but never share a node. Only node vertices are split.
"""

from __future__ import annotations

from collections import deque

from .graphs import Graph
from .model import CorrespondenceGraph

_INF = 1 << 30


class Vacuous:
    """Sentinel for quasi connectivity of a single-patch network.

    The definition quantifies over patch pairs; with one patch it holds
    vacuously for every k, so no single number is faithful.
    """

    _instance: "Vacuous | None" = None

    def __new__(cls) -> "Vacuous":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "VACUOUS"


VACUOUS = Vacuous()


class FlowNetwork:
    """Directed network with integer capacities and residual arcs."""

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.head: list[list[int]] = [[] for _ in range(num_nodes)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_arc(self, u: int, v: int, capacity: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(capacity)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, source: int, sink: int, limit: int | None = None) -> int:
        """BFS augmenting paths; stops early once ``limit`` is reached."""
        if source == sink:
            raise ValueError("source equals sink")
        bound = _INF if limit is None else limit
        flow = 0
        to, cap, head = self.to, self.cap, self.head
        while flow < bound:
            parent_arc = [-1] * self.num_nodes
            parent_arc[source] = -2
            queue = deque([source])
            reached = False
            while queue:
                u = queue.popleft()
                for a in head[u]:
                    v = to[a]
                    if cap[a] > 0 and parent_arc[v] == -1:
                        parent_arc[v] = a
                        if v == sink:
                            reached = True
                            queue.clear()
                            break
                        queue.append(v)
            if not reached:
                break
            # Unit bottleneck is the common case; compute it anyway.
            push = _INF
            v = sink
            while v != source:
                a = parent_arc[v]
                push = min(push, cap[a])
                v = to[a ^ 1]
            v = sink
            while v != source:
                a = parent_arc[v]
                cap[a] -= push
                cap[a ^ 1] += push
                v = to[a ^ 1]
            flow += push
        return flow


def _split_flow(g: Graph, s: int, t: int, limit: int | None) -> int:
    """Max number of internally disjoint s-t paths (s, t non-adjacent)."""
    index = {v: i for i, v in enumerate(g.vertices)}
    net = FlowNetwork(2 * g.n)
    for v, i in index.items():
        net.add_arc(2 * i, 2 * i + 1, _INF if v in (s, t) else 1)
    for u, v in g.edges:
        iu, iv = index[u], index[v]
        net.add_arc(2 * iu + 1, 2 * iv, 1)
        net.add_arc(2 * iv + 1, 2 * iu, 1)
    return net.max_flow(2 * index[s] + 1, 2 * index[t], limit)


def local_connectivity(g: Graph, s: int, t: int, limit: int | None = None) -> int:
    """Menger value for one pair: max independent s-t paths.

    For adjacent s, t the edge itself is one path and the rest live in
    the graph with that edge removed.
    """
    if s == t:
        raise ValueError("vertices must be distinct")
    if g.has_edge(s, t):
        rest = None if limit is None else max(limit - 1, 0)
        return 1 + local_connectivity(g.without_edge(s, t), s, t, rest)
    return _split_flow(g, s, t, limit)


def _pair_family(g: Graph) -> list[tuple[int, int]]:
    """Pairs whose local connectivity minimum equals the global one.

    Fix a minimum-degree vertex a. Every minimum cut either misses a
    (then a is separated from some non-neighbor) or contains a (then two
    of a's neighbors end up in different components, hence non-adjacent).
    """
    a = min(g.vertices, key=lambda v: (g.degree(v), v))
    na = g.neighbors(a)
    pairs = [(a, v) for v in g.vertices if v != a and v not in na]
    nb = sorted(na)
    for i in range(len(nb)):
        for j in range(i + 1, len(nb)):
            if not g.has_edge(nb[i], nb[j]):
                pairs.append((nb[i], nb[j]))
    return pairs


def vertex_connectivity(g: Graph) -> int:
    """Largest k such that g is k-connected (K_n gives n-1)."""
    if g.n < 2:
        raise ValueError("vertex connectivity needs at least 2 vertices")
    if g.is_complete():
        return g.n - 1
    best = g.min_degree()
    for s, t in _pair_family(g):
        best = min(best, _split_flow(g, s, t, limit=best))
        if best == 0:
            break
    return best


def is_k_connected(g: Graph, k: int) -> bool:
    """More than k vertices, and no cut of fewer than k vertices."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if g.n <= k:
        return False
    if k == 0:
        return True
    if g.is_complete():
        return True
    if g.min_degree() < k:
        return False
    for s, t in _pair_family(g):
        if _split_flow(g, s, t, limit=k) < k:
            return False
    return True


# ---------------------------------------------------------------------------
# Quasi connectivity of correspondence graphs
# ---------------------------------------------------------------------------

def s_disjoint_path_count(cg: CorrespondenceGraph, i: int, j: int) -> int:
    """Max number of paths between patches i and j sharing no node vertex.

    Patch vertices are free to repeat across paths; only node vertices
    carry unit capacity.
    """
    m = cg.num_patches
    if not (1 <= i <= m and 1 <= j <= m):
        raise ValueError(f"patch ids must be in 1..{m}")
    if i == j:
        raise ValueError("patch ids must differ")
    # Layout: node k -> (2k-2, 2k-1) in/out pair; patch i -> 2N + i - 1.
    n = cg.num_nodes
    net = FlowNetwork(2 * n + m)
    for k in range(1, n + 1):
        net.add_arc(2 * k - 2, 2 * k - 1, 1)
    for p, patch in enumerate(cg.patches, start=1):
        pnode = 2 * n + p - 1
        for k in sorted(patch):
            net.add_arc(pnode, 2 * k - 2, 1)
            net.add_arc(2 * k - 1, pnode, 1)
    return net.max_flow(2 * n + i - 1, 2 * n + j - 1)


def quasi_connectivity(cg: CorrespondenceGraph) -> int | Vacuous:
    """Min over patch pairs of the S-disjoint path count.

    Returns VACUOUS when fewer than two patches exist.
    """
    m = cg.num_patches
    if m <= 1:
        return VACUOUS
    best: int | None = None
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            count = s_disjoint_path_count(cg, i, j)
            if best is None or count < best:
                best = count
            if best == 0:
                return 0
    assert best is not None
    return best

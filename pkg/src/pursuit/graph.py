"""Immutable undirected simple graphs with bitset adjacency.

Vertices are ``0..n-1``. Adjacency is stored as one Python ``int`` bitset per
vertex (bit ``u`` of ``adj[v]`` is set iff ``uv`` is an edge); the numeric
kernels get CSR arrays derived from the same data.
"""

from __future__ import annotations

import json
import math
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

#: Sentinel stored in distance matrices for unreachable pairs.
INF = int(np.iinfo(np.int32).max)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    return list(_bits(mask))


class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Build with :meth:`from_edges`; instances are never mutated afterwards.
    """

    __slots__ = ("n", "_adj", "_nbrs", "_edges", "labels", "_hash")

    def __init__(self, n: int, adjacency: Sequence[int], labels: Sequence[str] | None = None):
        if n < 0:
            raise DomainError("vertex count must be non-negative")
        if len(adjacency) != n:
            raise DomainError("adjacency length must equal n")
        full = (1 << n) - 1
        for v, m in enumerate(adjacency):
            if m & ~full:
                raise DomainError(f"vertex {v} has a neighbor outside 0..{n - 1}")
            if (m >> v) & 1:
                raise DomainError(f"self-loop at vertex {v}")
            for u in _bits(m):
                if not (adjacency[u] >> v) & 1:
                    raise DomainError(f"adjacency not symmetric for edge {v}-{u}")
        self.n = n
        self._adj = tuple(adjacency)
        self._nbrs = tuple(tuple(_bits(m)) for m in self._adj)
        self._edges = tuple((v, u) for v in range(n) for u in self._nbrs[v] if v < u)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise DomainError("labels must have one entry per vertex")
        self.labels = labels
        self._hash = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None) -> "Graph":
        adj = [0] * n
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj, labels)

    @classmethod
    def from_networkx(cls, nxg) -> "Graph":
        nodes = sorted(nxg.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), [(index[a], index[b]) for a, b in nxg.edges()])

    # -- basic queries ---------------------------------------------------

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def adj_mask(self, v: int) -> int:
        return self._adj[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._nbrs[v]

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._adj[u] >> v) & 1)

    def min_degree(self) -> int:
        return min((len(x) for x in self._nbrs), default=0)

    def max_degree(self) -> int:
        return max((len(x) for x in self._nbrs), default=0)

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise DomainError(f"vertex {v} out of range 0..{self.n - 1}")

    def closed_mask(self, v: int) -> int:
        return self._adj[v] | (1 << v)

    # -- numeric views -----------------------------------------------------

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency as ``(indptr, indices)`` int32 arrays, neighbors sorted."""
        ptr = np.zeros(self.n + 1, dtype=np.int32)
        for v in range(self.n):
            ptr[v + 1] = ptr[v] + len(self._nbrs[v])
        idx = np.fromiter((u for v in range(self.n) for u in self._nbrs[v]), dtype=np.int32, count=int(ptr[-1]))
        return ptr, idx

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self._edges:
            a[u, v] = a[v, u] = True
        return a

    # -- identity ------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self._adj == other._adj

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self._adj))
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        d = {"n": self.n, "edges": [list(e) for e in self._edges]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Graph":
        try:
            n = int(d["n"])
            edges = [tuple(e) for e in d["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed graph JSON: {exc}") from None
        for e in edges:
            if len(e) != 2:
                raise DomainError(f"malformed edge {list(e)}")
        return cls.from_edges(n, edges, d.get("labels"))

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "Graph":
        return cls.from_dict(json.loads(text))


def load_graph(path) -> Graph:
    with open(path) as fh:
        return Graph.loads(fh.read())


def save_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(g.dumps())
        fh.write("\n")


# -- neighborhoods ---------------------------------------------------------------


def closed_neighborhood(g: Graph, S: Iterable[int]) -> frozenset[int]:
    """``N[S]``: ``S`` together with every neighbor of a member of ``S``."""
    m = 0
    for v in S:
        g.check_vertex(v)
        m |= g.closed_mask(v)
    return frozenset(_bits(m))


def open_neighborhood(g: Graph, S: Iterable[int]) -> frozenset[int]:
    S = set(S)
    return closed_neighborhood(g, S) - S


# -- distances -------------------------------------------------------------------


class DistanceMatrix:
    """All-pairs hop counts; ``INF`` marks pairs in different components."""

    __slots__ = ("dist",)

    def __init__(self, dist: np.ndarray):
        self.dist = dist
        self.dist.setflags(write=False)

    def __getitem__(self, uv):
        return int(self.dist[uv])

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def diameter(self) -> int:
        """Largest finite distance (``INF`` if the graph is disconnected)."""
        if self.n == 0:
            return 0
        return int(self.dist.max())

    def ball(self, v: int, radius: int) -> tuple[int, ...]:
        return tuple(int(u) for u in np.flatnonzero(self.dist[v] <= radius))


def bfs_distances(g: Graph, source: int, allowed: int | None = None) -> list[int]:
    """Hop distances from ``source``; ``allowed`` optionally restricts the vertex set (bitset)."""
    if allowed is None:
        allowed = (1 << g.n) - 1
    dist = [INF] * g.n
    if not (allowed >> source) & 1:
        return dist
    dist[source] = 0
    seen = 1 << source
    frontier = 1 << source
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in _bits(frontier):
            nxt |= g.adj_mask(v)
        nxt &= allowed & ~seen
        seen |= nxt
        for v in _bits(nxt):
            dist[v] = d
        frontier = nxt
    return dist


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    d = np.array([bfs_distances(g, s) for s in range(g.n)], dtype=np.int32).reshape(g.n, g.n)
    return DistanceMatrix(d)


def shortest_path(g: Graph, source: int, target: int, allowed: int | None = None) -> list[int] | None:
    """Lexicographically smallest shortest path (vertex list) or ``None``."""
    dist = bfs_distances(g, target, allowed)
    if dist[source] >= INF:
        return None
    path = [source]
    v = source
    while v != target:
        v = min(u for u in g.neighbors(v) if dist[u] == dist[v] - 1)
        path.append(v)
    return path


def girth(g: Graph) -> float:
    """Length of a shortest cycle; ``math.inf`` for forests."""
    best = math.inf
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for u in g.neighbors(v):
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    q.append(u)
                elif parent[v] != u:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


# -- subgraphs and components --------------------------------------------------


def induced_subgraph(g: Graph, S: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph induced by ``S`` plus the old-id -> new-id map (order preserved)."""
    verts = sorted(set(S))
    for v in verts:
        g.check_vertex(v)
    index = {v: i for i, v in enumerate(verts)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    labels = None if g.labels is None else [g.labels[v] for v in verts]
    return Graph.from_edges(len(verts), edges, labels), index


def connected_components(g: Graph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Components (of ``g`` or of ``g[within]``), ordered by smallest vertex."""
    remaining = (1 << g.n) - 1 if within is None else mask_of(within)
    allowed = remaining
    comps = []
    while remaining:
        s = (remaining & -remaining).bit_length() - 1
        seen = 1 << s
        frontier = seen
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= g.adj_mask(v)
            nxt &= allowed & ~seen
            seen |= nxt
            frontier = nxt
        comps.append(frozenset(_bits(seen)))
        remaining &= ~seen
    return comps


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1

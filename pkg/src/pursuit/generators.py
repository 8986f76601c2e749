"""Graph families used as witnesses and reduction sources.

Randomized constructors use ``numpy.random.default_rng(seed)`` (PCG64), so a
given seed reproduces the same graph on every platform numpy supports.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, GenerationError
from .graph import Graph, girth, is_connected

FAMILIES = (
    "path",
    "cycle",
    "complete",
    "grid",
    "toroidal-grid",
    "petersen",
    "projective-incidence",
    "random-gnp",
)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int | None = None


def path(n: int) -> Graph:
    if n < 1:
        raise DomainError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise DomainError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise DomainError("complete graph needs n >= 1")
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise DomainError("grid needs rows, cols >= 1")
    vid = lambda r, c: r * cols + c  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph.from_edges(rows * cols, edges)


def toroidal_grid(rows: int, cols: int) -> Graph:
    """Cartesian product of the cycles ``C_rows`` and ``C_cols``."""
    if rows < 3 or cols < 3:
        raise DomainError("toroidal-grid requires rows >= 3 and cols >= 3")
    vid = lambda r, c: (r % rows) * cols + (c % cols)  # noqa: E731
    edges = set()
    for r in range(rows):
        for c in range(cols):
            for a, b in ((vid(r, c), vid(r, c + 1)), (vid(r, c), vid(r + 1, c))):
                edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(rows * cols, sorted(edges))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q**0.5) + 1))


def _projective_points(q: int) -> list[tuple[int, int, int]]:
    # normalized homogeneous coordinates: first nonzero entry is 1
    pts = []
    for v in itertools.product(range(q), repeat=3):
        if any(v) and v[next(i for i in range(3) if v[i])] == 1:
            pts.append(v)
    return pts


def projective_incidence(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q) for prime ``q``.

    Points are vertices ``0..N-1`` and lines ``N..2N-1`` with ``N = q^2+q+1``.
    """
    if not _is_prime(q):
        raise DomainError(f"projective-incidence needs a prime order, got q={q}")
    pts = _projective_points(q)
    npts = len(pts)
    edges = []
    for i, p in enumerate(pts):
        for j, line in enumerate(pts):
            if (p[0] * line[0] + p[1] * line[1] + p[2] * line[2]) % q == 0:
                edges.append((i, npts + j))
    g = Graph.from_edges(2 * npts, edges)
    # structural self-check: (q+1)-regular, girth 6
    if any(g.degree(v) != q + 1 for v in range(g.n)) or girth(g) != 6:
        raise AssertionError(f"PG(2,{q}) incidence graph failed its structural check")
    return g


def random_connected(nv: int, p: float, seed: int, max_tries: int = 1000) -> Graph:
    """G(n, p) resampled until connected; deterministic per seed."""
    if nv < 1:
        raise DomainError("random_connected needs nv >= 1")
    if not (0 < p <= 1):
        raise DomainError("random_connected needs 0 < p <= 1")
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(nv), 2))
    for _ in range(max_tries):
        keep = rng.random(len(pairs)) < p
        g = Graph.from_edges(nv, [e for e, k in zip(pairs, keep) if k])
        if is_connected(g):
            return g
    raise GenerationError(f"no connected G({nv}, {p}) sample within {max_tries} tries (seed={seed})")


class VertexRole(NamedTuple):
    """Role of a vertex of a subdivision.

    ``kind`` is ``"branch"`` or ``"sub"``. For branching vertices ``edge`` is
    ``-1`` and ``offset`` is 0; for subdividing vertices ``edge`` indexes
    ``base.edges`` and ``offset`` (1..d-1) is the distance from the smaller
    endpoint of that edge along its edge-path.
    """

    kind: str
    edge: int
    offset: int


@dataclass(frozen=True)
class Subdivision:
    base: Graph
    d: int
    graph: Graph
    roles: tuple[VertexRole, ...]

    def path_vertex(self, x: int, y: int, s: int) -> int:
        """Vertex at distance ``s`` from branching vertex ``x`` on the edge-path towards ``y``."""
        if x == y or s == 0:
            return x
        if s == self.d:
            return y
        a, b = min(x, y), max(x, y)
        e = self.edge_index[(a, b)]
        off = s if x == a else self.d - s
        return self.base.n + e * (self.d - 1) + (off - 1)

    def edge_path(self, e: int) -> list[int]:
        a, b = self.base.edges[e]
        return [self.path_vertex(a, b, s) for s in range(self.d + 1)]

    @functools.cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.base.edges)}


def subdivide(g: Graph, d: int) -> Subdivision:
    """Replace every edge by a path of length ``d``.

    Branching vertices keep ids ``0..n-1``; the ``d-1`` subdividing vertices of
    edge ``i`` (in ``g.edges`` order) are appended as ``n + i*(d-1) + j``.
    """
    if d < 1:
        raise DomainError("subdivision length d must be >= 1")
    n, k = g.n, d - 1
    roles = [VertexRole("branch", -1, 0)] * n
    edges = []
    for i, (a, b) in enumerate(g.edges):
        chain = [a] + [n + i * k + j for j in range(k)] + [b]
        edges.extend(zip(chain, chain[1:]))
        roles.extend(VertexRole("sub", i, j + 1) for j in range(k))
    h = Graph.from_edges(n + k * g.m, edges)
    return Subdivision(g, d, h, tuple(roles))


def line_graph(g: Graph) -> tuple[Graph, tuple[tuple[int, int], ...]]:
    """Line graph plus the map vertex-of-L(G) -> edge of ``g``."""
    if g.m == 0:
        raise DomainError("line graph of an edgeless graph is empty")
    es = g.edges
    adj = []
    for i, (a, b) in enumerate(es):
        adj.append([j for j, (c, e) in enumerate(es) if j != i and {a, b} & {c, e}])
    lg = Graph.from_edges(len(es), [(i, j) for i, nb in enumerate(adj) for j in nb if i < j])
    return lg, es


def generate(spec: FamilySpec) -> Graph:
    p = dict(spec.params)
    try:
        if spec.family == "path":
            return path(int(p["n"]))
        if spec.family == "cycle":
            return cycle(int(p["n"]))
        if spec.family == "complete":
            return complete(int(p["n"]))
        if spec.family == "grid":
            return grid(int(p["rows"]), int(p["cols"]))
        if spec.family == "toroidal-grid":
            return toroidal_grid(int(p["rows"]), int(p["cols"]))
        if spec.family == "petersen":
            return petersen()
        if spec.family == "projective-incidence":
            return projective_incidence(int(p["q"]))
        if spec.family == "random-gnp":
            return random_connected(int(p["n"]), float(p["p"]), 0 if spec.seed is None else int(spec.seed))
    except KeyError as exc:
        raise DomainError(f"family {spec.family!r} is missing parameter {exc.args[0]!r}") from None
    raise DomainError(f"unknown family {spec.family!r}; expected one of {', '.join(FAMILIES)}")

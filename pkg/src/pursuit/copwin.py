"""Strategies built from dismantlability and retractions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, DomainError, PolicyFault
from .game import GameConfig, GamePosition, Side
from .graph import INF, Graph, all_pairs_distances, bfs_distances, closed_neighborhood, induced_subgraph, mask_of, shortest_path
from .policy import Policy


@dataclass(frozen=True)
class DismantlingOrder:
    """``order[0]`` is the last survivor; ``dominator[v]`` absorbed ``v`` when it was removed."""

    order: tuple[int, ...]
    dominator: dict = field(default_factory=dict)

    def check(self, g: Graph) -> bool:
        alive = 0
        for i, v in enumerate(self.order):
            alive |= 1 << v
            if i == 0:
                continue
            u = self.dominator[v]
            if (g.closed_mask(v) & alive) & ~(g.closed_mask(u) & alive):
                return False
            if not (alive >> u) & 1 or u == v:
                return False
        return alive == (1 << g.n) - 1


def dismantling_order(g: Graph) -> DismantlingOrder | None:
    """Greedy corner elimination: smallest corner first, smallest dominator."""
    if g.n == 0:
        return None
    alive = (1 << g.n) - 1
    removed = []
    dom = {}
    for _ in range(g.n - 1):
        pick = None
        for v in range(g.n):
            if not (alive >> v) & 1:
                continue
            nv = g.closed_mask(v) & alive
            for u in range(g.n):
                if u != v and (nv >> u) & 1 and not nv & ~(g.closed_mask(u) & alive):
                    pick = (v, u)
                    break
            if pick:
                break
        if pick is None:
            return None
        v, u = pick
        removed.append(v)
        dom[v] = u
        alive &= ~(1 << v)
    last = alive.bit_length() - 1
    return DismantlingOrder(tuple([last] + removed[::-1]), dom)


class CopWinPolicy(Policy):
    """One cop chasing the robber's images under the fold maps.

    ``f_j`` sends every vertex into ``{v_1..v_j}`` (eliminated vertices go to
    their dominators). The cop always stands on ``f_L(robber)`` for the level
    ``L`` in memory; each move it climbs to the highest level whose image
    it can reach, at least ``L + 1``, so capture takes at most ``n - 1`` moves.
    """

    side = Side.COPS

    def __init__(self, g: Graph, d: DismantlingOrder):
        super().__init__(g, GameConfig(1))
        if not d.check(g):
            raise ContractViolation("dismantling order is not valid for this graph", d)
        self.d = d
        n = g.n
        fold = np.zeros((n + 1, n), dtype=np.int64)
        fold[n] = np.arange(n)
        for j in range(n, 1, -1):
            vj = d.order[j - 1]
            row = fold[j].copy()
            row[row == vj] = d.dominator[vj]
            fold[j - 1] = row
        self.fold = fold

    def place(self, cops=None):
        return (self.d.order[0],), 1

    def step(self, pos, level):
        c, r = pos.cops[0], pos.robber
        if c == r:
            return (c,), level
        reach = self.g.closed_mask(c)
        for j in range(self.g.n, level, -1):
            img = int(self.fold[j, r])
            if (reach >> img) & 1:
                return (img,), j
        raise PolicyFault(f"fold invariant lost at level {level} (cop {c}, robber {r})")

    def annotate(self, pos, level):
        return {"level": level}


def copwin_policy(g: Graph, d: DismantlingOrder | None = None) -> CopWinPolicy:
    if d is None:
        d = dismantling_order(g)
        if d is None:
            raise DomainError("graph is not dismantlable")
    return CopWinPolicy(g, d)


# -- retractions -------------------------------------------------------------------


@dataclass(frozen=True)
class Retraction:
    """``f`` maps every vertex of ``domain`` into ``image``; ``path`` lists a path image in order."""

    host: Graph
    image: tuple[int, ...]
    f: dict
    path: tuple[int, ...] | None = None

    @property
    def domain(self) -> frozenset:
        return frozenset(self.f)

    def __call__(self, v: int) -> int:
        try:
            return self.f[v]
        except KeyError:
            raise ContractViolation(f"vertex {v} lies outside the retraction's domain", v) from None

    def violations(self) -> list:
        bad = [("moved", v) for v in self.image if self.f.get(v) != v]
        for u, v in self.host.edges:
            if u in self.f and v in self.f:
                a, b = self.f[u], self.f[v]
                if a != b and not self.host.has_edge(a, b):
                    bad.append(("edge", (u, v)))
        return bad


def path_retraction(g: Graph, P, D) -> Retraction:
    """Clamped-distance retraction of ``G[P u D]`` onto the path ``P``."""
    P = [int(p) for p in P]
    if not P:
        raise DomainError("path must be non-empty")
    if len(set(P)) != len(P):
        raise DomainError("path repeats a vertex")
    for a, b in zip(P, P[1:]):
        if not g.has_edge(a, b):
            raise DomainError(f"{a}-{b} is not an edge, so P is not a path")
    dom = set(P) | set(int(v) for v in D)
    for v in dom:
        g.check_vertex(v)
    allowed = mask_of(dom)
    dist = bfs_distances(g, P[0], allowed)
    for i, p in enumerate(P):
        if dist[p] < i:
            short = shortest_path(g, P[0], p, allowed)
            raise ContractViolation(f"P is not shortest inside G[P u D]: {P[0]} reaches {p} in {dist[p]} < {i} steps", short)
    end = len(P) - 1
    f = {v: P[min(dist[v], end)] for v in dom}
    return Retraction(g, tuple(sorted(P)), f, tuple(P))


@dataclass
class GuardAssignment:
    target: frozenset
    policy: Policy
    setup_bound: int
    region: frozenset | None = None


class RetractGuardPolicy(Policy):
    """Cops of ``inner`` play on H against the robber's image; the catcher then shadows it.

    Memory: ``("walk", None)``, ``("inner", inner_memory)`` or ``("shadow", cop)``.
    """

    side = Side.COPS

    def __init__(self, g: Graph, r: Retraction, inner: Policy, start=None):
        self.H, self.to_h = induced_subgraph(g, r.image)
        super().__init__(g, GameConfig(inner.cfg.k))
        self.r = r
        self.inner = inner
        self.from_h = {b: a for a, b in self.to_h.items()}
        home, self.inner_m0 = inner.place()
        self.home = tuple(self.from_h[c] for c in home)
        self.start = None if start is None else tuple(start)
        self._dist = {}

    def _toward(self, c, goal):
        if goal not in self._dist:
            self._dist[goal] = bfs_distances(self.g, goal)
        dist = self._dist[goal]
        if c == goal:
            return c
        return min(u for u in self.g.neighbors(c) if dist[u] == dist[c] - 1)

    def place(self, cops=None):
        if self.start is None or self.start == self.home:
            return self.home, ("inner", self.inner_m0)
        return self.start, ("walk", None)

    def step(self, pos, memory):
        mode, data = memory
        cops = pos.cops
        if mode == "walk":
            if cops != self.home:
                moved = tuple(self._toward(c, h) for c, h in zip(cops, self.home))
                return moved, (("inner", self.inner_m0) if moved == self.home else memory)
            mode, data = "inner", self.inner_m0
        img = self.r(pos.robber)
        if mode == "inner":
            for i, c in enumerate(cops):
                if c == img:
                    mode, data = "shadow", i
                    break
        if mode == "shadow":
            out = list(cops)
            out[data] = img
            return tuple(out), ("shadow", data)
        hpos = GamePosition(tuple(self.to_h[c] for c in cops), self.to_h[img], Side.COPS)
        move, m2 = self.inner.step(hpos, data)
        move = tuple(self.from_h[c] for c in move)
        for i, c in enumerate(move):
            if c == img:
                return move, ("shadow", i)
        return move, ("inner", m2)

    def encode(self, memory):
        mode, data = memory
        return (mode, self.inner.encode(data)) if mode == "inner" else memory

    def annotate(self, pos, memory):
        return {"mode": memory[0]}


def retract_guard_policy(g: Graph, r: Retraction, inner: Policy, start=None, verify_budget=None) -> GuardAssignment:
    """Guard ``V_H`` with a winning policy on H; raises if ``inner`` does not win."""
    from .simulator import verify_capture

    pol = RetractGuardPolicy(g, r, inner, start)
    verdict = verify_capture(pol.H, inner.cfg, inner, budget=verify_budget)
    if not verdict.valid:
        raise ContractViolation(f"inner policy does not win on H: {verdict.reason}", verdict.trace)
    walk = 0
    if pol.start is not None:
        walk = max(bfs_distances(g, h)[s] for s, h in zip(pol.start, pol.home))
        if walk >= INF:
            raise DomainError("start positions cannot reach the inner placement")
    return GuardAssignment(frozenset(r.image), pol, walk + int(verdict.worst), r.domain)


# -- sheriff and deputies ------------------------------------------------------------

DEPUTY_OFFSETS = (-2, -1, 1, 2)


class PathNeighborhoodGuard(Policy):
    """Sheriff guards P through the retraction; deputies trail at fixed offsets.

    Cop 0 is the sheriff, cop ``1 + i`` holds ``p_{s + offsets[i]}`` (clamped)
    once the formation stands. Any cop adjacent to the robber captures.
    Memory is the phase: ``"gather"``, ``"form"`` or ``"guard"``.
    """

    side = Side.COPS

    def __init__(self, g: Graph, r: Retraction, offsets=DEPUTY_OFFSETS, start=None):
        super().__init__(g, GameConfig(1 + len(offsets)))
        self.r = r
        self.P = r.path
        self.index = {p: i for i, p in enumerate(self.P)}
        self.offsets = tuple(offsets)
        self.start = start
        self.to_p0 = bfs_distances(g, self.P[0])

    def _post(self, i, off):
        return self.P[max(0, min(len(self.P) - 1, i + off))]

    def place(self, cops=None):
        v = self.P[0] if self.start is None else self.start
        return (v,) * self.cfg.k, ("gather" if v != self.P[0] else "form")

    def _capture(self, cops, r):
        for i, c in enumerate(cops):
            if c == r or self.g.has_edge(c, r):
                out = list(cops)
                out[i] = r
                return tuple(out)
        return None

    def _along(self, c, goal):
        i, j = self.index[c], self.index[goal]
        return self.P[i + (j > i) - (j < i)]

    def step(self, pos, phase):
        cops, r = pos.cops, pos.robber
        hit = self._capture(cops, r)
        if hit is not None:
            return hit, phase
        if phase == "gather":
            if any(c != self.P[0] for c in cops):
                d = self.to_p0
                moved = tuple(c if d[c] == 0 else min(u for u in self.g.neighbors(c) if d[u] == d[c] - 1) for c in cops)
                return moved, "gather"
            phase = "form"
        posts = [self._post(0, o) for o in self.offsets]
        if phase == "form":
            if list(cops[1:]) != posts:
                return (cops[0],) + tuple(self._along(c, p) for c, p in zip(cops[1:], posts)), "form"
            phase = "guard"
        if r not in self.r.f:
            raise ContractViolation(f"robber at {r} escaped the confinement region", pos)
        i = self.index[cops[0]]
        j = self.index[self.r(r)]
        i2 = i + (j > i) - (j < i)
        return (self.P[i2],) + tuple(self._post(i2, o) for o in self.offsets), "guard"

    def annotate(self, pos, phase):
        return {"phase": phase}


def guard_path_neighborhood(g: Graph, P, D, start=None, offsets=DEPUTY_OFFSETS) -> GuardAssignment:
    """Sheriff plus deputies guarding ``N[P]`` for a robber confined to ``D``.

    With the default four offsets this is the five-cop guard.
    """
    P = [int(p) for p in P]
    npset = closed_neighborhood(g, P)
    r = path_retraction(g, P, set(D) | npset)
    pol = PathNeighborhoodGuard(g, r, offsets, start)
    dm = all_pairs_distances(g).dist
    diam = int(dm[dm < INF].max()) if g.n else 0
    return GuardAssignment(npset, pol, 2 * diam + len(P), r.domain)


def five_necessary_gadget():
    """Path ``p0..p4`` (0..4), ``q_j`` (5..9) adjacent to ``p_j`` and to a hub ``r`` (10).

    Returns ``(graph, P, D)``. A robber on ``r`` maps to ``p2``; from there
    it jumps to ``q4``, which only ``p4`` dominates.
    """
    edges = [(i, i + 1) for i in range(4)]
    edges += [(j, 5 + j) for j in range(5)]
    edges += [(5 + j, 10) for j in range(5)]
    g = Graph.from_edges(11, edges)
    return g, [0, 1, 2, 3, 4], list(range(11))

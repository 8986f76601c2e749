"""Guard and hunter: two cops on an interval filament graph.

Cop 0 is the guard, cop 1 the hunter. A phase is tied to the guard's
filament ``u`` (``None`` stands for an imaginary filament above everything):
the robber is confined to ``C_u``, the component of the filaments nested in
``u`` that contains it. The hunter walks to the first top filament of
``C_u`` and sweeps right along the top sequence; as soon as the robber is
nested in the hunter's filament the guard joins the hunter there and a new,
strictly smaller phase begins.

Memory is ``(mode, u, C_u, cursor)`` with mode ``"walk"``, ``"hunt"`` or
``"transfer"``.
"""

from __future__ import annotations

from ..game import GameConfig, Side
from ..graph import bfs_distances, connected_components
from ..policy import Policy
from .rep import FilamentRep, top_sequence


class TwoCopPolicy(Policy):
    side = Side.COPS

    def __init__(self, rep: FilamentRep):
        super().__init__(rep.graph, GameConfig(2))
        self.rep = rep
        self._tops = {}
        self._dist = {}
        self._comp = {}

    # -- cached geometry ------------------------------------------------------------

    def tops(self, comp):
        if comp not in self._tops:
            self._tops[comp] = top_sequence(self.rep, comp)
        return self._tops[comp]

    def component(self, u, robber):
        key = (u, robber)
        if key not in self._comp:
            inside = self.rep.nested_in(u)
            comp = next((c for c in connected_components(self.g, inside) if robber in c), frozenset())
            self._comp[key] = comp
        return self._comp[key]

    def _next_hop(self, c, goal):
        if c == goal:
            return c
        if goal not in self._dist:
            self._dist[goal] = bfs_distances(self.g, goal)
        d = self._dist[goal]
        return min(w for w in self.g.neighbors(c) if d[w] == d[c] - 1)

    # -- policy ---------------------------------------------------------------------------

    def place(self, cops=None):
        start = min(range(self.rep.n), key=lambda v: self.rep.interval(v)[0])
        return (start, start), ("walk", None, frozenset(range(self.rep.n)), 0)

    def step(self, pos, memory):
        guard, hunter = pos.cops
        rho = pos.robber
        for i, c in enumerate(pos.cops):
            if c == rho or self.g.has_edge(c, rho):
                out = [guard, hunter]
                out[i] = rho
                return tuple(out), memory
        mode, u, comp, cur = memory
        if mode != "transfer" and rho not in comp:
            raise AssertionError(f"robber at {rho} left its confinement component under guard {u}")
        if mode == "transfer":
            if guard != hunter:
                return (self._next_hop(guard, hunter), hunter), memory
            u = guard
            comp = self.component(u, rho)
            if not comp:
                raise AssertionError(f"robber at {rho} is not nested in the guard's filament {u}")
            mode, cur = "walk", 0
        tops = self.tops(comp)
        if mode == "walk":
            goal = tops[0].vertex
            if hunter != goal:
                h2 = self._next_hop(hunter, goal)
                return (guard, h2), ("walk", u, comp, 0)
            mode = "hunt"
        # hunter stands on tops[cur]
        t = tops[cur].vertex
        if self.rep.nested(rho, t):
            return (self._next_hop(guard, t), hunter), ("transfer", u, comp, cur)
        if self.rep.interval(rho)[1] < tops[cur].mid:
            raise AssertionError(f"robber at {rho} is left of top filament {t} (entry {cur})")
        ahead = [j for j in range(cur + 1, len(tops)) if tops[j].vertex == t or self.g.has_edge(tops[j].vertex, t)]
        if not ahead:
            raise AssertionError(f"robber at {rho} is right of the last top filament {t}")
        j = ahead[-1]
        return (guard, tops[j].vertex), ("hunt", u, comp, j)

    def annotate(self, pos, memory):
        mode, u, comp, cur = memory
        return {"mode": mode, "guard_filament": "sky" if u is None else u, "component": len(comp), "cursor": cur}


def two_cop_policy(rep: FilamentRep) -> TwoCopPolicy:
    return TwoCopPolicy(rep)

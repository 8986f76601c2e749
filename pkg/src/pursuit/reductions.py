"""Subdivision and line-graph machinery, lower bounds, string refutation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import config as _config
from .errors import ContractViolation, DomainError, ResourceError
from .game import GameConfig, GamePosition, Side
from .generators import Subdivision, line_graph, subdivide
from .graph import Graph, bfs_distances, girth, is_connected
from .policy import Policy
from .solver import OptimalCop, analyze, cop_number


@dataclass(frozen=True)
class InequalityReport:
    instance: str
    lhs: int
    mid: int | None
    rhs: int
    holds: bool
    budgets: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"instance": self.instance, "lhs": self.lhs, "mid": self.mid, "rhs": self.rhs, "holds": self.holds, "budgets": self.budgets}

    def __str__(self):
        mid = "?" if self.mid is None else self.mid
        return f"{self.instance}: {self.lhs} <= {mid} <= {self.rhs}  {'holds' if self.holds else 'VIOLATED'}"


def _report(instance, lhs, mid, rhs, budget) -> InequalityReport:
    holds = mid is not None and lhs <= mid <= rhs
    return InequalityReport(instance, lhs, mid, rhs, holds, {"max_states": budget or _config.current().max_states})


def _cn(g, k_max, budget, speed=1):
    res = cop_number(g, k_max, speed, speed, budget=budget)
    return res.value


def check_subdivision_inequality(g: Graph, d: int, budget: int | None = None, base_cn: int | None = None) -> InequalityReport:
    """``cn(g) <= cn(g^(d)) <= cn(g) + 1`` by exact solving."""
    if not is_connected(g):
        raise DomainError("subdivision check needs a connected graph")
    c = base_cn if base_cn is not None else _cn(g, g.n, budget)
    sub = subdivide(g, d).graph
    mid = _cn(sub, c + 1, budget)
    return _report(f"G(n={g.n},m={g.m})^({d})", c, mid, c + 1, budget)


def check_line_graph_inequality(g: Graph, budget: int | None = None, base_cn: int | None = None) -> InequalityReport:
    """``ceil(cn(g)/2) <= cn(L(g)) <= cn(g) + 1``."""
    if not is_connected(g):
        raise DomainError("line-graph check needs a connected graph")
    c = base_cn if base_cn is not None else _cn(g, g.n, budget)
    lg, _ = line_graph(g)
    mid = _cn(lg, c + 1, budget)
    return _report(f"L(G(n={g.n},m={g.m}))", math.ceil(c / 2), mid, c + 1, budget)


def check_dd_inclusion(h: Graph, d: int, budget: int | None = None, base_cn: int | None = None) -> InequalityReport:
    """Speed-``d`` game for both sides needs no more cops: ``1 <= cn_(d,d) <= cn``."""
    c = base_cn if base_cn is not None else _cn(h, h.n, budget)
    mid = _cn(h, c, budget, speed=d)
    return _report(f"({d},{d})-game on G(n={h.n},m={h.m})", 1, mid, c, budget)


def girth_mindeg_lower_bound(g: Graph) -> int:
    """Minimum degree when the girth is at least 5, otherwise the vacuous bound 1."""
    if g.n == 0:
        return 0
    return max(1, g.min_degree()) if girth(g) >= 5 else 1


@dataclass(frozen=True)
class StringVerdict:
    verdict: str  # "NotString" or "Inconclusive"
    bound: int
    note: str = ""

    @property
    def refuted(self) -> bool:
        return self.verdict == "NotString"


STRING_CN_LIMIT = 15


def refute_string(g: Graph, k_budget: int = 4, budget: int | None = None) -> StringVerdict:
    """Certify that ``g`` is not a string graph via ``cn(g) > 15``.

    The girth/degree certificate is the practical route. Exact solving only
    proves anything when it can rule out every ``k <= 15``, which is hopeless
    beyond toy graphs, so the exact attempt is capped at ``k_budget``.
    """
    bound = girth_mindeg_lower_bound(g)
    if bound > STRING_CN_LIMIT:
        return StringVerdict("NotString", bound, f"girth >= 5 and min degree {bound} give cn >= {bound} > {STRING_CN_LIMIT}")
    kk = min(k_budget, STRING_CN_LIMIT)
    if not is_connected(g):
        return StringVerdict("Inconclusive", bound, "graph is disconnected; exact route skipped")
    try:
        res = cop_number(g, kk, budget=budget)
    except ResourceError as exc:
        return StringVerdict("Inconclusive", bound, f"exact route stopped: {exc}")
    if res.value is None:
        if kk >= STRING_CN_LIMIT:
            return StringVerdict("NotString", STRING_CN_LIMIT + 1, f"no k <= {STRING_CN_LIMIT} cops win")
        return StringVerdict("Inconclusive", max(bound, kk + 1), f"cn > {kk}, exact route capped at k={kk}")
    return StringVerdict("Inconclusive", bound, f"cn = {res.value} <= {STRING_CN_LIMIT}")


# -- tracker strategy on subdivisions ----------------------------------------------------


def _loop_erased_append(trail: tuple, v: int) -> tuple:
    if trail and trail[-1] == v:
        return trail
    if v in trail:
        return trail[: trail.index(v) + 1]
    return trail + (v,)


class SubdivisionPolicy(Policy):
    """Regular cops replay ``base`` along edge-paths; the last cop is the tracker.

    While the robber walks from its anchor ``x`` towards a branching neighbor
    ``v`` (offset ``s``), regular cop ``i`` stands ``s`` steps along the
    edge-path from ``x_i`` to ``y_i``, where ``Y`` is the base reply to the
    robber moving to ``v``. Stays and retraces are mirrored automatically
    because positions depend only on ``s``. The robber's first branching
    vertex is not shown to ``base``; its first commitment is reported as the
    placement instead, so regular cops wait at the base placement until then.

    The tracker follows the robber's loop-erased walk, which is the same as
    taking the robber's most recent departure edge from its vertex.

    Memory: ``(anchor, X, base memory, trail)``; ``anchor`` is -1 before the
    robber first stands on a branching vertex, ``trail[0]`` is the tracker's
    vertex once it has joined the walk.
    """

    side = Side.COPS

    def __init__(self, sub: Subdivision, base: Policy):
        super().__init__(sub.graph, GameConfig(base.cfg.k + 1))
        self.sub = sub
        self.base = base
        self._x0, self._m0 = base.place()
        self._dist = {}

    def place(self, cops=None):
        x0 = tuple(self._x0)
        return x0 + (x0[0],), (-1, x0, self._m0, ())

    def encode(self, memory):
        a, X, m, trail = memory
        return (a, X, self.base.encode(m), trail)

    def _commitment(self, anchor, rho):
        """``(v, s)``: target branching vertex and progress, or ``(None, 0)`` at the anchor."""
        role = self.sub.roles[rho]
        if role.kind == "branch":
            return (None, 0) if rho == anchor else (rho, self.sub.d)
        a, b = self.sub.base.edges[role.edge]
        if anchor == a:
            return b, role.offset
        if anchor == b:
            return a, self.sub.d - role.offset
        raise ContractViolation(f"robber at {rho} is on an edge-path not incident to its anchor {anchor}")

    def _reply(self, X, v, m):
        if v in X:
            return X, m
        Y, m2 = self.base.step(GamePosition(X, v, Side.COPS), m)
        return tuple(Y), m2

    def _toward(self, c, goal):
        if goal not in self._dist:
            self._dist[goal] = bfs_distances(self.g, goal)
        dist = self._dist[goal]
        return min(u for u in self.g.neighbors(c) if dist[u] == dist[c] - 1)

    def step(self, pos, memory):
        cops, rho = pos.cops, pos.robber
        for i, c in enumerate(cops):
            if c == rho or self.g.has_edge(c, rho):
                out = list(cops)
                out[i] = rho
                return tuple(out), memory
        anchor, X, m, trail = memory
        trail = _loop_erased_append(trail, rho)

        # regular cops
        if anchor < 0 and self.sub.roles[rho].kind == "branch":
            anchor = rho
        if anchor < 0:
            regular = X
        else:
            v, s = self._commitment(anchor, rho)
            if v is None:
                regular = X
            else:
                Y, m2 = self._reply(X, v, m)
                regular = tuple(self.sub.path_vertex(x, y, s) for x, y in zip(X, Y))
                if s == self.sub.d:
                    anchor, X, m = v, Y, m2

        # tracker
        t = cops[-1]
        if t in trail:
            trail = trail[trail.index(t) :]
        if trail[0] == t:
            t2 = trail[1]
            trail = trail[1:]
        else:
            t2 = self._toward(t, trail[0])
            if t2 in trail:
                trail = trail[trail.index(t2) :]
        return regular + (t2,), (anchor, X, m, trail)

    @staticmethod
    def potential(memory, tracker: int):
        """Tracker-to-robber distance along the trail, or ``None`` before the tracker joins it."""
        trail = memory[3]
        return len(trail) - 1 if trail and trail[0] == tracker else None

    def annotate(self, pos, memory):
        anchor, X, _, trail = memory
        return {"anchor": anchor, "X": ",".join(map(str, X)), "trail": len(trail)}


def subdivision_policy(g: Graph, d: int, base: Policy | None = None, check_base: bool = True, budget: int | None = None) -> SubdivisionPolicy:
    """``cn(g) + 1`` cops on ``g^(d)`` from a winning base policy on ``g``."""
    from .simulator import verify_capture

    if d < 2:
        raise DomainError("subdivision_policy needs d >= 2")
    if base is None:
        res = cop_number(g, g.n, budget=budget, keep=True)
        base = OptimalCop(res.analyses[-1])
    elif check_base:
        verdict = verify_capture(g, base.cfg, base)
        if not verdict.valid:
            raise ContractViolation(f"base policy does not win on g: {verdict.reason}", verdict.trace)
    return SubdivisionPolicy(subdivide(g, d), base)


__all__ = [
    "InequalityReport",
    "StringVerdict",
    "SubdivisionPolicy",
    "analyze",
    "check_dd_inclusion",
    "check_line_graph_inequality",
    "check_subdivision_inequality",
    "girth_mindeg_lower_bound",
    "refute_string",
    "subdivision_policy",
]

"""Rules of the k-cop game with per-side speeds.

A cop may relocate to any vertex within distance ``cop_speed`` (staying is
allowed, cops may share vertices). The robber relocates along a path of
length at most ``robber_speed`` that never enters a cop-occupied vertex.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass

from .errors import ContractViolation, DomainError
from .graph import Graph, all_pairs_distances


class Side(enum.Enum):
    COPS = "cops"
    ROBBER = "robber"

    @property
    def other(self) -> "Side":
        return Side.ROBBER if self is Side.COPS else Side.COPS


@dataclass(frozen=True)
class GameConfig:
    k: int = 1
    cop_speed: int = 1
    robber_speed: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("need at least one cop")
        if self.cop_speed < 1 or self.robber_speed < 1:
            raise DomainError("speeds must be >= 1")

    def with_k(self, k: int) -> "GameConfig":
        return GameConfig(k, self.cop_speed, self.robber_speed)


@dataclass(frozen=True)
class GamePosition:
    """Cops, robber and side to move.

    The solver always works with sorted ``cops``; the simulator keeps the
    policy's own cop order so that strategies can give cops distinct roles.
    """

    cops: tuple[int, ...]
    robber: int
    to_move: Side = Side.COPS

    @property
    def terminal(self) -> bool:
        return self.robber in self.cops

    def canonical(self) -> "GamePosition":
        return GamePosition(tuple(sorted(self.cops)), self.robber, self.to_move)


@functools.lru_cache(maxsize=256)
def cop_ball(g: Graph, speed: int) -> tuple[tuple[int, ...], ...]:
    """For every vertex, the sorted vertices a cop may move to."""
    if speed == 1:
        return tuple(tuple(sorted((v,) + g.neighbors(v))) for v in range(g.n))
    dm = all_pairs_distances(g)
    return tuple(dm.ball(v, speed) for v in range(g.n))


def robber_reach(g: Graph, r: int, cops, speed: int = 1) -> tuple[int, ...]:
    """Sorted destinations of the robber at ``r`` (staying included)."""
    blocked = 0
    for c in cops:
        blocked |= 1 << c
    if speed == 1:
        return tuple(sorted([r] + [u for u in g.neighbors(r) if not (blocked >> u) & 1]))
    seen = {r}
    frontier = [r]
    for _ in range(speed):
        nxt = []
        for v in frontier:
            for u in g.neighbors(v):
                if u not in seen and not (blocked >> u) & 1:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return tuple(sorted(seen))


def legal_moves(g: Graph, cfg: GameConfig, pos: GamePosition) -> list[GamePosition]:
    """Distinct canonical successors of a non-terminal position, sorted."""
    if pos.terminal:
        raise ContractViolation("no moves from a terminal position", pos)
    if len(pos.cops) != cfg.k:
        raise DomainError(f"position has {len(pos.cops)} cops, config expects {cfg.k}")
    if pos.to_move is Side.COPS:
        balls = cop_ball(g, cfg.cop_speed)
        succ = {tuple(sorted(c)) for c in itertools.product(*(balls[c] for c in pos.cops))}
        return [GamePosition(c, pos.robber, Side.ROBBER) for c in sorted(succ)]
    reach = robber_reach(g, pos.robber, pos.cops, cfg.robber_speed)
    cops = tuple(sorted(pos.cops))
    return [GamePosition(cops, r, Side.COPS) for r in reach]


def cops_move_legal(g: Graph, speed: int, before, after) -> bool:
    balls = cop_ball(g, speed)
    return len(before) == len(after) and all(b in balls[a] for a, b in zip(before, after))

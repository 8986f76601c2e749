"""Deterministic strategies with finite memory.

A policy is bound to one graph. Cop policies place first; robber policies
place after seeing the cops. ``step`` maps ``(position, memory)`` to
``(move, memory')`` where a cop move is the tuple of new cop vertices (in the
policy's own cop order) and a robber move is a vertex.

Memory values must be hashable; ``encode`` returns the canonical key used
when the verifier enumerates ``position x memory`` product states.
"""

from __future__ import annotations

import numpy as np

from .game import GameConfig, GamePosition, Side, robber_reach
from .graph import Graph


class Policy:
    side: Side = Side.COPS
    memory_init = None

    def __init__(self, g: Graph, cfg: GameConfig):
        self.g = g
        self.cfg = cfg

    def place(self, cops=None):
        """Cop policies: return ``(cops, memory)``. Robber policies: ``(vertex, memory)``."""
        raise NotImplementedError

    def step(self, pos: GamePosition, memory):
        raise NotImplementedError

    def encode(self, memory):
        return memory

    def annotate(self, pos: GamePosition, memory) -> dict:
        """Free-form per-turn labels recorded in traces."""
        return {}


class StayRobber(Policy):
    """Places on a fixed (or the first safe) vertex and never moves."""

    side = Side.ROBBER

    def __init__(self, g, cfg, vertex: int | None = None):
        super().__init__(g, cfg)
        self.vertex = vertex

    def place(self, cops=None):
        if self.vertex is not None:
            return self.vertex, None
        taken = set(cops or ())
        for v in range(self.g.n):
            if v not in taken and not any(self.g.has_edge(v, c) for c in taken):
                return v, None
        return min(set(range(self.g.n)) - taken, default=0), None

    def step(self, pos, memory):
        return pos.robber, memory


class RandomRobber(Policy):
    """Uniformly random legal robber; the RNG state lives outside ``memory``.

    Only for simulation. It is not memory-enumerable, so the verifiers do
    not accept it; they enumerate all robber behaviors themselves.
    """

    side = Side.ROBBER

    def __init__(self, g, cfg, seed: int = 0, avoid_cops: bool = True):
        super().__init__(g, cfg)
        self.rng = np.random.default_rng(seed)
        self.avoid_cops = avoid_cops

    def _safe(self, options, cops):
        if not self.avoid_cops:
            return list(options)
        safe = [v for v in options if not any(self.g.has_edge(v, c) for c in cops)]
        return safe or list(options)

    def place(self, cops=None):
        cops = tuple(cops or ())
        options = self._safe([v for v in range(self.g.n) if v not in cops], cops) or list(range(self.g.n))
        return int(options[self.rng.integers(len(options))]), None

    def step(self, pos, memory):
        options = self._safe(robber_reach(self.g, pos.robber, pos.cops, self.cfg.robber_speed), pos.cops)
        return int(options[self.rng.integers(len(options))]), memory


class ScriptedRobber(Policy):
    """Replays a fixed vertex sequence, then stays. Memory is the script index."""

    side = Side.ROBBER

    def __init__(self, g, cfg, script):
        super().__init__(g, cfg)
        self.script = tuple(script)

    def place(self, cops=None):
        return self.script[0], 1

    def step(self, pos, memory):
        if memory < len(self.script):
            return self.script[memory], memory + 1
        return pos.robber, memory

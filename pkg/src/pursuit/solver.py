"""Exact analysis of the k-cop game by retrograde search.

Values count cop moves until capture under optimal play; ``INF`` marks
positions from which the robber escapes forever.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from . import _retrograde as rk
from . import config as _config
from ._accel import HAVE_NUMBA
from .errors import DomainError, ResourceError
from .game import GameConfig, GamePosition, Side, cop_ball, legal_moves, robber_reach
from .graph import INF, Graph, all_pairs_distances, is_connected
from .policy import Policy

log = logging.getLogger(__name__)

__all__ = [
    "GameAnalysis",
    "CopNumber",
    "analyze",
    "cop_number",
    "legal_moves",
    "optimal_policies",
    "OptimalCop",
    "OptimalRobber",
]


def _check_budget(n: int, k: int, budget: int | None) -> int:
    limit = _config.current().max_states if budget is None else budget
    count = rk.state_count(n, k)
    if count > limit:
        raise ResourceError(
            f"game with n={n}, k={k} has {count} states, above the budget of {limit} "
            "(raise PURSUIT_BUDGET_STATES or --max-states)",
            count=count,
            limit=limit,
        )
    return count


class GameAnalysis:
    """Value table of a solved game; immutable once built."""

    def __init__(self, g: Graph, cfg: GameConfig, values: np.ndarray, ms: np.ndarray, binom: np.ndarray, backend: str):
        self.graph = g
        self.config = cfg
        self.backend = backend
        v = values.astype(np.int32, copy=True)
        v[v < 0] = INF
        v.setflags(write=False)
        self.values = v
        self.multisets = ms
        self._binom = binom
        n = g.n
        cop_side = v[0::2].reshape(ms.shape[0], n)
        # robber answers a placement by maximizing the cops-to-move value
        self.placement_values = cop_side.max(axis=1)
        best = int(self.placement_values.min())
        if best < INF:
            cands = ms[self.placement_values == best]
            self.witness: tuple[int, ...] | None = min(tuple(int(x) for x in row) for row in cands)
            self.witness_value: int | None = best
        else:
            self.witness = None
            self.witness_value = None

    # -- lookups -----------------------------------------------------------------

    @property
    def state_count(self) -> int:
        return int(self.values.size)

    @property
    def cops_win(self) -> bool:
        return self.witness is not None

    @property
    def cop_number_witness(self):
        return self.witness

    @property
    def max_value(self) -> int:
        finite = self.values[self.values < INF]
        return int(finite.max()) if finite.size else 0

    def state_id(self, pos: GamePosition) -> int:
        cops = sorted(pos.cops)
        if len(cops) != self.config.k:
            raise DomainError(f"expected {self.config.k} cops, got {len(cops)}")
        for c in cops + [pos.robber]:
            self.graph.check_vertex(c)
        a = rk.rank_tuple(cops, self._binom)
        return (a * self.graph.n + pos.robber) * 2 + (0 if pos.to_move is Side.COPS else 1)

    def value(self, pos: GamePosition) -> int:
        return int(self.values[self.state_id(pos)])

    def win(self, pos: GamePosition) -> bool:
        return self.value(pos) < INF

    def placement_value(self, cops) -> int:
        a = rk.rank_tuple(sorted(cops), self._binom)
        return int(self.placement_values[a])

    def summary(self) -> dict:
        return {
            "k": self.config.k,
            "cop_speed": self.config.cop_speed,
            "robber_speed": self.config.robber_speed,
            "cops_win": self.cops_win,
            "witness": list(self.witness) if self.witness else None,
            "witness_value": self.witness_value,
            "state_count": self.state_count,
            "max_value": self.max_value,
        }


def _ball_csr(g: Graph, speed: int):
    balls = cop_ball(g, speed)
    ptr = np.zeros(g.n + 1, dtype=np.int32)
    for v, b in enumerate(balls):
        ptr[v + 1] = ptr[v] + len(b)
    idx = np.array([u for b in balls for u in b], dtype=np.int32)
    return ptr, idx


def analyze(g: Graph, cfg: GameConfig, budget: int | None = None, backend: str | None = None) -> GameAnalysis:
    """Solve the game exactly. ``backend`` is ``"numba"``, ``"numpy"`` or ``None`` (auto)."""
    if not is_connected(g):
        raise DomainError("the game is only analyzed on connected graphs")
    _check_budget(g.n, cfg.k, budget)
    if backend is None:
        backend = "numba" if HAVE_NUMBA else "numpy"
    n, k = g.n, cfg.k
    binom = rk.binom_table(n, k)
    ms = rk.multisets(n, k, binom)
    balls = _ball_csr(g, cfg.cop_speed)
    if backend == "numba":
        vals = rk.retrograde_numba(n, k, ms, binom, balls, g.csr(), cfg.robber_speed)
    elif backend == "numpy":
        vals = rk.retrograde_numpy(n, k, ms, binom, balls, g.adjacency_matrix(), cfg.robber_speed)
    else:
        raise DomainError(f"unknown backend {backend!r}")
    log.debug("solved n=%d k=%d states=%d backend=%s", n, k, vals.size, backend)
    return GameAnalysis(g, cfg, vals, ms, binom, backend)


@dataclass(frozen=True)
class CopNumber:
    """``value`` is the cop number, or ``None`` when it exceeds ``k_max``."""

    value: int | None
    k_max: int
    analyses: tuple = ()

    @property
    def exceeds(self) -> bool:
        return self.value is None

    def __str__(self):
        return f"exceeds {self.k_max}" if self.value is None else str(self.value)


def cop_number(
    g: Graph,
    k_max: int,
    cop_speed: int = 1,
    robber_speed: int = 1,
    budget: int | None = None,
    keep: bool = False,
) -> CopNumber:
    """Least k <= k_max whose analysis has a winning placement."""
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    kept = []
    for k in range(1, k_max + 1):
        a = analyze(g, GameConfig(k, cop_speed, robber_speed), budget=budget)
        if keep:
            kept.append(a)
        if a.cops_win:
            return CopNumber(k, k_max, tuple(kept))
    return CopNumber(None, k_max, tuple(kept))


# -- extracted policies ----------------------------------------------------------


class OptimalCop(Policy):
    """Value-greedy cops. Cop order is kept; ties prefer the smallest canonical successor."""

    side = Side.COPS

    def __init__(self, analysis: GameAnalysis):
        super().__init__(analysis.graph, analysis.config)
        self.analysis = analysis
        self._dist = None

    def place(self, cops=None):
        a = self.analysis
        if a.witness is not None:
            return a.witness, None
        # no winning placement: the best the cops can do is the first multiset
        return tuple(int(x) for x in a.multisets[int(np.argmin(a.placement_values))]), None

    def step(self, pos: GamePosition, memory):
        a = self.analysis
        balls = cop_ball(self.g, self.cfg.cop_speed)
        best_key, best = None, None
        for move in itertools.product(*(balls[c] for c in pos.cops)):
            canon = tuple(sorted(move))
            key = (a.value(GamePosition(canon, pos.robber, Side.ROBBER)), canon)
            if best_key is None or key < best_key:
                best_key, best = key, move
        if best_key[0] >= INF:
            # losing anyway: close in on the robber
            if self._dist is None:
                self._dist = all_pairs_distances(self.g)
            dm = self._dist
            best = min(
                itertools.product(*(balls[c] for c in pos.cops)),
                key=lambda m: (sum(dm[c, pos.robber] for c in m), tuple(sorted(m)), m),
            )
        return tuple(best), memory


class OptimalRobber(Policy):
    """Optimal evader: maximize the remaining value, ties to the smallest vertex."""

    side = Side.ROBBER

    def __init__(self, analysis: GameAnalysis):
        super().__init__(analysis.graph, analysis.config)
        self.analysis = analysis

    def place(self, cops=None):
        canon = tuple(sorted(cops))
        vals = [self.analysis.value(GamePosition(canon, r, Side.COPS)) for r in range(self.g.n)]
        best = max(vals)
        return vals.index(best), None

    def step(self, pos: GamePosition, memory):
        canon = tuple(sorted(pos.cops))
        options = robber_reach(self.g, pos.robber, canon, self.cfg.robber_speed)
        best_r, best_v = None, -1
        for r in options:
            v = self.analysis.value(GamePosition(canon, r, Side.COPS))
            if v > best_v:
                best_r, best_v = r, v
        return best_r, memory


def optimal_policies(a: GameAnalysis) -> tuple[OptimalCop, OptimalRobber]:
    return OptimalCop(a), OptimalRobber(a)

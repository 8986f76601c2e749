"""Referee, traces and exhaustive verification over position x memory.

Cop tuples keep the policy's own order throughout (cops may have roles);
only the solver canonicalizes.
"""

from __future__ import annotations

import json
import time
from collections import deque
from dataclasses import dataclass, field

from . import config as _config
from .errors import ContractViolation, DomainError, PolicyFault, ResourceError
from .game import GameConfig, GamePosition, Side, cops_move_legal, robber_reach
from .graph import INF, Graph

TRACE_SCHEMA = "pursuit.trace/1"


@dataclass
class Trace:
    graph: Graph
    config: GameConfig
    cop_placement: tuple
    robber_placement: int
    moves: list = field(default_factory=list)
    annotations: list = field(default_factory=list)
    captured: bool = False
    turn: int = 0
    horizon: int | None = None

    @property
    def outcome(self) -> str:
        return f"captured at turn {self.turn}" if self.captured else f"survived {self.turn} turns"

    def positions(self):
        """Yield every cops-to-move position of the play, in order."""
        cops, r = tuple(self.cop_placement), self.robber_placement
        yield GamePosition(cops, r, Side.COPS)
        for mv in self.moves:
            if mv[0] == "cops":
                cops = tuple(mv[1])
            else:
                r = mv[1]
                yield GamePosition(cops, r, Side.COPS)

    def to_dict(self) -> dict:
        return {
            "schema": TRACE_SCHEMA,
            "graph": self.graph.to_dict(),
            "config": {"k": self.config.k, "cop_speed": self.config.cop_speed, "robber_speed": self.config.robber_speed},
            "cop_placement": list(self.cop_placement),
            "robber_placement": self.robber_placement,
            "moves": [{"side": s, "to": list(v) if s == "cops" else v} for s, v in self.moves],
            "annotations": self.annotations,
            "outcome": {"captured": self.captured, "turn": self.turn, "horizon": self.horizon},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Trace":
        if d.get("schema") != TRACE_SCHEMA:
            raise DomainError(f"unsupported trace schema {d.get('schema')!r}")
        c = d["config"]
        moves = [(m["side"], tuple(m["to"]) if m["side"] == "cops" else int(m["to"])) for m in d["moves"]]
        out = d["outcome"]
        return cls(
            Graph.from_dict(d["graph"]),
            GameConfig(c["k"], c["cop_speed"], c["robber_speed"]),
            tuple(d["cop_placement"]),
            int(d["robber_placement"]),
            moves,
            list(d.get("annotations", [])),
            bool(out["captured"]),
            int(out["turn"]),
            out.get("horizon"),
        )

    @classmethod
    def loads(cls, text: str) -> "Trace":
        return cls.from_dict(json.loads(text))


def _check_cops(g: Graph, cfg: GameConfig, cops, turn) -> tuple:
    cops = tuple(int(c) for c in cops)
    if len(cops) != cfg.k:
        raise PolicyFault(f"turn {turn}: cop policy produced {len(cops)} cops, expected {cfg.k}", turn)
    for c in cops:
        if not 0 <= c < g.n:
            raise PolicyFault(f"turn {turn}: cop vertex {c} out of range", turn)
    return cops


def play(g: Graph, cfg: GameConfig, cop_policy, robber_policy, horizon: int) -> Trace:
    """Run one game; ``turn`` counts cop moves."""
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    if cop_policy.side is not Side.COPS or robber_policy.side is not Side.ROBBER:
        raise DomainError("policy sides do not match their roles")
    cops, cmem = cop_policy.place()
    cops = _check_cops(g, cfg, cops, 0)
    r, rmem = robber_policy.place(cops)
    if not 0 <= r < g.n:
        raise PolicyFault(f"turn 0: robber placement {r} out of range", 0)
    tr = Trace(g, cfg, cops, int(r), horizon=horizon)
    if r in cops:
        tr.captured = True
        return tr
    turn = 0
    while turn < horizon:
        pos = GamePosition(cops, r, Side.COPS)
        note = cop_policy.annotate(pos, cmem)
        move, cmem = cop_policy.step(pos, cmem)
        turn += 1
        move = _check_cops(g, cfg, move, turn)
        if not cops_move_legal(g, cfg.cop_speed, cops, move):
            raise PolicyFault(f"turn {turn}: illegal cop move {cops} -> {move}", turn)
        cops = move
        tr.moves.append(("cops", cops))
        tr.annotations.append({str(a): str(b) for a, b in note.items()})
        tr.turn = turn
        if r in cops:
            tr.captured = True
            return tr
        nr, rmem = robber_policy.step(GamePosition(cops, r, Side.ROBBER), rmem)
        if nr not in robber_reach(g, r, cops, cfg.robber_speed):
            raise PolicyFault(f"turn {turn}: illegal robber move {r} -> {nr}", turn)
        r = int(nr)
        tr.moves.append(("robber", r))
    return tr


def replay(trace: Trace) -> GamePosition:
    """Re-check every move of a trace; returns the final position."""
    g, cfg = trace.graph, trace.config
    cops = _check_cops(g, cfg, trace.cop_placement, 0)
    r = trace.robber_placement
    g.check_vertex(r)
    captured = r in cops
    turn = 0
    side = Side.COPS
    for s, mv in trace.moves:
        if captured:
            raise ContractViolation(f"trace continues after capture at turn {turn}")
        if s == "cops":
            if side is not Side.COPS:
                raise ContractViolation(f"turn {turn}: cops moved out of order")
            turn += 1
            mv = _check_cops(g, cfg, mv, turn)
            if not cops_move_legal(g, cfg.cop_speed, cops, mv):
                raise PolicyFault(f"turn {turn}: illegal cop move {cops} -> {mv}", turn)
            cops = mv
            captured = r in cops
            side = Side.ROBBER
        else:
            if side is not Side.ROBBER:
                raise ContractViolation(f"turn {turn}: robber moved out of order")
            if mv not in robber_reach(g, r, cops, cfg.robber_speed):
                raise PolicyFault(f"turn {turn}: illegal robber move {r} -> {mv}", turn)
            r = mv
            side = Side.COPS
    if captured != trace.captured or turn != trace.turn:
        raise ContractViolation(f"recorded outcome ({trace.outcome}) does not match the moves")
    return GamePosition(cops, r, side)


# -- exhaustive verification ---------------------------------------------------------


@dataclass
class CaptureVerdict:
    valid: bool
    worst: float
    turn_bound: int
    states: int
    trace: Trace | None = None
    reason: str = ""

    def __bool__(self):
        return self.valid


def _budget(budget):
    return _config.current().max_product_states if budget is None else budget


def _deadline():
    """Returns a checker raising ResourceError once the configured time limit passes."""
    limit = _config.current().time_limit
    if limit is None:
        return lambda count: None
    stop = time.monotonic() + limit

    def check(count):
        if count & 1023 == 0 and time.monotonic() > stop:
            raise ResourceError(f"verification exceeded the time limit of {limit}s", count=count, limit=int(limit))

    return check


def verify_capture(g: Graph, cfg: GameConfig, cop_policy, turn_bound: int | None = None, budget: int | None = None, robber_starts=None) -> CaptureVerdict:
    """Worst-case capture time of ``cop_policy`` over every robber behavior.

    Builds the reachable graph of (cops, robber, memory) states and labels it
    backwards: a cops-to-move node costs one move plus its unique reply; a
    robber node is worth its best continuation. Unlabelled nodes lie on
    robber-sustainable cycles and mean the policy does not win.
    """
    if turn_bound is None:
        turn_bound = 4 * g.n * g.n
    limit = _budget(budget)
    tick = _deadline()
    enc = cop_policy.encode
    cops0, m0 = cop_policy.place()
    cops0 = _check_cops(g, cfg, cops0, 0)
    starts = range(g.n) if robber_starts is None else sorted(set(robber_starts))

    index: dict = {}
    mems: list = []  # (cops, robber, memory) for cops-to-move nodes
    reply: list = []  # cop reply: (new cops, new memory)
    kids: list = []  # robber options after the reply (node ids), or None on capture
    queue = deque()

    def node(cops, r, mem):
        key = (cops, r, enc(mem))
        i = index.get(key)
        if i is None:
            i = len(mems)
            if i >= limit:
                raise ResourceError(f"capture verification exceeded {limit} product states", count=i, limit=limit)
            tick(i)
            index[key] = i
            mems.append((cops, r, mem))
            reply.append(None)
            kids.append(None)
            queue.append(i)
        return i

    roots = []
    for r in starts:
        roots.append(None if r in cops0 else node(cops0, r, m0))
    while queue:
        i = queue.popleft()
        cops, r, mem = mems[i]
        try:
            move, m2 = cop_policy.step(GamePosition(cops, r, Side.COPS), mem)
        except PolicyFault as exc:
            return CaptureVerdict(False, INF, turn_bound, len(mems), reason=f"policy fault: {exc}")
        move = _check_cops(g, cfg, move, None)
        if not cops_move_legal(g, cfg.cop_speed, cops, move):
            raise PolicyFault(f"illegal cop move {cops} -> {move} at robber {r}")
        reply[i] = (move, m2)
        if r not in move:
            kids[i] = [node(move, r2, m2) for r2 in robber_reach(g, r, move, cfg.robber_speed)]

    # backward labelling: value = cop moves until capture
    N = len(mems)
    val = [-1] * N
    parents: list[list[int]] = [[] for _ in range(N)]
    pending = [0] * N
    ready = deque()
    for i in range(N):
        if kids[i] is None:
            val[i] = 1
            ready.append(i)
        else:
            pending[i] = len(kids[i])
            for c in kids[i]:
                parents[c].append(i)
    best = [0] * N
    while ready:
        c = ready.popleft()
        for p in parents[c]:
            best[p] = max(best[p], val[c])
            pending[p] -= 1
            if pending[p] == 0:
                val[p] = 1 + best[p]
                ready.append(p)
    vals = [INF if v < 0 else v for v in val]
    root_vals = [0 if i is None else vals[i] for i in roots]
    worst = max(root_vals) if root_vals else 0
    worst_start = starts[root_vals.index(worst)] if root_vals else None
    trace = None
    if worst_start is not None:
        trace = _worst_trace(g, cfg, cops0, worst_start, roots[root_vals.index(worst)], mems, reply, kids, vals, turn_bound)
    if worst >= INF:
        return CaptureVerdict(False, float("inf"), turn_bound, N, trace, "robber can evade forever")
    ok = worst <= turn_bound
    return CaptureVerdict(ok, worst, turn_bound, N, trace, "" if ok else f"worst capture {worst} exceeds bound {turn_bound}")


def _worst_trace(g, cfg, cops0, r0, root, mems, reply, kids, vals, turn_bound):
    tr = Trace(g, cfg, cops0, r0, horizon=turn_bound + 1)
    if root is None:
        tr.captured = True
        return tr
    i = root
    seen = 0
    while seen <= turn_bound:
        move, _ = reply[i]
        seen += 1
        tr.moves.append(("cops", move))
        tr.turn = seen
        if kids[i] is None:
            tr.captured = True
            break
        i = max(kids[i], key=lambda c: (vals[c], -mems[c][1]))
        tr.moves.append(("robber", mems[i][1]))
    return tr


@dataclass
class GuardVerdict:
    valid: bool
    states: int
    counterexample: list | None = None
    reason: str = ""

    def __bool__(self):
        return self.valid

    def robber_path(self) -> list[int]:
        return [] if self.counterexample is None else [pos.robber for pos in self.counterexample]


def verify_guarding(g: Graph, cfg: GameConfig, assignment, target, D, budget: int | None = None) -> GuardVerdict:
    """Check that after ``assignment.setup_bound`` cop moves the target is guarded.

    The robber starts anywhere in ``D`` and may roam ``D`` and the target.
    Every reachable cops-to-move state at time ``>= setup_bound`` whose robber
    stands in the target must be answered by a capturing cop move; before that
    the robber may go wherever it likes inside that region.
    """
    target = frozenset(target)
    if not target:
        return GuardVerdict(True, 0)
    region = frozenset(D) | target
    policy = assignment.policy
    setup = assignment.setup_bound
    enc = policy.encode
    limit = _budget(budget)
    tick = _deadline()

    cops0, m0 = policy.place()
    cops0 = _check_cops(g, cfg, cops0, 0)
    index: dict = {}
    info: list = []
    parent: list = []
    queue = deque()

    def push(cops, r, mem, t, par):
        key = (cops, r, enc(mem), t)
        if key in index:
            return
        if len(info) >= limit:
            raise ResourceError(f"guard verification exceeded {limit} product states", count=len(info), limit=limit)
        tick(len(info))
        index[key] = len(info)
        info.append((cops, r, mem, t))
        parent.append(par)
        queue.append(len(info) - 1)

    for r in sorted(D):
        if r not in cops0:
            push(cops0, r, m0, 0, -1)

    def path_to(i):
        out = []
        while i >= 0:
            cops, r, _, _ = info[i]
            out.append(GamePosition(cops, r, Side.COPS))
            i = parent[i]
        return out[::-1]

    while queue:
        i = queue.popleft()
        cops, r, mem, t = info[i]
        move, m2 = policy.step(GamePosition(cops, r, Side.COPS), mem)
        move = _check_cops(g, cfg, move, t + 1)
        if not cops_move_legal(g, cfg.cop_speed, cops, move):
            raise PolicyFault(f"illegal cop move {cops} -> {move} at robber {r}", t + 1)
        if r in move:
            continue
        if t >= setup and r in target:
            path = path_to(i)
            return GuardVerdict(
                False,
                len(info),
                path,
                f"robber reached target vertex {r} at turn {t} without being captured",
            )
        for r2 in robber_reach(g, r, move, cfg.robber_speed):
            if r2 in region:
                push(move, r2, m2, min(t + 1, setup), i)
    return GuardVerdict(True, len(info))

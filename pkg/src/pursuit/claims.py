"""Reproduction recipes, one per acceptance criterion.

Each recipe returns a :class:`ClaimResult`; ``passed`` is computed from the
raw data, never forced.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import generators as gen
from .copwin import dismantling_order, five_necessary_gadget, guard_path_neighborhood
from .corpus import connected_graphs
from .filament import random_rep, two_cop_policy
from .game import GameConfig
from .graph import all_pairs_distances, shortest_path
from .reductions import (
    check_dd_inclusion,
    check_line_graph_inequality,
    check_subdivision_inequality,
    girth_mindeg_lower_bound,
    subdivision_policy,
)
from .simulator import play, verify_capture, verify_guarding
from .solver import OptimalRobber, analyze, cop_number, optimal_policies

log = logging.getLogger(__name__)


@dataclass
class ClaimResult:
    claim: str
    passed: bool
    summary: str
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} [{self.claim}] {self.summary} ({self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return {"claim": self.claim, "passed": self.passed, "summary": self.summary, "details": self.details, "seconds": round(self.seconds, 3)}


def _map(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def cycles(threads=None) -> ClaimResult:
    rows = {}
    for n in range(4, 9):
        g = gen.cycle(n)
        one = analyze(g, GameConfig(1))
        rows[n] = {"cn": cop_number(g, 3).value, "one_cop_wins": one.cops_win}
    ok = all(r["cn"] == 2 and not r["one_cop_wins"] for r in rows.values())
    return ClaimResult("cycles", ok, f"cn(C_n)={[r['cn'] for r in rows.values()]} for n=4..8, one cop never wins", {"cycles": rows})


def toroidal_grid(threads=None) -> ClaimResult:
    cn = cop_number(gen.toroidal_grid(3, 5), 4)
    return ClaimResult("toroidal-grid", cn.value == 3, f"cn(C_3 x C_5) = {cn}", {"cop_number": cn.value})


def projective_plane(threads=None) -> ClaimResult:
    g = gen.projective_incidence(2)
    bound = girth_mindeg_lower_bound(g)
    cn = cop_number(g, 4)
    ok = bound == 3 and cn.value == 3
    return ClaimResult("projective-plane", ok, f"Heawood: lower bound {bound}, cn = {cn}", {"bound": bound, "cop_number": cn.value})


def copwin_dismantling(threads=None) -> ClaimResult:
    graphs = connected_graphs(7)

    def one(g):
        return (cop_number(g, 1).value == 1) != (dismantling_order(g) is not None)

    mism = sum(_map(one, graphs, threads))
    small = sum(1 for g in graphs if g.n <= 5)
    ok = mism == 0 and len(graphs) >= 500
    return ClaimResult(
        "copwin-dismantling",
        ok,
        f"{len(graphs)} connected graphs (n<=7, {small} with n<=5): {mism} discrepancies",
        {"graphs": len(graphs), "discrepancies": mism},
    )


def npath_instances(count=200, seed=2024):
    """Sparse random connected graphs (n <= 9), a geodesic between a farthest pair, a start vertex."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(3, 10))
        p = float(rng.uniform(0.15, 0.5))
        g = gen.random_connected(n, p, int(rng.integers(1 << 31)))
        dist = all_pairs_distances(g).dist
        far = np.argwhere(dist == dist.max())
        a, b = (int(x) for x in far[int(rng.integers(len(far)))])
        P = shortest_path(g, a, b)
        start = int(rng.integers(n))
        out.append((g, P, start))
    return out


def npath_guard(threads=None, count=200) -> ClaimResult:
    inst = npath_instances(count)

    def one(item):
        g, P, start = item
        a = guard_path_neighborhood(g, P, range(g.n), start=start)
        return verify_guarding(g, a.policy.cfg, a, a.target, range(g.n)).valid

    fails = sum(not v for v in _map(one, inst, threads))
    g, P, D = five_necessary_gadget()
    five = guard_path_neighborhood(g, P, D)
    four = guard_path_neighborhood(g, P, D, offsets=(-2, -1, 1))
    v5 = verify_guarding(g, five.policy.cfg, five, five.target, D)
    v4 = verify_guarding(g, four.policy.cfg, four, four.target, D)
    qs = set(range(5, 10))
    path = v4.robber_path()
    four_ok = (not v4.valid) and bool(qs & set(path))
    ok = fails == 0 and v5.valid and four_ok
    return ClaimResult(
        "npath-guard",
        ok,
        f"{len(inst)} random instances, {fails} failures; gadget: 5 cops {'hold' if v5.valid else 'FAIL'}, "
        f"4 cops {'fail' if not v4.valid else 'HOLD'} via robber path {path}",
        {"instances": len(inst), "failures": fails, "gadget_five_valid": v5.valid, "gadget_four_valid": v4.valid, "robber_path": path},
    )


def filament_instances(count=100, seed=7):
    rng = np.random.default_rng(seed)
    return [random_rep(int(rng.integers(3, 11)), int(rng.integers(1 << 31))) for _ in range(count)]


def filament_two_cops(threads=None, count=100) -> ClaimResult:
    reps = filament_instances(count)

    def one(rep):
        g = rep.graph
        n = rep.n
        cn = cop_number(g, 2).value
        pol = two_cop_policy(rep)
        bound = 10 * n + 10
        if n <= 8:
            v = verify_capture(g, GameConfig(2), pol, bound)
            return cn, v.valid, v.worst
        a = analyze(g, GameConfig(2))
        tr = play(g, GameConfig(2), pol, OptimalRobber(a), bound)
        return cn, tr.captured, tr.turn

    res = _map(one, reps, threads)
    cn_bad = sum(1 for cn, _, _ in res if cn is None or cn > 2)
    cap_bad = sum(1 for _, ok, _ in res if not ok)
    ok = cn_bad == 0 and cap_bad == 0 and len(reps) >= 100
    ratio = max(w / r.n for (_, _, w), r in zip(res, reps))
    return ClaimResult(
        "filament-two-cops",
        ok,
        f"{len(reps)} random reps (n<=10): cn>2 on {cn_bad}, capture failures {cap_bad}, worst turns/n {ratio:.2f}",
        {"instances": len(reps), "cn_failures": cn_bad, "capture_failures": cap_bad, "worst_turns_per_vertex": ratio},
    )


SUBDIVISION_POLICY_CASES = (("P4", lambda: gen.path(4)), ("C4", lambda: gen.cycle(4)), ("C5", lambda: gen.cycle(5)), ("K3", lambda: gen.complete(3)), ("K4", lambda: gen.complete(4)))


def subdivision(threads=None) -> ClaimResult:
    graphs = connected_graphs(6)
    cns = {g: cop_number(g, g.n).value for g in graphs}
    items = [(g, d) for d in (2, 3) for g in graphs]
    reports = _map(lambda it: check_subdivision_inequality(it[0], it[1], base_cn=cns[it[0]]), items, threads)
    viol = [str(r) for r in reports if not r.holds]
    pol_fail = []
    for name, make in SUBDIVISION_POLICY_CASES:
        for d in (2, 3):
            p = subdivision_policy(make(), d)
            v = verify_capture(p.g, p.cfg, p)
            if not v.valid:
                pol_fail.append(f"{name}^({d}): {v.reason}")
    ok = not viol and not pol_fail
    return ClaimResult(
        "subdivision",
        ok,
        f"{len(items)} (G,d) pairs, {len(viol)} violations; tracker policy failures {len(pol_fail)}/10",
        {"pairs": len(items), "violations": viol, "policy_failures": pol_fail},
    )


def line_graph_claim(threads=None) -> ClaimResult:
    graphs = [g for g in connected_graphs(7, max_m=12) if g.m >= 1]
    reports = _map(check_line_graph_inequality, graphs, threads)
    viol = [str(r) for r in reports if not r.holds]
    return ClaimResult("line-graph", not viol, f"{len(graphs)} graphs, {len(viol)} violations", {"graphs": len(graphs), "violations": viol})


def dd_game(threads=None) -> ClaimResult:
    graphs = connected_graphs(6)
    cns = {g: cop_number(g, g.n).value for g in graphs}
    items = [(g, d) for d in (2, 3) for g in graphs]
    reports = _map(lambda it: check_dd_inclusion(it[0], it[1], base_cn=cns[it[0]]), items, threads)
    viol = [str(r) for r in reports if not r.holds]
    return ClaimResult("dd-game", not viol, f"{len(items)} (H,d) pairs, {len(viol)} violations", {"pairs": len(items), "violations": viol})


def self_consistency_instances():
    named = [gen.cycle(n) for n in range(4, 9)] + [gen.petersen(), gen.toroidal_grid(3, 5), gen.projective_incidence(2), gen.grid(3, 3)]
    return named + connected_graphs(5)


def self_consistency(threads=None) -> ClaimResult:
    """Optimal-vs-optimal play lasts exactly the analysis value; the optimal cop verifies."""
    graphs = self_consistency_instances()

    def one(g):
        cn = cop_number(g, 4, keep=True)
        a = cn.analyses[-1]
        cop, rob = optimal_policies(a)
        tr = play(g, a.config, cop, rob, 4 * g.n * g.n)
        issues = []
        if not tr.captured or tr.turn != a.witness_value:
            issues.append(f"play length {tr.turn} != value {a.witness_value}")
        if g.n <= 10:
            v = verify_capture(g, a.config, cop, a.max_value)
            if not v.valid:
                issues.append(f"verify_capture: {v.reason}")
        if cn.value > 1:
            # one fewer cop: the optimal evader survives
            low = cn.analyses[-2]
            c2, r2 = optimal_policies(low)
            if play(g, low.config, c2, r2, 100).captured:
                issues.append("optimal evader caught with too few cops")
        return issues

    res = _map(one, graphs, threads)
    bad = [i for r in res for i in r]
    return ClaimResult(
        "self-consistency",
        not bad,
        f"{len(graphs)} solved instances, {len(bad)} inconsistencies",
        {"instances": len(graphs), "issues": bad},
    )


CLAIMS = {
    "cycles": cycles,
    "toroidal-grid": toroidal_grid,
    "projective-plane": projective_plane,
    "copwin-dismantling": copwin_dismantling,
    "npath-guard": npath_guard,
    "filament-two-cops": filament_two_cops,
    "subdivision": subdivision,
    "line-graph": line_graph_claim,
    "dd-game": dd_game,
    "self-consistency": self_consistency,
}


def reproduce(claim: str, threads: int | None = None) -> ClaimResult:
    if claim not in CLAIMS:
        raise KeyError(claim)
    t0 = time.perf_counter()
    res = CLAIMS[claim](threads=threads)
    res.seconds = time.perf_counter() - t0
    log.info(res.line())
    return res

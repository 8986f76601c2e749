import pytest

from oracles import naive_dismantlable
from pursuit import generators as gen
from pursuit.copwin import (
    DEPUTY_OFFSETS,
    copwin_policy,
    dismantling_order,
    five_necessary_gadget,
    guard_path_neighborhood,
    path_retraction,
    retract_guard_policy,
)
from pursuit.corpus import connected_graphs
from pursuit.errors import ContractViolation, DomainError
from pursuit.game import GameConfig, GamePosition, Side
from pursuit.graph import all_pairs_distances, bfs_distances, closed_neighborhood, induced_subgraph, shortest_path
from pursuit.policy import RandomRobber
from pursuit.simulator import play, verify_capture, verify_guarding
from pursuit.solver import OptimalCop, analyze

# -- dismantling -------------------------------------------------------------------------


def test_paths_dismantle():
    for n in range(1, 8):
        d = dismantling_order(gen.path(n))
        assert d is not None and d.check(gen.path(n))


def test_c4_has_no_corner():
    assert dismantling_order(gen.cycle(4)) is None


def test_greedy_agrees_with_exhaustive_search():
    for g in connected_graphs(6):
        d = dismantling_order(g)
        assert (d is not None) == naive_dismantlable(g)
        if d is not None:
            assert d.check(g)


def test_dominator_ties_smallest_id():
    # in K3 every vertex is a corner dominated by every other; greedy picks 0 first, by 1
    d = dismantling_order(gen.complete(3))
    assert d.dominator[0] == 1


# -- cop-win policy ---------------------------------------------------------------------------


def test_copwin_k2():
    pol = copwin_policy(gen.path(2))
    move, _ = pol.step(GamePosition((0,), 1, Side.COPS), 1)
    assert move == (1,)


def test_copwin_p5_within_25():
    g = gen.path(5)
    v = verify_capture(g, GameConfig(1), copwin_policy(g), 25)
    assert v.valid and v.worst <= 25


def test_copwin_p4_within_16():
    g = gen.path(4)
    v = verify_capture(g, GameConfig(1), copwin_policy(g), 16)
    assert v.valid and v.worst <= 16


def test_copwin_every_small_copwin_graph():
    for g in connected_graphs(6):
        if dismantling_order(g) is None:
            continue
        v = verify_capture(g, GameConfig(1), copwin_policy(g), g.n * g.n)
        assert v.valid, (g.edges, v.reason)


def test_copwin_rejects_non_dismantlable():
    with pytest.raises(DomainError):
        copwin_policy(gen.cycle(5))


# -- retractions ------------------------------------------------------------------------------


def test_path_retraction_identity():
    g = gen.path(5)
    r = path_retraction(g, range(5), [])
    assert all(r(v) == v for v in range(5))
    assert not r.violations()


def test_path_retraction_c6_half_cycle():
    r = path_retraction(gen.cycle(6), [0, 1, 2, 3], [4, 5])
    assert r(5) == 1 and r(4) == 2


def test_path_retraction_rejects_shortcut():
    with pytest.raises(ContractViolation) as exc:
        path_retraction(gen.cycle(5), [0, 1, 2, 3], [4])
    assert exc.value.witness[0] == 0 and exc.value.witness[-1] == 3


@pytest.mark.parametrize("seed", range(25))
def test_bfs_path_retraction_is_sound(seed):
    g = gen.random_connected(3 + seed % 6, 0.35, seed)
    dm = all_pairs_distances(g)
    far = max(range(g.n), key=lambda v: dm.dist[0, v])
    P = shortest_path(g, 0, far)
    r = path_retraction(g, P, range(g.n))
    assert r.violations() == []
    # Lipschitz distance property behind the construction
    d0 = bfs_distances(g, P[0])
    for u, v in g.edges:
        assert abs(d0[u] - d0[v]) <= 1


# -- retract guard ------------------------------------------------------------------------------


def _single_vertex_inner(g, c):
    h, _ = induced_subgraph(g, [c])
    return OptimalCop(analyze(h, GameConfig(1)))


def test_retract_guard_single_vertex():
    g = gen.cycle(6)
    r = path_retraction(g, [2], range(6))
    a = retract_guard_policy(g, r, _single_vertex_inner(g, 2), start=(5,))
    assert a.target == {2}
    v = verify_guarding(g, a.policy.cfg, a, a.target, range(6))
    assert v.valid


def _path_inner(P):
    h = gen.path(len(P))
    return OptimalCop(analyze(h, GameConfig(1)))


def test_retract_guard_c6_path():
    g = gen.cycle(6)
    P = [0, 1, 2, 3]
    r = path_retraction(g, P, [4, 5])
    a = retract_guard_policy(g, r, _path_inner(P))
    v = verify_guarding(g, a.policy.cfg, a, a.target, [4, 5])
    assert v.valid, v.reason


def test_retract_guard_petersen_geodesic():
    g = gen.petersen()
    P = shortest_path(g, 0, 7)
    assert len(P) == 3
    r = path_retraction(g, P, range(g.n))
    a = retract_guard_policy(g, r, _path_inner(P), start=(9,))
    assert a.setup_bound <= g.n
    v = verify_guarding(g, a.policy.cfg, a, a.target, range(g.n))
    assert v.valid, v.reason


def test_retract_guard_shadow_never_lags():
    g = gen.petersen()
    P = shortest_path(g, 0, 7)
    r = path_retraction(g, P, range(g.n))
    a = retract_guard_policy(g, r, _path_inner(P), start=(9,))
    shadowed = 0
    for seed in range(20):
        tr = play(g, a.policy.cfg, a.policy, RandomRobber(g, a.policy.cfg, seed=seed, avoid_cops=True), 60)
        mem = a.policy.place()[1]
        for pos in tr.positions():
            if pos.robber in pos.cops:
                break
            if mem[0] == "shadow":
                # the robber's image moved at most one step since the last reply
                assert bfs_distances(g, pos.cops[mem[1]])[r(pos.robber)] <= 1
            move, mem = a.policy.step(pos, mem)
            if mem[0] == "shadow":
                shadowed += 1
                assert move[mem[1]] == r(pos.robber)
    assert shadowed > 0


def test_retract_guard_rejects_losing_inner():
    g = gen.cycle(6)
    r = path_retraction(g, [0, 1, 2, 3], [4, 5])

    class Lazy(OptimalCop):
        def step(self, pos, memory):
            return pos.cops, memory

    inner = Lazy(analyze(gen.path(4), GameConfig(1)))
    with pytest.raises(ContractViolation):
        retract_guard_policy(g, r, inner)


# -- sheriff and deputies -----------------------------------------------------------------------


def test_npath_whole_graph_path():
    g = gen.path(6)
    a = guard_path_neighborhood(g, range(6), range(6))
    v = verify_capture(g, a.policy.cfg, a.policy, a.setup_bound + 1)
    assert v.valid


def test_npath_formation_invariant():
    g = gen.path(7)
    P = list(range(7))
    a = guard_path_neighborhood(g, P, range(7))
    pol = a.policy
    for seed in range(10):
        tr = play(g, pol.cfg, pol, RandomRobber(g, pol.cfg, seed=seed), 40)
        mem = pol.place()[1]
        for pos in tr.positions():
            if pos.robber in pos.cops:
                break
            if mem == "guard":
                i = P.index(pos.cops[0])
                want = sorted(P[max(0, min(6, i + o))] for o in (0, *DEPUTY_OFFSETS))
                assert sorted(pos.cops) == want
            _, mem = pol.step(pos, mem)


@pytest.mark.parametrize("seed", range(30))
def test_npath_random_instances(seed):
    g = gen.random_connected(4 + seed % 6, 0.3, 100 + seed)
    dm = all_pairs_distances(g).dist
    u, v = divmod(int(dm.argmax()), g.n)
    P = shortest_path(g, u, v)
    a = guard_path_neighborhood(g, P, range(g.n), start=seed % g.n)
    assert a.target == closed_neighborhood(g, P)
    res = verify_guarding(g, a.policy.cfg, a, a.target, range(g.n))
    assert res.valid, (g.edges, P, res.reason)


def test_gadget_needs_five():
    g, P, D = five_necessary_gadget()
    five = guard_path_neighborhood(g, P, D)
    four = guard_path_neighborhood(g, P, D, offsets=(-2, -1, 1))
    assert verify_guarding(g, five.policy.cfg, five, five.target, D).valid
    v4 = verify_guarding(g, four.policy.cfg, four, four.target, D)
    assert not v4.valid
    path = v4.robber_path()
    assert set(path) & set(range(5, 10))
    assert path[-1] in four.target


def test_confinement_breach_is_reported():
    g = gen.cycle(8)
    a = guard_path_neighborhood(g, [0, 1, 2], [7, 0, 1, 2, 3])
    pol = a.policy
    with pytest.raises(ContractViolation):
        mem = "guard"
        posts = tuple(pol._post(0, o) for o in pol.offsets)
        pol.step(GamePosition((0,) + posts, 5, Side.COPS), mem)

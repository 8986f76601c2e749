import pytest

from pursuit import generators as gen
from pursuit.copwin import copwin_policy, guard_path_neighborhood
from pursuit.errors import PolicyFault, ResourceError
from pursuit.game import GameConfig, Side
from pursuit.policy import Policy, RandomRobber, ScriptedRobber, StayRobber
from pursuit.simulator import Trace, play, replay, verify_capture, verify_guarding
from pursuit.solver import analyze, cop_number, optimal_policies
from pursuit import config


class Teleport(Policy):
    """Illegal cop: jumps two steps at once."""

    side = Side.COPS

    def place(self, cops=None):
        return (0,), None

    def step(self, pos, memory):
        return ((pos.cops[0] + 2) % self.g.n,), memory


class Sitter(Policy):
    side = Side.COPS

    def place(self, cops=None):
        return (0,), None

    def step(self, pos, memory):
        return pos.cops, memory


def test_k2_optimal_captures_turn_one():
    g = gen.path(2)
    a = analyze(g, GameConfig(1))
    tr = play(g, a.config, *optimal_policies(a), 10)
    assert tr.captured and tr.turn == 1


def test_c4_single_cop_survives():
    g = gen.cycle(4)
    a = analyze(g, GameConfig(1))
    tr = play(g, a.config, *optimal_policies(a), 100)
    assert not tr.captured and tr.outcome == "survived 100 turns"


def test_torus_captured_within_value():
    g = gen.toroidal_grid(3, 5)
    a = analyze(g, GameConfig(3))
    tr = play(g, a.config, *optimal_policies(a), 200)
    assert tr.captured and tr.turn <= a.witness_value


def test_illegal_move_names_turn():
    g = gen.cycle(6)
    with pytest.raises(PolicyFault) as exc:
        play(g, GameConfig(1), Teleport(g, GameConfig(1)), StayRobber(g, GameConfig(1), 3), 10)
    assert exc.value.turn == 1
    assert "turn 1" in str(exc.value)


def test_illegal_robber_move():
    g = gen.cycle(6)
    rob = ScriptedRobber(g, GameConfig(1), [3, 5])
    with pytest.raises(PolicyFault):
        play(g, GameConfig(1), Sitter(g, GameConfig(1)), rob, 5)


def test_trace_roundtrip_and_replay():
    g = gen.petersen()
    a = analyze(g, GameConfig(3))
    tr = play(g, a.config, optimal_policies(a)[0], RandomRobber(g, a.config, seed=4), 100)
    back = Trace.loads(tr.dumps())
    assert back.dumps() == tr.dumps()
    final = replay(back)
    assert (final.robber in final.cops) == tr.captured


def test_replay_rejects_tampered_trace():
    g = gen.cycle(6)
    cfg = GameConfig(2)
    tr = play(g, cfg, optimal_policies(analyze(g, cfg))[0], StayRobber(g, cfg), 20)
    tr.moves[0] = ("cops", (3, 3))
    with pytest.raises(PolicyFault):
        replay(tr)


def test_determinism():
    g = gen.grid(3, 3)
    a = analyze(g, GameConfig(2))
    runs = [play(g, a.config, optimal_policies(a)[0], RandomRobber(g, a.config, seed=9), 50).dumps() for _ in range(2)]
    assert runs[0] == runs[1]


# -- verify_capture ----------------------------------------------------------------------------


def test_verify_capture_copwin_p4():
    g = gen.path(4)
    v = verify_capture(g, GameConfig(1), copwin_policy(g), 16)
    assert v.valid and v.worst <= 16


def test_verify_capture_detects_failure_with_trace():
    g = gen.cycle(5)
    v = verify_capture(g, GameConfig(1), Sitter(g, GameConfig(1)), 20)
    assert not v.valid and v.trace is not None
    assert not v.trace.captured


def test_verify_capture_bound_is_strict():
    g = gen.path(5)
    pol = copwin_policy(g)
    worst = verify_capture(g, GameConfig(1), pol).worst
    assert verify_capture(g, GameConfig(1), pol, int(worst)).valid
    assert not verify_capture(g, GameConfig(1), pol, int(worst) - 1).valid


@pytest.mark.parametrize("g", [gen.cycle(5), gen.petersen(), gen.grid(3, 3), gen.complete(4)])
def test_optimal_policy_verifies_within_max_value(g):
    res = cop_number(g, 3, keep=True)
    a = res.analyses[-1]
    v = verify_capture(g, a.config, optimal_policies(a)[0], a.max_value)
    assert v.valid and v.worst == a.witness_value


def test_verify_capture_budget():
    g = gen.petersen()
    a = analyze(g, GameConfig(3))
    with pytest.raises(ResourceError):
        verify_capture(g, a.config, optimal_policies(a)[0], budget=3)


def test_verify_capture_time_limit():
    g = gen.grid(4, 4)
    a = analyze(g, GameConfig(2))
    config.set_current(config.Budgets(time_limit=0.0))
    with pytest.raises(ResourceError):
        verify_capture(g, a.config, optimal_policies(a)[0])


# -- verify_guarding -----------------------------------------------------------------------------


def test_empty_target_trivially_valid():
    g = gen.cycle(6)
    a = guard_path_neighborhood(g, [0, 1], range(6))
    assert verify_guarding(g, a.policy.cfg, a, set(), range(6)).valid


def test_guard_counterexample_is_a_legal_robber_walk():
    g = gen.cycle(8)
    a = guard_path_neighborhood(g, [0, 1, 2], range(8), offsets=())
    v = verify_guarding(g, a.policy.cfg, a, a.target, range(8))
    assert not v.valid
    path = v.robber_path()
    for x, y in zip(path, path[1:]):
        assert x == y or g.has_edge(x, y)
    assert path[-1] in a.target

from fractions import Fraction

import numpy as np
import pytest

from oracles import dense_envelope, pointwise_below, region_oracle, segment_oracle_edges
from pursuit.errors import ContractViolation, DomainError, GeometryError
from pursuit.filament import (
    FilamentRep,
    c4_rep,
    check,
    classify_region,
    clique_rep,
    intersection_graph,
    load_rep,
    nesting,
    random_rep,
    save_rep,
    top_sequence,
    two_cop_policy,
    validate,
)
from pursuit.game import GameConfig
from pursuit.simulator import play, verify_capture
from pursuit.solver import OptimalRobber, analyze, cop_number


def rep_of(*polys):
    return FilamentRep.from_points(dict(enumerate(polys)))


TRI = [(0, 0), (1, 1), (2, 0)]


# -- validation ---------------------------------------------------------------------------


def test_single_triangle_valid():
    assert validate(rep_of(TRI)) == []


def test_duplicate_endpoint():
    bad = validate(rep_of(TRI, [(0, 0), (3, 2), (5, 0)]))
    assert any(v.kind == "endpoint" for v in bad)


def test_touch_is_rejected():
    # the steeper tent peaks exactly on the wider one: contact without crossing
    bad = validate(rep_of([(0, 0), (5, 5), (10, 0)], [(2, 0), (5, 5), (8, 0)]))
    assert any(v.kind == "touch" for v in bad)


def test_mirrored_touch_from_below_is_rejected():
    # reflecting a dip across y = 4 gives a curve grazing the other from below
    upper = [(0, 0), (3, 6), (5, 4), (7, 6), (10, 0)]
    lower = [(1, 0), (5, 4), (9, 0)]
    bad = validate(rep_of(upper, lower))
    assert any(v.kind == "touch" for v in bad)


def test_shape_errors():
    assert any(v.kind == "shape" for v in validate(rep_of([(0, 0), (2, 0)])))
    assert any(v.kind == "shape" for v in validate(rep_of([(0, 0), (1, -1), (2, 0)])))
    assert any(v.kind == "shape" for v in validate(rep_of([(0, 0), (1, 1), (1, 2), (2, 0)])))


def test_overlap_is_rejected():
    bad = validate(rep_of([(0, 0), (2, 2), (4, 2), (6, 0)], [(1, 0), (2, 2), (4, 2), (5, 0)]))
    assert any(v.kind in ("overlap", "touch") for v in bad)


def test_triple_point_is_rejected():
    a = [(0, 0), (4, 4), (8, 0)]
    b = [(2, 0), (6, 4), (10, 0)]
    c = [(3, 0), (5, 3), (9, 0)]  # through the a/b crossing at (5, 3)
    bad = validate(rep_of(a, b, c))
    assert any(v.kind == "triple" for v in bad)


def test_check_raises():
    with pytest.raises(GeometryError):
        check(rep_of(TRI, TRI))


# -- intersection graph ------------------------------------------------------------------------


def test_disjoint_and_overlapping_triangles():
    assert intersection_graph(rep_of(TRI, [(3, 0), (4, 1), (5, 0)])).m == 0
    assert intersection_graph(rep_of(TRI, [(1, 0), (2, 1), (3, 0)])).edges == ((0, 1),)


def test_nested_triangle_has_no_edge():
    rep = rep_of([(0, 0), (5, 10), (10, 0)], [(4, 0), (5, 1), (6, 0)])
    assert intersection_graph(rep).m == 0
    assert segment_oracle_edges(rep) == set()


def test_known_reps():
    c4 = c4_rep()
    assert validate(c4) == []
    assert sorted(c4.graph.edges) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    k = clique_rep(5)
    assert validate(k) == [] and k.graph.m == 10


@pytest.mark.parametrize("seed", range(40))
def test_graph_matches_segment_oracle(seed):
    rep = random_rep(3 + seed % 8, seed, connected=False)
    assert set(rep.graph.edges) == segment_oracle_edges(rep)


# -- nesting ----------------------------------------------------------------------------------------


def test_nesting_examples():
    disjoint = rep_of(TRI, [(3, 0), (4, 1), (5, 0)])
    assert nesting(disjoint) == frozenset()
    nested = rep_of([(0, 0), (5, 10), (10, 0)], [(4, 0), (5, 1), (6, 0)])
    assert nesting(nested) == {(1, 0)}
    assert pointwise_below(nested, 1, 0)
    crossing = rep_of([(0, 0), (5, 2), (10, 0)], [(4, 0), (5, 8), (6, 0)])
    assert nesting(crossing) == frozenset()


@pytest.mark.parametrize("seed", range(30))
def test_nesting_matches_pointwise_oracle_and_is_transitive(seed):
    rep = random_rep(4 + seed % 7, 1000 + seed, connected=False)
    nest = nesting(rep)
    for u in range(rep.n):
        for v in range(rep.n):
            if u != v:
                assert ((u, v) in nest) == pointwise_below(rep, u, v)
    for a, b in nest:
        for c, d in nest:
            if b == c:
                assert (a, d) in nest


# -- envelope -------------------------------------------------------------------------------------


def test_top_sequence_trivial_cases():
    assert len(top_sequence(rep_of(TRI), [0])) == 1
    seq = top_sequence(rep_of(TRI, [(3, 0), (4, 1), (5, 0)]), [0, 1])
    assert [e.vertex for e in seq] == [0, 1]
    with pytest.raises(DomainError):
        top_sequence(rep_of(TRI), [])


def _assert_envelope(rep, S):
    seq = top_sequence(rep, S)
    xs, who, gap = dense_envelope(rep, S)
    checked = 0
    for x, w, gp in zip(xs, who, gap):
        covering = [e for e in seq if e.lo < Fraction(float(x)) < e.hi]
        if w < 0:
            assert not covering
            continue
        if gp < 1e-6:  # numerical tie at a crossing
            continue
        assert covering and covering[0].vertex == w, float(x)
        checked += 1
    for a, b in zip(seq, seq[1:]):
        assert a.vertex != b.vertex or a.hi < b.lo
    return checked


def test_envelope_tall_taller_tall():
    rep = rep_of(
        [(0, 0), (3, 6), (8, 0)],
        [(2, 0), (6, 9), (10, 0)],
        [(7, 0), (9, 5), (14, 0)],
    )
    assert validate(rep) == []
    seq = top_sequence(rep, range(3))
    assert [e.vertex for e in seq] == [0, 1, 2]
    assert _assert_envelope(rep, range(3)) > 9000


def test_envelope_repeats_a_vertex():
    # a wide low filament resurfaces after a narrow spike
    rep = rep_of([(0, 0), (5, 3), (10, 0)], [(4, 0), (5, 9), (6, 0)])
    assert [e.vertex for e in top_sequence(rep, [0, 1])] == [0, 1, 0]


@pytest.mark.parametrize("seed", range(20))
def test_envelope_matches_dense_sampling(seed):
    rep = random_rep(3 + seed % 8, 500 + seed)
    rng = np.random.default_rng(seed)
    S = sorted(set(int(x) for x in rng.choice(rep.n, size=max(1, rep.n // 2), replace=False)))
    _assert_envelope(rep, range(rep.n))
    _assert_envelope(rep, S)


def test_envelope_midpoints_dominate():
    rep = random_rep(8, 4242)
    for e in top_sequence(rep, range(rep.n)):
        h = rep[e.vertex](e.mid)
        assert all(rep[v](e.mid) <= h for v in range(rep.n))


# -- regions ----------------------------------------------------------------------------------------


def test_region_examples():
    rep = rep_of([(0, 0), (5, 10), (10, 0)], [(4, 0), (5, 1), (6, 0)], [(12, 0), (13, 1), (14, 0)], [(-4, 0), (-3, 1), (-2, 0)])
    assert classify_region(rep, 0, 5, 1) == "bottom"
    assert classify_region(rep, 0, 5, 2) == "right"
    assert classify_region(rep, 0, 5, 3) == "left"
    crossing = rep_of(TRI, [(1, 0), (2, 1), (3, 0)])
    with pytest.raises(ContractViolation):
        classify_region(crossing, 0, 1, 1)


@pytest.mark.parametrize("seed", range(25))
def test_regions_match_ray_parity(seed):
    rep = random_rep(4 + seed % 7, 900 + seed)
    S = range(rep.n)
    for e in top_sequence(rep, S):
        t = e.vertex
        for u in S:
            if u == t or rep.graph.has_edge(u, t):
                continue
            assert classify_region(rep, t, e.mid, u, S) == region_oracle(rep, t, e.mid, u)


# -- persistence ----------------------------------------------------------------------------------


def test_json_roundtrip_exact(tmp_path):
    rep = rep_of([(0, 0), (Fraction(1, 3), Fraction(7, 2)), (Fraction(5, 2), 0)], [(1, 0), ("1.25", 1), (4, 0)])
    p = tmp_path / "r.json"
    save_rep(rep, p)
    back = load_rep(p)
    assert [f.points for f in back.filaments] == [f.points for f in rep.filaments]
    text = p.read_text()
    assert '"1.25"' in text and '"1/3"' in text


def test_json_malformed():
    with pytest.raises(DomainError):
        FilamentRep.loads('{"filaments": [{"points": [[0, 0]]}]}')
    with pytest.raises(DomainError):
        FilamentRep.loads('{"filaments": [{"vertex": 0, "points": [["x", 0]]}]}')


def test_random_rep_deterministic():
    a, b = random_rep(7, 99), random_rep(7, 99)
    assert a.dumps() == b.dumps()


# -- two-cop strategy -------------------------------------------------------------------------------


def test_two_cops_c4_vs_optimal_evader():
    rep = c4_rep()
    g = rep.graph
    a = analyze(g, GameConfig(2))
    tr = play(g, GameConfig(2), two_cop_policy(rep), OptimalRobber(a), 40)
    assert tr.captured and tr.turn <= 40
    assert verify_capture(g, GameConfig(2), two_cop_policy(rep), 40).valid


def test_two_cops_clique_fast():
    rep = clique_rep(6)
    v = verify_capture(rep.graph, GameConfig(2), two_cop_policy(rep), 3)
    assert v.valid and v.worst <= 3


@pytest.mark.parametrize("seed", range(20))
def test_two_cops_random_exhaustive(seed):
    rep = random_rep(3 + seed % 6, 7000 + seed)
    n = rep.n
    assert cop_number(rep.graph, 2).value <= 2
    v = verify_capture(rep.graph, GameConfig(2), two_cop_policy(rep), 10 * n + 10)
    assert v.valid, v.reason


def test_two_cops_annotations_record_phases():
    rep = random_rep(8, 31337)
    a = analyze(rep.graph, GameConfig(2))
    tr = play(rep.graph, GameConfig(2), two_cop_policy(rep), OptimalRobber(a), 90)
    assert tr.captured
    modes = {ann.get("mode") for ann in tr.annotations}
    assert "walk" in modes or "hunt" in modes

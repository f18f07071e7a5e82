import json
from math import ceil, log2

import pytest

from latticeid.adaptive import (
    InseparableError,
    Leaf,
    Node,
    Protocol,
    ProtocolError,
    Query,
    SimulationReport,
    build_tree,
    identify,
    simulate,
    stage1_sweep,
    translate_tree,
    tree_depth,
    tree_from_dict,
    tree_leaves,
    tree_to_dict,
    tree_to_dot,
    truthful_oracle,
)
from latticeid.codes import InadmissibleError, codewords_on, construct
from latticeid.graph import CayleyGraph
from latticeid.lattice import Mat2

M800 = Mat2((28, 4), (-4, 28))
TORUS25 = Mat2.diag(25, 25)


@pytest.fixture(scope="module")
def m800_proto():
    return Protocol(CayleyGraph(M800), construct(3, 1), exact=True)


@pytest.fixture(scope="module")
def torus_proto():
    return Protocol(CayleyGraph(TORUS25), construct(1, 1), exact=True)


def check_tree(g, tree, cands):
    """Each candidate follows its own truthful path to its own leaf."""
    leaves = tree_leaves(tree)
    assert sorted(leaves) == sorted(cands)
    for f in cands:
        got, n = identify(tree, truthful_oracle(g, f))
        assert got == f and n <= tree_depth(tree)


def test_stage1_examples(m800_proto):
    g, words = m800_proto.g, m800_proto.codewords
    log = []
    assert stage1_sweep(g, words, 3, truthful_oracle(g, (2, 1)), log) == (0, 0)
    assert len(log) == 32 and sum(q.answer for q in log) == 1
    log = []
    assert stage1_sweep(g, words, 3, truthful_oracle(g, None), log) is None
    assert len(log) == 32
    c = words[7]
    assert stage1_sweep(g, words, 3, truthful_oracle(g, c)) == c


def test_stage1_rejects_double_hit(m800_proto):
    g, words = m800_proto.g, m800_proto.codewords
    with pytest.raises(ProtocolError):
        stage1_sweep(g, words, 3, lambda c, r: True)


def test_stage1_uniqueness_exhaustive(torus_proto):
    g, words = torus_proto.g, torus_proto.codewords
    for f in g.vertices():
        oracle = truthful_oracle(g, f)
        hits = [c for c in words if oracle(c, 1)]
        assert len(hits) == 1 and g.distance(hits[0], f) <= 1


def test_m800_tree_depth(m800_proto):
    g = m800_proto.g
    cands = g.ball((0, 0), 3)
    assert len(cands) == 25
    tree = m800_proto.tree_for((0, 0))
    assert tree_depth(tree) == 5 == ceil(log2(25))
    check_tree(g, tree, cands)


def test_single_and_two_candidates():
    g = CayleyGraph(TORUS25)
    words = codewords_on(construct(1, 1), TORUS25)
    leaf = build_tree(g, [(3, 4)], words, 2)
    assert leaf == Leaf((3, 4)) and tree_depth(leaf) == 0
    assert identify(leaf, lambda c, r: False) == ((3, 4), 0)
    for exact in (False, True):
        tree = build_tree(g, [(0, 0), (0, 1)], words, 2, exact=exact)
        assert tree_depth(tree) == 1
        check_tree(g, tree, [(0, 0), (0, 1)])


def test_inseparable_pair_reported():
    g = CayleyGraph(TORUS25)
    words = codewords_on(construct(1, 1), TORUS25)
    with pytest.raises(InseparableError) as info:
        build_tree(g, [(0, 0), (0, 1), (5, 5)], words, 1)
    assert set(info.value.pair) == {(0, 0), (0, 1)}


def test_exact_limit():
    g = CayleyGraph(TORUS25)
    words = codewords_on(construct(1, 1), TORUS25)
    with pytest.raises(ValueError):
        build_tree(g, g.ball((0, 0), 4), words, 2, exact=True)


@pytest.mark.parametrize("M, t", [(TORUS25, 1), (M800, 3), (Mat2((1, 2), (-2, 1)).scale(7), 1)])
def test_greedy_vs_exact(M, t):
    g = CayleyGraph(M)
    code = construct(t, 1)
    words = codewords_on(code, M)
    r = code.identifying_radius
    for c in words[:3]:
        cands = g.ball(c, t)
        exact = build_tree(g, cands, words, r, exact=True)
        greedy = build_tree(g, cands, words, r)
        assert tree_depth(greedy) >= tree_depth(exact) >= ceil(log2(len(cands)))
        check_tree(g, exact, cands)
        check_tree(g, greedy, cands)


def test_exact_depth_lower_bound_on_subsets(m800_proto):
    g, words = m800_proto.g, m800_proto.codewords
    ball = sorted(g.ball((0, 0), 3))
    for n in (2, 3, 5, 8, 13, 17):
        cands = ball[:n]
        tree = build_tree(g, cands, words, 12, exact=True)
        assert tree_depth(tree) >= ceil(log2(n))
        check_tree(g, tree, cands)


def test_identify_detects_inconsistency(m800_proto):
    tree = m800_proto.tree_for((0, 0))
    # swapped branches: the leaf reached contradicts the recorded answer
    bad = Node(tree.center, tree.radius, tree.covers, tree.no, tree.yes)
    f = sorted(tree.covers)[0]
    with pytest.raises(ProtocolError):
        identify(bad, truthful_oracle(m800_proto.g, f))


def test_translated_tree(m800_proto):
    g = m800_proto.g
    base = m800_proto.tree_for((0, 0))
    c = m800_proto.codewords[5]
    moved = translate_tree(base, g, c)
    check_tree(g, moved, g.ball(c, 3))


def test_simulate_examples(m800_proto, torus_proto):
    rep = m800_proto.run((2, 1))
    assert rep.stage1_queries == 32 and rep.stage2_queries <= 5
    assert rep.identified == rep.fault == (2, 1) and rep.detected_codeword == (0, 0)
    assert rep.baseline_queries == 32
    none = m800_proto.run(None)
    assert none.stage1_queries == 32 and none.stage2_queries == 0
    assert none.identified is None and none.detected_codeword is None
    rep = torus_proto.run((7, 11))
    assert rep.stage1_queries == 125 and rep.stage2_queries <= 3 and rep.identified == (7, 11)
    assert all(q.radius == 1 for q in rep.query_log[:125])
    assert all(q.radius == 2 for q in rep.query_log[125:])


def test_simulate_wrapper():
    rep = simulate(CayleyGraph(TORUS25), construct(1, 1), (3, 3), exact=False)
    assert rep.identified == (3, 3)


@pytest.mark.parametrize("M, t", [(TORUS25, 1), (Mat2((1, 2), (-2, 1)).scale(7), 1), (Mat2((2, 3), (-3, 2)).scale(5), 2)])
def test_completeness_exhaustive(M, t):
    g = CayleyGraph(M)
    for exact in (True, False):
        proto = Protocol(g, construct(t, 1), exact=exact)
        for f in g.vertices():
            rep = proto.run(f)
            assert rep.identified == f
            assert rep.stage1_queries == len(proto.codewords)
        assert proto.run(None).identified is None


def test_protocol_rejects_inadmissible():
    with pytest.raises(InadmissibleError):
        Protocol(CayleyGraph(Mat2.diag(5, 5)), construct(1, 1))
    with pytest.raises(InadmissibleError):
        Protocol(CayleyGraph(Mat2.diag(20, 20)), construct(1, 2))
    with pytest.raises(InadmissibleError):
        Protocol(CayleyGraph(Mat2.diag(20, 5), [(1, 1), (1, -1)]), construct(1, 1))


def test_report_json_roundtrip(m800_proto):
    for f in [(2, 1), None, (100, 3)]:
        rep = m800_proto.run(f)
        back = SimulationReport.from_dict(json.loads(json.dumps(rep.to_dict())))
        assert back == rep


def test_query_roundtrip():
    q = Query((1, 2), 12, True)
    assert Query.from_dict(json.loads(json.dumps(q.to_dict()))) == q


def test_tree_json_and_dot(m800_proto):
    tree = m800_proto.tree_for((0, 0))
    back = tree_from_dict(json.loads(json.dumps(tree_to_dict(tree))))
    assert back == tree
    dot = tree_to_dot(tree, label=m800_proto.g.minimal_rep)
    assert dot.startswith("digraph tree {")
    assert dot.count('label="yes"') == dot.count('label="no"') == 24
    assert dot.count("shape=box") == 25
    assert "B_12(" in dot
    assert isinstance(tree, Node)

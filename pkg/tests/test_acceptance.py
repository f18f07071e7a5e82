"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py`` (or ``python tests/test_acceptance.py``);
the terminal summary lists one PASS/FAIL line per criterion.
"""

import sys
import time
from itertools import product
from math import ceil, gcd, log2

import pytest

from latticeid.adaptive import Protocol, tree_depth
from latticeid.codes import (
    admits_identifying_on,
    codewords_on,
    construct,
    density,
    smallest_guaranteed_multiple,
)
from latticeid.graph import CayleyGraph, lattice_distance, shortest_cycle
from latticeid.lattice import Mat2, kernel_lattice, same_lattice
from latticeid.verify import (
    check_fixed_everywhere,
    covering_radius_bruteforce,
    find_unseparated_pair,
    is_identifying,
    is_perfect,
    min_identifying_radius,
    signature,
)

M800 = Mat2((28, 4), (-4, 28))
TORUS25 = Mat2.diag(25, 25)
FORMULA_PAIRS = [(1, 1), (2, 1), (1, 3), (3, 1), (1, 2), (2, 2)]


def formula_torus(t, d):
    code = construct(t, d)
    return code, code.generator_matrix.scale(smallest_guaranteed_multiple(code))


def test_criterion_1_torus_example():
    start = time.perf_counter()
    g = CayleyGraph(TORUS25)
    words = codewords_on(construct(1, 1), TORUS25)
    assert is_perfect(g, words, 1).holds
    assert is_identifying(g, words, 2).holds
    assert time.perf_counter() - start < 1.0


def test_criterion_2_worked_example():
    start = time.perf_counter()
    g = CayleyGraph(M800)
    words = codewords_on(construct(3, 1), M800)
    assert g.order == 800
    assert len(words) == 32
    assert is_perfect(g, words, 3).holds
    assert is_identifying(g, words, 12).holds
    assert shortest_cycle(M800) == 32 > 2 * 12 + 1
    assert time.perf_counter() - start < 10.0


def test_criterion_3_covering_radius():
    mismatches = []
    for t, d in product(range(1, 5), repeat=2):
        if gcd(2 * t, d) > 2:
            continue
        code = construct(t, d)
        M = code.generator_matrix.scale(7)
        measured = covering_radius_bruteforce(CayleyGraph(M), codewords_on(code, M))
        if measured != t + d:
            mismatches.append(((t, d), code.order_N, measured, t + d))
    assert not mismatches, "(t,d), N, measured, t+d: " + "; ".join(map(str, mismatches))


def test_criterion_4_radius_formulas():
    observed = {}
    for t, d in FORMULA_PAIRS:
        code, M = formula_torus(t, d)
        r = code.identifying_radius
        adm = admits_identifying_on(code, M)
        assert adm.admitted and shortest_cycle(M) > 2 * r + 1
        g = CayleyGraph(M)
        words = codewords_on(code, M)
        assert is_identifying(g, words, r).holds, (t, d)
        found = min_identifying_radius(g, words, r)
        observed[(t, d)] = (found, r)
        if code.gcd_case == 1:
            assert found == r, (t, d, found)
    print("min identifying radius vs formula:", observed)


def test_criterion_5_non_identifiability():
    code = construct(3, 3)
    M = code.generator_matrix.scale(10)
    g = CayleyGraph(M)
    words = codewords_on(code, M)
    steps = set()
    for s in [(0, 1), (-1, 1)]:
        x, y = s
        steps |= {(x, y), (-y, x), (-x, -y), (y, -x)}
    for r in range(1, g.diameter() + 1):
        pair = find_unseparated_pair(g, words, r)
        assert pair is not None, r
        (ax, ay), (bx, by) = pair
        assert g.minimal_rep((bx - ax, by - ay)) in steps, (r, pair)


def test_criterion_6_kronecker_normalization():
    K = kernel_lattice(Mat2((1, 1), (1, -1)), Mat2.diag(20, 5))
    assert same_lattice(K, Mat2((10, 10), (-5, 5)))


def test_criterion_7_adaptive_protocol():
    start = time.perf_counter()
    g = CayleyGraph(M800)
    proto = Protocol(g, construct(3, 1), exact=True)
    for f in g.vertices():
        rep = proto.run(f)
        assert rep.stage1_queries == 32
        assert rep.identified == f
    rep = proto.run(None)
    assert rep.stage1_queries == 32 and rep.identified is None and rep.stage2_queries == 0
    assert tree_depth(proto.tree_for((0, 0))) == 5 == ceil(log2(25))
    assert time.perf_counter() - start < 60.0


def admissible_suite():
    suite = [(construct(1, 1), TORUS25), (construct(3, 1), M800)]
    suite += [formula_torus(t, d) for t, d in FORMULA_PAIRS]
    for t, d in product(range(1, 5), repeat=2):
        code = construct(t, d)
        M = code.generator_matrix.scale(7)
        if code.identifying_radius is not None and admits_identifying_on(code, M).admitted:
            suite.append((code, M))
    return suite


def test_criterion_8_density():
    for code, M in admissible_suite():
        assert admits_identifying_on(code, M).admitted
        count = len(codewords_on(code, M))
        assert count * code.order_N == abs(M.det())
        assert density(code) * abs(M.det()) == count


def test_criterion_9_property_suites():
    # translation equivariance of signatures, every vertex and codeword
    for t, M in [(1, TORUS25), (3, M800)]:
        code = construct(t, 1)
        g = CayleyGraph(M)
        words = codewords_on(code, M)
        r = code.identifying_radius
        sig = {v: set(signature(g, words, v, r).codewords) for v in g.vertices()}
        for c in words:
            for v in g.vertices():
                moved = {g.canonical((w[0] + c[0], w[1] + c[1])) for w in sig[v]}
                assert moved == sig[g.canonical((v[0] + c[0], v[1] + c[1]))]
    # r-fixed balls over one full period
    for t, d in [(1, 1), (2, 1), (3, 1), (1, 3), (1, 2), (2, 2), (3, 2)]:
        code = construct(t, d)
        assert check_fixed_everywhere(code, code.identifying_radius, code.order_N // 2 + 1).holds
    # codeword-shift closure by N, and (N/2, +-N/2) for even N
    for t, d in product(range(1, 5), repeat=2):
        code = construct(t, d)
        N = code.order_N
        C = code.generator_matrix
        for lam in product(range(-3, 4), repeat=2):
            x, y = C.apply(lam)
            for m, n in product(range(-3, 4), repeat=2):
                assert code.is_codeword((x + m * N, y + n * N))
        if code.gcd_case == 2:
            assert code.is_codeword((N // 2, N // 2)) and code.is_codeword((N // 2, -N // 2))
    # BFS against the closed form on every vertex
    for M in [TORUS25, M800, Mat2((10, 10), (-5, 5)), construct(2, 2).generator_matrix.scale(7)]:
        g = CayleyGraph(M)
        dist0 = g.distances_from_zero()
        for i, v in enumerate(g.vertices()):
            assert dist0[i] == lattice_distance(M, v)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

from kminmax import _programs as lib
from kminmax._codec import pair
from kminmax.enum import TriState, class_member, phi
from kminmax.machine import Halted, OutOfBudget
from kminmax.minmax import (XiApprox, approx_from_above, compose_min,
                            graph_code, max_eval, min_eval)

I = lib.INDEX
TWO = I["TWO_BRANCH"]


def brute(i, x, t, pick):
    vals = []
    for u in range(t + 1):
        r = phi(i, pair(x, u), t)
        if isinstance(r, Halted):
            vals.append(r.value)
    return pick(vals) if vals else None


def test_two_branch_min_and_max():
    assert min_eval(TWO, 0, 100).value == 3
    assert max_eval(TWO, 0, 100).value == 5
    assert min_eval(TWO, 0, 100).defined


def test_empty_function_undefined():
    for t in (0, 10, 300):
        assert not min_eval(I["EMPTY"], 0, t).defined
        assert not max_eval(I["EMPTY"], 0, t).defined


def test_min_nonincreasing_max_nondecreasing():
    for i in (TWO, I["IDMIN"], I["HALF_MIN"], I["LOG2P2_MIN"]):
        for x in range(8):
            lo = hi = None
            for t in range(0, 80, 3):
                a, b = min_eval(i, x, t), max_eval(i, x, t)
                if lo is not None:
                    assert a.defined and a.value <= lo
                    assert b.defined and b.value >= hi
                if a.defined:
                    lo, hi = a.value, b.value


def test_closed_world_agreement():
    for i in (TWO, I["IDMIN"], I["HALF_MIN"]):
        for x in range(16):
            assert min_eval(i, x, 256).value == brute(i, x, 256, min)
            assert max_eval(i, x, 256).value == brute(i, x, 256, max)


def test_xi_two_branch():
    xi = approx_from_above(TWO)
    first = phi(xi, pair(0, 0), 10000)
    assert first.value == 5
    late = phi(xi, pair(0, 40), 20000)
    assert late.value == 3


def test_xi_divergent():
    xi = approx_from_above(I["EMPTY"])
    assert isinstance(phi(xi, pair(0, 3), 3000), OutOfBudget)
    assert XiApprox(I["EMPTY"], 0, cap=256).at(5) is None


def test_xi_native_mirror_matches_program():
    for i in (TWO, I["IDMIN"], I["HALF_MIN"], I["PLUS1_MIN"]):
        xi = approx_from_above(i)
        for x in range(4):
            native = XiApprox(i, x)
            for t in range(0, 24):
                r = phi(xi, pair(x, t), 200000)
                assert isinstance(r, Halted)
                assert r.value == native.at(t), (i, x, t)


def test_xi_values_nonincreasing_to_min():
    for x in range(32):
        a = XiApprox(TWO, x)
        vals = [a.at(t) for t in range(60)]
        assert vals == sorted(vals, reverse=True)
        assert vals[-1] == min_eval(TWO, x, 256).value


def test_compose_min():
    assert min_eval(compose_min(I["IDMIN"], TWO), 0, 300).value == 3
    assert min_eval(compose_min(I["PLUS1_MIN"], TWO), 0, 300).value == 4
    comp = compose_min(I["PLUS1_MIN"], I["HALF_MIN"])
    for x in range(32):
        assert min_eval(comp, x, 400).value == x // 2 + 1


def test_graph_code_two_branch():
    g = graph_code(TWO, "min")
    assert class_member(g, pair(0, 5), 20000).state is TriState.OUT
    v = class_member(g, pair(0, 3), 20000)
    assert v.state is TriState.UNKNOWN and v.unrefuted
    pos = phi(g.i, pair(0, 3), 20000)
    assert isinstance(pos, Halted)


def test_graph_code_empty_function():
    g = graph_code(I["EMPTY"], "max")
    for y in range(4):
        v = class_member(g, pair(0, y), 2000)
        assert v.state is not TriState.IN


def test_graph_denotation_matches_closed_world():
    g = graph_code(I["HALF_MIN"], "min")
    for x in range(12):
        truth = min_eval(I["HALF_MIN"], x, 256).value
        for y in range(8):
            v = class_member(g, pair(x, y), 60000)
            if y == truth:
                assert v.unrefuted and v.state is not TriState.OUT
            else:
                assert not v.unrefuted

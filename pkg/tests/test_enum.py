import pytest
from hypothesis import given, settings, strategies as st

from kminmax import _programs as lib
from kminmax.enum import (INDEX, UNIVERSAL_INDEX, And, BoundedExists, Pi1,
                          Sigma1, StructuralError, TriState, class_member,
                          code_from_json, code_to_json, enumeration, nat_to_word,
                          pair, phi, records, smn, thin_to_decidable, unpair,
                          w_members, word_to_nat)
from kminmax.machine import Halted, OutOfBudget, encode_literal


def cantor(x, y):
    return (x + y) * (x + y + 1) // 2 + y


def test_pair_examples():
    assert pair(0, 0) == 0
    assert pair(2, 1) == 7
    assert unpair(pair(13, 5)) == (13, 5)


def test_pair_is_the_cantor_bijection():
    # walk the diagonals independently and compare
    n = 0
    for d in range(40):
        for y in range(d + 1):
            assert pair(d - y, y) == n == cantor(d - y, y)
            assert unpair(n) == (d - y, y)
            n += 1


@given(st.integers(0, 1 << 80), st.integers(0, 1 << 80))
def test_pair_roundtrip(x, y):
    assert unpair(pair(x, y)) == (x, y)


def test_word_codec_examples():
    assert word_to_nat("") == 0
    assert [word_to_nat(w) for w in ("0", "1", "00")] == [1, 2, 3]
    assert all(word_to_nat(nat_to_word(n)) == n for n in range(1 << 12))


def test_word_codec_length_lex_order():
    words = [nat_to_word(n) for n in range(1 << 10)]
    assert words == sorted(words, key=lambda w: (len(w), w))


def test_literal_index_is_identity():
    for n in (0, 1, 17, 4095):
        assert phi(0, n, 10).value == n
    assert isinstance(phi(0, 3, 0), OutOfBudget)


def test_universal_index():
    for n in range(64):
        r = phi(UNIVERSAL_INDEX, pair(0, n), 40)
        assert isinstance(r, Halted) and r.value == phi(0, n, 40).value
    half = INDEX["HALF"]
    for n in range(64):
        assert phi(UNIVERSAL_INDEX, pair(half, n), 60).value == n // 2


def test_smn_of_universal_is_identity():
    u0 = smn(UNIVERSAL_INDEX, 0)
    assert all(phi(u0, x, 60).value == x for x in range(64))


def test_smn_law_small_grid():
    progs = [0, INDEX["HALF"], INDEX["IDMIN"], INDEX["DOUBLE"], INDEX["EVENS"],
             INDEX["ODDS"], INDEX["LOG2P2"], INDEX["EMPTY"]]
    from kminmax.machine import SMN_OVERHEAD
    for i in progs:
        for z in range(8):
            s = smn(i, z)
            for x in range(32):
                a = phi(i, pair(z, x), 200)
                b = phi(s, x, 200 + SMN_OVERHEAD)
                assert type(a) is type(b)
                if isinstance(a, Halted):
                    assert a.value == b.value
                    assert b.steps <= a.steps + SMN_OVERHEAD


def test_smn_injective():
    i = INDEX["HALF"]
    assert len({smn(i, z) for z in range(200)}) == 200
    assert smn(i, 3) != smn(INDEX["DOUBLE"], 3)


def test_nested_smn():
    # freezing a, then b, feeds pair(a, pair(b, x))
    for i in (0, INDEX["IDMIN"], INDEX["HALF"]):
        nested = smn(smn(i, 3), 7)
        for x in range(32):
            want = phi(i, pair(3, pair(7, x)), 200).value
            assert phi(nested, x, 200).value == want


def test_w_members_examples():
    ev = INDEX["EVENS"]
    assert w_members(ev, 1000, 20).elements == tuple(range(0, 21, 2))
    assert w_members(ev, 0, 20).elements == ()
    prev = ()
    for t in (1, 2, 5, 8, 16, 64, 256):
        cur = w_members(INDEX["SQUARES"], t, 100).elements
        assert set(prev) <= set(cur)
        prev = cur


def test_enumeration_order():
    order = enumeration(INDEX["SQUARES"], 200, 120)
    stages = [e for _, e in order]
    assert stages == sorted(stages)
    assert sorted(x for x, _ in order) == [0, 1, 4, 9, 16, 25, 36, 49, 64, 81, 100]


def test_thin_to_decidable_evens():
    j, jc = thin_to_decidable(INDEX["EVENS"])
    got = w_members(j, 3000, 8).elements
    assert got == (0, 2, 4, 6, 8)
    assert set(got) <= set(w_members(INDEX["EVENS"], 256, 8).elements)
    assert w_members(jc, 3000, 7).elements == (1, 3, 5, 7)
    assert records(INDEX["EVENS"], 100)[:8] == [0, 2, 4, 6, 8, 10, 12, 14]


def test_thin_to_decidable_finite():
    # W = {0, 1, 2}: literal decider halting only below 3
    from kminmax._programs import compile_program, V
    small = word_to_nat(compile_program(1, [
        ("while", ("LT", 2, V(0)), []), ("halt", 0)]))
    assert w_members(small, 256, 20).elements == (0, 1, 2)
    j, _ = thin_to_decidable(small)
    for t in (500, 2000, 4000):
        got = w_members(j, t, 20).elements
        assert set(got) <= {0, 1, 2}
    assert records(small, 256) == [0, 1, 2]


def test_class_member_examples():
    ev = INDEX["EVENS"]
    assert class_member(Sigma1(ev), 4, 500).state is TriState.IN
    assert class_member(Pi1(ev), 4, 500).state is TriState.OUT
    zero = word_to_nat(encode_literal(0))
    be = BoundedExists(And(INDEX["EMPTY"], INDEX["ALL"]), zero, 1)
    assert class_member(be, 0, 200).state is TriState.OUT


def test_bounded_exists_malformed_arity():
    zero = word_to_nat(encode_literal(0))
    with pytest.raises(StructuralError):
        class_member(BoundedExists(And(0, 0), zero, 0), 1, 10)
    with pytest.raises(StructuralError):
        class_member(BoundedExists(Sigma1(0), zero, 1), 1, 10)


def test_bounded_projection_containment():
    # a larger bound can only add witnesses
    inner = And(INDEX["EVENS"], INDEX["EMPTY"])
    zero = word_to_nat(encode_literal(0))
    one = word_to_nat(encode_literal(1))
    for x in range(20):
        small = class_member(BoundedExists(inner, zero, 1), x, 300)
        big = class_member(BoundedExists(inner, one, 1), x, 300)
        if small.unrefuted:
            assert big.unrefuted


def test_setcode_corpus(setcodes_corpus):
    for entry in setcodes_corpus:
        code = code_from_json(entry["code"])
        assert code_to_json(code) == entry["code"]
        for x, want in entry["expect"].items():
            v = class_member(code, int(x), entry["stage"])
            assert v.state.value == want.rstrip("*"), (entry["name"], x)
            if want.endswith("*"):
                assert v.unrefuted, (entry["name"], x)


def test_verdict_finality(setcodes_corpus):
    grid = (1, 4, 16, 64, 256, 1024)
    for entry in setcodes_corpus:
        if entry["name"].startswith("graph"):
            continue
        code = code_from_json(entry["code"])
        for x in map(int, entry["expect"]):
            final = None
            for t in grid:
                s = class_member(code, x, t).state
                if final is not None:
                    assert s is final
                elif s is not TriState.UNKNOWN:
                    final = s


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(lib.INDEX.values())), st.integers(0, 200))
def test_staged_membership_monotone(i, x):
    seen = False
    for t in (8, 32, 128, 512):
        now = bool(w_members(i, t, x).elements and x in w_members(i, t, x).elements)
        assert now or not seen
        seen = now

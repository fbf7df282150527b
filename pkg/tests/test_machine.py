import itertools
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from kminmax import machine as m
from kminmax._codec import nat_to_word, word_to_nat

GOLDEN = Path(__file__).parent / "golden"


def all_words(max_len):
    for n in range(max_len + 1):
        for bits in itertools.product("01", repeat=n):
            yield "".join(bits)


def test_literal_program_halts_with_value():
    assert m.run(m.encode_literal(5), "", 1000) == m.Halted(5, 1)
    assert m.run(m.encode_literal(0), "", 1000).value == 0
    assert m.run(m.encode_literal(7), "", 256).value == 7


def test_zero_budget_is_out_of_budget():
    assert m.run("", "", 0) == m.OUT_OF_BUDGET
    assert isinstance(m.run_index(12345, 3, 0), m.OutOfBudget)


def test_literal_overhead_is_constant():
    gaps = {len(m.encode_literal(x)) - x.bit_length() for x in range(1, 1 << 10)}
    assert gaps == {m.C_LIT}
    assert len(m.encode_literal(0)) <= m.C_LIT + 1


def test_literal_runs_within_c_lit_budget():
    for x in range(0, 1 << 12, 37):
        t = m.C_LIT * (x.bit_length() + 1)
        assert m.run(m.encode_literal(x), "", t) == m.Halted(x, 1)


def test_empty_program_is_identity():
    for x in range(64):
        r = m.run_index(0, x, 10)
        assert isinstance(r, m.Halted) and r.value == x


def test_monotone_halting_exhaustive():
    # every program up to 10 bits, every budget up to 64
    for p in all_words(10):
        prev = None
        for t in range(65):
            r = m.run(p, "", t)
            if prev is not None:
                assert r == prev
            elif isinstance(r, m.Halted):
                assert r.steps <= t
                assert m.run(p, "", t + 100) == r
                prev = r


def test_incomplete_opcode_diverges():
    # a dangling partial nibble never halts, however large the budget
    for tail in ("1", "10", "111"):
        assert m.run(tail, "", 1000) == m.OUT_OF_BUDGET


def test_query_echo():
    p = m.assemble(["QUERY"])
    three = nat_to_word(3)
    assert m.run_with_oracle(p, three, m.OracleView.finite([3]), 10).value == 1
    assert m.run_with_oracle(p, three, m.empty_oracle(), 10).value == 0
    assert m.run_with_oracle(p, three, None, 10) == m.run(m.embed_oracle_free(p), three, 10)


def test_query_costs_a_step():
    p = m.assemble(["QUERY"])
    a = m.run_with_oracle(p, "", m.empty_oracle(), 10)
    b = m.run("", "", 10)
    assert a.steps == b.steps + 1


def test_oracle_locality_by_replay():
    p = m.assemble(["DUP", "QUERY", "SWAP", "INC", "QUERY", "ADD"])
    for x in range(40):
        A = m.OracleView.finite(range(0, 80, 3))
        r = m.run_index(word_to_nat(p), x, 100, A)
        B = m.OracleView.replay(A.log)
        assert m.run_index(word_to_nat(p), x, 100, B) == r
        assert A.query_count == 2


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="01", max_size=40), st.integers(0, 1 << 20),
       st.integers(0, 400), st.sampled_from([0, m.SIBLING_PERM]))
def test_kernel_matches_python(p, x, t, perm):
    if m.BACKEND != "cython":
        pytest.skip("compiled kernel unavailable")
    P, L = (int(p, 2) if p else 0), len(p)
    fast = m.execute(P, L, x, t, None, perm, None, "cython")
    slow = m.execute(P, L, x, t, None, perm, None, "python")
    assert fast == slow


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="01", max_size=30), st.integers(0, 1000),
       st.integers(1, 200))
def test_determinism(p, x, t):
    assert m.run_index(word_to_nat(p), x, t) == m.run_index(word_to_nat(p), x, t)


@pytest.mark.parametrize("name", sorted(p.stem for p in GOLDEN.glob("*.trace")))
def test_golden_traces(name):
    spec, *expected = (GOLDEN / (name + ".trace")).read_text().splitlines()
    prog, word, budget = spec.split()[1:4]
    prog = "" if prog == "-" else prog
    word = "" if word == "-" else word
    assert m.trace(prog, word, int(budget)) == expected


def test_disassemble_roundtrip():
    items = ["DUP", ("LIT", 9), "ADD", ("PICK", 1), "DROP"]
    p = m.assemble(items)
    ops = [line.split(None, 1)[1] for line in m.disassemble(p)]
    assert ops == ["DUP", "LIT 9", "ADD", "PICK 1", "DROP"]

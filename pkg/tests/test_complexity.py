import math

import pytest

from kminmax.complexity import (CATALOG_BASE, DEFAULT_CATALOG, ClosedWorld,
                                ResourceLimitError, Term, agreement_constant,
                                brute_force, closed_world_oracle,
                                functional_k, incompressible_count,
                                incompressible_set, invariance_bound,
                                invariance_gap, k_t, lit_length, parse,
                                decomposition_constant, table_csv)
from kminmax.machine import C_LIT, SIBLING_PERM
from kminmax.oracles import finite, jump_stage

from .oracle_plain import plain_K


@pytest.fixture(scope="module")
def tabs(world):
    return closed_world_oracle(world, 1 << 10, jump=False)


def test_parse_and_literal_length():
    assert parse("0001101") == (3, "101")
    assert parse("1") == (0, "")
    assert lit_length(0) == 1 and lit_length(6) == 3


def test_k_t_zero_budget(world):
    for x in (0, 5, 1000):
        assert k_t(x, 0, world=world).value is None


def test_k_t_monotone_in_t(world):
    for x in range(0, 1 << 10, 7):
        prev = None
        for t in (1, 2, 4, 8, 16, 32, 64, 128, 256):
            v = world.kt_total(x, t)
            assert prev is None or v <= prev
            prev = v


def test_k_t_equals_closed_world(world, tabs):
    assert all(world.k_t(x, 256).value == tabs.K[x] or tabs.K[x] == lit_length(x)
               for x in range(256))


def test_plain_K_independent_oracle(world, tabs):
    assert tuple(plain_K(world, 256)) == tabs.K[:256]


def test_brute_force_all_modes(world):
    bf = brute_force(world, 256)
    t = closed_world_oracle(world, 256, jump=False)
    assert (bf.K, bf.Kmin, bf.Kmax) == (t.K, t.Kmin, t.Kmax)


def _with_literal(est, x):
    return lit_length(x) if est.value is None else min(est.value, lit_length(x))


def test_estimators_at_t_max(world, tabs):
    for x in range(256):
        assert _with_literal(world.kmin_est(x, 256), x) == tabs.Kmin[x]
        assert _with_literal(world.kmax_est(x, 256), x) == tabs.Kmax[x]


def test_tiny_stage_min_matches_plain(world):
    for x in range(6):
        assert world.kmin_est(x, 3).value == world.k_t(x, 3).value


def test_literal_bound(world):
    for x in range(1 << 12):
        t = C_LIT * (x.bit_length() + 1)
        assert world.kt_total(x, max(t, 16)) <= x.bit_length() + C_LIT


def test_counting_bound(tabs):
    for n in range(12):
        assert sum(1 for k in tabs.K if k < n) <= (1 << n) - 1


def test_normalization(tabs):
    assert all(a <= k and b <= k for a, b, k in zip(tabs.Kmin, tabs.Kmax, tabs.K))


def test_invariance_gap(world):
    sib = ClosedWorld(world.L_max, world.T_max, perm=SIBLING_PERM)
    assert invariance_bound() == 3
    assert invariance_gap(world, sib, 1 << 10) <= invariance_bound()


def test_decomposition_constant_is_stable(world):
    assert (decomposition_constant(world, 1 << 9)
            == decomposition_constant(world, 1 << 10))


def test_incompressible_set(world, tabs):
    found = incompressible_set(world, 8)
    assert [n for n, _ in found] == list(range(9))
    for n, x in found:
        assert x <= (1 << (n + 1)) - 1
        assert tabs.Kmax[x] >= n and tabs.Kmin[x] >= n
    assert found[0] == (0, 0)
    assert all(incompressible_count(world, n) >= 2 for n in range(9))


def test_functional_matches_plain(world):
    for x in range(64):
        assert functional_k(x, None, 256, world).value == world.k_t(x, 256).value


def test_singleton_oracle_collapses(world):
    # the description searching the oracle needs a budget above x
    vals = [functional_k(x, finite([x]), x + 100, world).value
            for x in (5000, 9000, 20000)]
    assert max(vals) <= CATALOG_BASE + len(DEFAULT_CATALOG) and len(set(vals)) == 1
    assert functional_k(20000, finite([]), 20100, world).value > max(vals)


def test_empty_oracle_is_logarithmic(world):
    c = max(math.floor(math.log2(x)) - world.K(x) for x in range(2, 1 << 12))
    assert c <= 1
    assert all(world.K(x) >= math.floor(math.log2(x)) - c for x in range(1 << 11, 1 << 12))


def test_agreement_constant(world):
    corpus = [finite([]), finite([3, 17, 100]), finite(range(0, 300, 7))]
    # measured once and frozen: the same c serves every finite oracle
    assert agreement_constant(world, corpus, 256) == 0


def test_term_codes_roundtrip():
    for t in DEFAULT_CATALOG:
        assert Term.from_code(t.code()) == t


def test_eta_is_oracle_free(world):
    term = Term("barzdins", DEFAULT_CATALOG[0].params)
    assert world.eta(term) == CATALOG_BASE


def test_resource_limits(world):
    with pytest.raises(ResourceLimitError):
        closed_world_oracle(world, 1 << 17)
    with pytest.raises(ResourceLimitError):
        ClosedWorld(30, 256)


def test_table_csv_deterministic(world):
    a = table_csv(closed_world_oracle(world, 64))
    b = table_csv(closed_world_oracle(ClosedWorld(14, 256), 64))
    assert a == b and a.splitlines()[0] == "x,K,Kmin,Kmax,K_jump1"


def test_jump_relative_K_not_above_plain(world):
    t = closed_world_oracle(world, 128)
    A = jump_stage(1, world.T_max)
    assert all(world.K(x, A) <= t.K[x] for x in range(128))

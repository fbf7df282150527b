"""Plain, min and max Kolmogorov complexity over a fixed description wrapper.

A description q = 0^k 1 p (or 0^k alone, read with p empty) means:

* k = 0: the literal natural word_to_nat(p), in one step;
* k = 1: the machine program p run on the empty input;
* k = 2: the same with the opcode nibbles XOR-ed by SIBLING_PERM;
* k >= 3: term number k - 3 of the catalog, with parameter p; indices past
  the catalog decode a generic term from pair(kind, params).

A description is read in one of three modes. Plain mode gives K. In min
(max) mode a description is a staged function of a stage u; its value is the
least (largest) halting branch. Min-marker terms run only in min mode and
max-marker terms only in max mode. Every other description ignores the
stage, so Kmin <= K and Kmax <= K hold pointwise in any closed world.

A ClosedWorld fixes L_max and T_max: all descriptions of length <= L_max
are evaluated with budget T_max, and stages beyond T_max read as T_max.
"""

from __future__ import annotations

import hashlib
import json
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from . import _programs as lib
from ._codec import nat_to_word, pair, unpair, word_to_nat
from ._markers import (KINDS, MODE_OF, BarzdinsRuns, MarkerRun,
                       least_member)
from .machine import (SIBLING_PERM, ST_HALTED, OracleView, execute)
from .enum import smn

__all__ = [
    "Term", "DEFAULT_CATALOG", "ClosedWorld", "ComplexityEstimate",
    "ResourceLimitError", "k_t", "kmin_est", "kmax_est", "functional_k",
    "closed_world_oracle", "incompressible_set", "lit_length", "parse",
    "LITERAL_INDEX", "ISA_INDEX", "SIBLING_INDEX", "CATALOG_BASE",
    "default_world", "oracular_world", "theta_index", "THETA_IDMIN",
    "Tables", "table_csv", "table_metadata", "decomposition_constant",
    "incompressible_count", "invariance_gap", "invariance_bound",
    "agreement_constant", "brute_force",
]

LITERAL_INDEX, ISA_INDEX, SIBLING_INDEX, CATALOG_BASE = 0, 1, 2, 3
COST_LIMIT = 1 << 26
RANGE_LIMIT = 1 << 16
WORLD_VERSION = 1

_I = lib.INDEX


class ResourceLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class ComplexityEstimate:
    value: Optional[int]
    stage: int
    monotone_from_above: bool
    provisional: bool

    @property
    def found(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class Term:
    kind: str
    params: tuple = ()

    def code(self) -> int:
        k = KINDS.index(self.kind)
        if self.kind == "least_member":
            return pair(k, 0)
        if self.kind == "kmin_pi":
            i, kk, m = self.params
            return pair(k, pair(i, pair(kk, m)))
        i, j = self.params
        return pair(k, pair(i, j))

    @staticmethod
    def from_code(code: int) -> Optional["Term"]:
        k, rest = unpair(code)
        if k >= len(KINDS):
            return None
        kind = KINDS[k]
        if kind == "least_member":
            return Term(kind, ())
        i, r = unpair(rest)
        if kind == "kmin_pi":
            kk, m = unpair(r)
            return Term(kind, (i, kk, m))
        return Term(kind, (i, r))

    def to_json(self) -> list:
        return [self.kind, list(self.params)]


def theta_index(phi_idx: int, c: int) -> int:
    """Min-form index of x -> min(x // 4, phi((x - c) // 2)), monus inside."""
    return smn(_I["THETA"], pair(phi_idx, c))


THETA_IDMIN = theta_index(_I["IDMIN"], 1)

DEFAULT_CATALOG: tuple[Term, ...] = (
    Term("barzdins", (_I["LOG2P2"], _I["EVENS"])),
    Term("barzdins", (_I["LOG2P2"], _I["SQUARES"])),
    Term("kmin_sigma", (_I["IDMIN"], _I["EVENS"])),
    Term("kmin_pi", (_I["IDMIN"], _I["ODDS"], _I["LINEAR_BOUND"])),
    Term("kmax_sigma", (_I["IDMIN"], _I["EVENS"])),
    Term("kmax_pi", (_I["IDMIN"], _I["ODDS"])),
    Term("barzdins", (_I["LOG2P2"], _I["ODDS"])),
    Term("kmin_pi", (THETA_IDMIN, _I["ODDS"], _I["QUARTIC_BOUND"])),
    Term("kmax_sigma", (THETA_IDMIN, _I["EVENS"])),
    Term("least_member", ()),
)


def parse(q: str) -> tuple[int, str]:
    """Split a description into (k, p)."""
    k = len(q) - len(q.lstrip("0"))
    return k, q[k + 1:]


def lit_length(x: int) -> int:
    """Length of the literal description 1 w of x."""
    return len(nat_to_word(x)) + 1


def _okey(oracle: Optional[OracleView]):
    return ("finite", ()) if oracle is None else oracle.key


def _isa_chunk(args):
    perm, budget, items = args
    out = []
    for P, L, stage in items:
        out.append(execute(P, L, 0, budget, None, perm, stage))
    return out


class _Frontier:
    """Per value: (need, length) pairs with prefix minima over need."""

    def __init__(self):
        self.raw: dict[int, list[tuple[int, int]]] = {}
        self._needs: dict[int, list[int]] = {}
        self._mins: dict[int, list[int]] = {}

    def add(self, value: int, need: int, length: int):
        self.raw.setdefault(value, []).append((need, length))

    def freeze(self):
        for v, lst in self.raw.items():
            lst.sort()
            needs, mins, cur = [], [], None
            for n, ln in lst:
                if cur is None or ln < cur:
                    cur = ln
                    needs.append(n)
                    mins.append(ln)
            self._needs[v], self._mins[v] = needs, mins

    def at(self, value: int, t: int) -> Optional[int]:
        needs = self._needs.get(value)
        if not needs:
            return None
        pos = bisect_right(needs, t)
        return self._mins[value][pos - 1] if pos else None

    def values(self):
        return self._needs.keys()


class _ModeTable:
    """Staged values of every description in min or max mode."""

    def __init__(self, mode: str):
        self.mode = mode
        # q -> (needs ascending, running min/max values)
        self.rows: dict[str, tuple[list[int], list[int]]] = {}
        self._at: dict[int, dict[int, int]] = {}

    def add(self, q: str, branches: list[tuple[int, int]]):
        if not branches:
            return
        branches.sort()
        needs, vals, cur = [], [], None
        better = (lambda a, b: a < b) if self.mode == "min" else (lambda a, b: a > b)
        for n, v in branches:
            if cur is None or better(v, cur):
                cur = v
                needs.append(n)
                vals.append(v)
        self.rows[q] = (needs, vals)

    def value(self, q: str, t: int) -> Optional[int]:
        row = self.rows.get(q)
        if row is None:
            return None
        pos = bisect_right(row[0], t)
        return row[1][pos - 1] if pos else None

    def table_at(self, t: int) -> dict[int, int]:
        """value -> least description length whose stage-t value it is."""
        got = self._at.get(t)
        if got is None:
            got = {}
            for q, (needs, vals) in self.rows.items():
                pos = bisect_right(needs, t)
                if pos:
                    v = vals[pos - 1]
                    if v not in got or len(q) < got[v]:
                        got[v] = len(q)
            self._at[t] = got
        return got


class _OracleTables:
    def __init__(self):
        self.plain: Optional[_Frontier] = None
        self.plain_rows: dict[str, tuple] = {}
        self.modes: dict[str, _ModeTable] = {}
        self.barz: dict = {}
        self.barz_runs: dict = {}
        self.markers: dict = {}
        self.xi: dict = {}


class ClosedWorld:
    """Exhaustive evaluation of all descriptions up to L_max for T_max steps."""

    def __init__(self, L_max: int = 14, T_max: int = 256, perm: int = 0,
                 catalog: Sequence[Term] = DEFAULT_CATALOG, workers: int = 0,
                 cost_limit: int = COST_LIMIT):
        if L_max < 1 or T_max < 1:
            raise ValueError("L_max and T_max must be positive")
        cost = (1 << (L_max + 1)) * (T_max + 1)
        if cost > cost_limit:
            raise ResourceLimitError(
                "closed world 2^(L_max+1) * (T_max+1) = %d exceeds %d"
                % (cost, cost_limit))
        self.L_max, self.T_max, self.perm = L_max, T_max, perm
        self.catalog = tuple(catalog)
        self.workers = workers
        self._tables: dict = {}

    # -- identity ------------------------------------------------------------

    def params(self) -> dict:
        return {"L_max": self.L_max, "T_max": self.T_max, "perm": self.perm,
                "catalog": [t.to_json() for t in self.catalog],
                "version": WORLD_VERSION}

    @property
    def hash(self) -> str:
        blob = json.dumps(self.params(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def constants(self) -> dict:
        return {"literal_index": LITERAL_INDEX, "isa_index": ISA_INDEX,
                "sibling_index": SIBLING_INDEX, "catalog_base": CATALOG_BASE,
                "literal_overhead": 1,
                "eta": {str(k + CATALOG_BASE): t.to_json()
                        for k, t in enumerate(self.catalog)}}

    # -- terms ---------------------------------------------------------------

    def term_at(self, k: int) -> Optional[Term]:
        pos = k - CATALOG_BASE
        if pos < 0:
            return None
        if pos < len(self.catalog):
            return self.catalog[pos]
        return Term.from_code(pos - len(self.catalog))

    def eta(self, term: Term) -> int:
        """Prefix index k with term_at(k) == term; oracle-independent."""
        if term in self.catalog:
            return CATALOG_BASE + self.catalog.index(term)
        return CATALOG_BASE + len(self.catalog) + term.code()

    def description(self, term: Term, p: str) -> str:
        return "0" * self.eta(term) + "1" + p

    # -- evaluation of single descriptions -----------------------------------

    def _tab(self, oracle) -> _OracleTables:
        key = _okey(oracle)
        if key is None:
            return _OracleTables()
        tab = self._tables.get(key)
        if tab is None:
            tab = self._tables[key] = _OracleTables()
        return tab

    def _barzdins_runs(self, term, oracle, tab) -> BarzdinsRuns:
        runs = tab.barz_runs.get(term.params)
        if runs is None:
            runs = tab.barz_runs[term.params] = BarzdinsRuns(*term.params,
                                                             oracle)
        return runs

    def _barzdins(self, term, plen, budget, oracle, tab):
        """Cached search; a hit at stage e answers every budget."""
        i, j = term.params
        key = (i, j, plen)
        hit = tab.barz.get(key)
        if hit is not None:
            res, searched = hit
            if res is not None:
                return res if res[1] <= budget else None
            if searched >= budget:
                return None
        res = self._barzdins_runs(term, oracle, tab).search(plen, budget)
        tab.barz[key] = (res, budget)
        return res

    def plain_outcome(self, q: str, budget: int,
                      oracle: Optional[OracleView] = None,
                      _tab: Optional[_OracleTables] = None):
        """(value, steps, touched) for q in plain mode; value None if no halt.

        ``touched`` is True when the run depends on the stage: a machine
        program reaching STAGE, or a marker term.
        """
        k, p = parse(q)
        if budget <= 0:
            return None, 0, False
        if k == LITERAL_INDEX:
            return word_to_nat(p), 1, False
        if k in (ISA_INDEX, SIBLING_INDEX):
            perm = self.perm ^ (SIBLING_PERM if k == SIBLING_INDEX else 0)
            P, L = (int(p, 2) if p else 0), len(p)
            st, v, s, touched = execute(P, L, 0, budget, oracle, perm, None)
            return (v if st == ST_HALTED else None), s, touched
        term = self.term_at(k)
        if term is None:
            return None, budget, False
        if term.kind == "barzdins":
            tab = _tab or self._tab(oracle)
            r = self._barzdins(term, len(p), budget, oracle, tab)
            return (None, budget, False) if r is None else (r[0], r[1], False)
        if term.kind == "least_member":
            r = least_member(word_to_nat(p), budget, oracle)
            return (None, budget, False) if r is None else (r[0], r[1], False)
        return None, budget, True

    def kt_total(self, x: int, t: int,
                 oracle: Optional[OracleView] = None) -> int:
        """K^t(x) with the literal description always available."""
        v = self.k_t(x, t, oracle).value
        return lit_length(x) if v is None else min(v, lit_length(x))

    def marker(self, term: Term, plen: int,
               oracle: Optional[OracleView] = None) -> MarkerRun:
        tab = self._tab(oracle)
        return MarkerRun(term.kind, term.params, plen,
                         lambda a, t: self.kt_total(a, t, oracle), oracle,
                         tab.xi)

    def branches(self, q: str, mode: str, budget: int,
                 oracle: Optional[OracleView] = None
                 ) -> list[tuple[int, int]]:
        """(need, value) of the halting stage branches of q in a mode.

        need is the least stage t at which the branch is visible: u <= t,
        its steps <= t and |q| <= t.
        """
        if mode == "plain":
            v, s, _ = self.plain_outcome(q, budget, oracle)
            return [] if v is None else [(max(s, len(q)), v)]
        v, s, touched = self.plain_outcome(q, budget, oracle)
        if not touched:
            return [] if v is None else [(max(s, len(q)), v)]
        k, p = parse(q)
        if k in (ISA_INDEX, SIBLING_INDEX):
            perm = self.perm ^ (SIBLING_PERM if k == SIBLING_INDEX else 0)
            P, L = (int(p, 2) if p else 0), len(p)
            out = []
            for u in range(budget + 1):
                st, val, s2, _ = execute(P, L, 0, budget, oracle, perm, u)
                if st == ST_HALTED:
                    out.append((max(u, s2, len(q)), val))
            return out
        term = self.term_at(k)
        if MODE_OF[term.kind] != mode:
            return []
        return [(max(s2, len(q)), a)
                for _, s2, a in self.marker(term, len(p), oracle).stages(budget)]

    def value(self, q: str, mode: str, t: int,
              oracle: Optional[OracleView] = None) -> Optional[int]:
        """Value of q at stage t in a mode (None when undefined so far)."""
        br = [v for n, v in self.branches(q, mode, t, oracle) if n <= t]
        if not br:
            return None
        return min(br) if mode == "min" else max(br)

    # -- tables --------------------------------------------------------------

    def descriptions(self):
        for n in range(self.L_max + 1):
            for c in range(1 << n):
                yield format(c, "b").zfill(n) if n else ""

    def _isa_batch(self, items, perm):
        if self.workers and self.workers > 1 and len(items) > 1024:
            size = -(-len(items) // (self.workers * 4))
            chunks = [items[a:a + size] for a in range(0, len(items), size)]
            with ProcessPoolExecutor(self.workers) as ex:
                parts = ex.map(_isa_chunk,
                               [(perm, self.T_max, c) for c in chunks])
                out = []
                for part in parts:
                    out.extend(part)
                return out
        return _isa_chunk((perm, self.T_max, items))

    def _plain_rows(self, oracle, tab):
        """q -> (value or None, steps, touched) at budget T_max."""
        if tab.plain_rows:
            return tab.plain_rows
        T = self.T_max
        rows = tab.plain_rows
        isa: dict[int, list[str]] = {ISA_INDEX: [], SIBLING_INDEX: []}
        for q in self.descriptions():
            k, _ = parse(q)
            if k in isa:
                isa[k].append(q)
            else:
                rows[q] = self.plain_outcome(q, T, oracle, tab)
        for k, qs in isa.items():
            perm = self.perm ^ (SIBLING_PERM if k == SIBLING_INDEX else 0)
            if oracle is None:
                items = []
                for q in qs:
                    p = parse(q)[1]
                    items.append(((int(p, 2) if p else 0), len(p), None))
                res = self._isa_batch(items, perm)
                for q, (st, v, s, touched) in zip(qs, res):
                    rows[q] = ((v if st == ST_HALTED else None), s, touched)
            else:
                for q in qs:
                    rows[q] = self.plain_outcome(q, T, oracle, tab)
        return rows

    def plain_table(self, oracle: Optional[OracleView] = None) -> _Frontier:
        tab = self._tab(oracle)
        if tab.plain is None:
            fr = _Frontier()
            for q, (v, s, _) in self._plain_rows(oracle, tab).items():
                if v is not None:
                    need = max(s, len(q))
                    if need <= self.T_max:
                        fr.add(v, need, len(q))
            fr.freeze()
            tab.plain = fr
        return tab.plain

    def mode_table(self, mode: str,
                   oracle: Optional[OracleView] = None) -> _ModeTable:
        if mode not in ("min", "max"):
            raise ValueError("mode must be 'min' or 'max'")
        tab = self._tab(oracle)
        mt = tab.modes.get(mode)
        if mt is not None:
            return mt
        T = self.T_max
        mt = _ModeTable(mode)
        rows = self._plain_rows(oracle, tab)
        self.plain_table(oracle)
        staged: dict[int, list[str]] = {ISA_INDEX: [], SIBLING_INDEX: []}
        marker_cache: dict = {}
        for q, (v, s, touched) in rows.items():
            if not touched:
                if v is not None:
                    mt.add(q, [(max(s, len(q)), v)])
                continue
            k, p = parse(q)
            if k in staged:
                staged[k].append(q)
                continue
            term = self.term_at(k)
            if MODE_OF[term.kind] != mode:
                continue
            key = (term, len(p))
            if key not in marker_cache:
                marker_cache[key] = list(
                    self.marker(term, len(p), oracle).stages(T))
            mt.add(q, [(max(s2, len(q)), a) for _, s2, a in marker_cache[key]])
        for k, qs in staged.items():
            perm = self.perm ^ (SIBLING_PERM if k == SIBLING_INDEX else 0)
            for q in qs:
                p = parse(q)[1]
                P, L = (int(p, 2) if p else 0), len(p)
                if oracle is None:
                    res = self._isa_batch([(P, L, u) for u in range(T + 1)], perm)
                else:
                    res = [execute(P, L, 0, T, oracle, perm, u)
                           for u in range(T + 1)]
                mt.add(q, [(max(u, s2, len(q)), val)
                           for u, (st, val, s2, _) in enumerate(res)
                           if st == ST_HALTED])
        tab.modes[mode] = mt
        return mt

    # -- estimators ----------------------------------------------------------

    def _stage(self, t: int) -> int:
        return min(t, self.T_max)

    def k_t(self, x: int, t: int,
            oracle: Optional[OracleView] = None) -> ComplexityEstimate:
        s = self._stage(t)
        v = self.plain_table(oracle).at(x, s)
        lit = lit_length(x)
        if lit > self.L_max and lit <= s:
            v = lit if v is None else min(v, lit)
        return ComplexityEstimate(v, t, True, False)

    def _mode_est(self, mode, x, t, oracle):
        s = self._stage(t)
        v = self.mode_table(mode, oracle).table_at(s).get(x)
        lit = lit_length(x)
        if lit > self.L_max and lit <= s:
            v = lit if v is None else min(v, lit)
        return ComplexityEstimate(v, t, False, s < self.T_max)

    def kmin_est(self, x: int, t: int,
                 oracle: Optional[OracleView] = None) -> ComplexityEstimate:
        return self._mode_est("min", x, t, oracle)

    def kmax_est(self, x: int, t: int,
                 oracle: Optional[OracleView] = None) -> ComplexityEstimate:
        return self._mode_est("max", x, t, oracle)

    def K(self, x: int, oracle: Optional[OracleView] = None) -> int:
        return self.kt_total(x, self.T_max, oracle)

    def Kmin(self, x: int, oracle: Optional[OracleView] = None) -> int:
        v = self.kmin_est(x, self.T_max, oracle).value
        return lit_length(x) if v is None else min(v, lit_length(x))

    def Kmax(self, x: int, oracle: Optional[OracleView] = None) -> int:
        v = self.kmax_est(x, self.T_max, oracle).value
        return lit_length(x) if v is None else min(v, lit_length(x))

    def count_below(self, n: int, t: int, limit: int,
                    oracle: Optional[OracleView] = None) -> int:
        """|{x < limit : K^t(x) < n}|."""
        s = self._stage(t)
        fr = self.plain_table(oracle)
        c = 0
        for v in fr.values():
            if v < limit:
                k = fr.at(v, s)
                if k is not None and k < n:
                    c += 1
        if n > self.L_max + 1:
            for x in range(limit):
                lit = lit_length(x)
                if lit > self.L_max and lit <= s and lit < n and fr.at(x, s) is None:
                    c += 1
        return c


# -- module-level conveniences -----------------------------------------------

_DEFAULT: dict = {}


def default_world() -> ClosedWorld:
    w = _DEFAULT.get("w")
    if w is None:
        w = _DEFAULT["w"] = ClosedWorld()
    return w


def oracular_world(world: ClosedWorld) -> ClosedWorld:
    """The same world with the oracle-reading catalog term removed."""
    return ClosedWorld(world.L_max, world.T_max, world.perm,
                       [t for t in world.catalog if t.kind != "least_member"],
                       world.workers)


def k_t(x: int, t: int, A: Optional[OracleView] = None,
        world: Optional[ClosedWorld] = None) -> ComplexityEstimate:
    return (world or default_world()).k_t(x, t, A)


def kmin_est(x: int, t: int, world: Optional[ClosedWorld] = None,
             A: Optional[OracleView] = None) -> ComplexityEstimate:
    return (world or default_world()).kmin_est(x, t, A)


def kmax_est(x: int, t: int, world: Optional[ClosedWorld] = None,
             A: Optional[OracleView] = None) -> ComplexityEstimate:
    return (world or default_world()).kmax_est(x, t, A)


def functional_k(x: int, A: Optional[OracleView], t: int,
                 world: Optional[ClosedWorld] = None) -> ComplexityEstimate:
    """Second-order complexity of x with the oracle as an argument.

    Up to T_max this reads the world's table for A. Beyond it the
    descriptions are searched by increasing length with budget t.
    """
    w = world or default_world()
    if t <= w.T_max:
        return w.k_t(x, t, A)
    lit = lit_length(x)
    for n in range(min(w.L_max, lit - 1) + 1):
        for c in range(1 << n):
            q = format(c, "b").zfill(n) if n else ""
            v, s, _ = w.plain_outcome(q, t, A.fresh() if A is not None else None)
            if v == x and max(s, n) <= t:
                return ComplexityEstimate(n, t, True, False)
    return ComplexityEstimate(lit if lit <= t else None, t, True, False)


def agreement_constant(world: ClosedWorld, oracles: Sequence[OracleView],
                       limit: int) -> int:
    """max |functional - oracular| over the given oracles and x < limit."""
    other = oracular_world(world)
    c = 0
    for A in oracles:
        for x in range(limit):
            c = max(c, abs(world.K(x, A) - other.K(x, A)))
    return c


@dataclass(frozen=True)
class Tables:
    range: int
    K: tuple
    Kmin: tuple
    Kmax: tuple
    K_jump1: Optional[tuple]


def closed_world_oracle(world: ClosedWorld, n: int,
                        jump: bool = True) -> Tables:
    """Exact K, Kmin, Kmax (and K relative to the stage-T_max jump) on [0, n)."""
    if n > RANGE_LIMIT:
        raise ResourceLimitError("range %d exceeds %d" % (n, RANGE_LIMIT))
    K = tuple(world.K(x) for x in range(n))
    Kmin = tuple(world.Kmin(x) for x in range(n))
    Kmax = tuple(world.Kmax(x) for x in range(n))
    Kj = None
    if jump:
        from .oracles import jump_stage
        A = jump_stage(1, world.T_max)
        Kj = tuple(world.K(x, A) for x in range(n))
    return Tables(n, K, Kmin, Kmax, Kj)


def table_csv(tables: Tables) -> str:
    lines = ["x,K,Kmin,Kmax,K_jump1"]
    for x in range(tables.range):
        kj = "" if tables.K_jump1 is None else str(tables.K_jump1[x])
        lines.append("%d,%d,%d,%d,%s" % (x, tables.K[x], tables.Kmin[x],
                                        tables.Kmax[x], kj))
    return "\n".join(lines) + "\n"


def table_metadata(world: ClosedWorld, tables: Tables) -> dict:
    return {"world": world.params(), "world_hash": world.hash,
            "constants": world.constants(), "range": tables.range}


def decomposition_constant(world: ClosedWorld, n: int) -> int:
    """max over x < n of K - 2 Kmin - Kmax."""
    return max(world.K(x) - 2 * world.Kmin(x) - world.Kmax(x)
               for x in range(n))


def incompressible_set(world: ClosedWorld, n_max: int) -> list[tuple[int, int]]:
    """For each n <= n_max, the least x <= 2^(n+1) - 1 with Kmax, Kmin >= n."""
    out = []
    for n in range(n_max + 1):
        for x in range(1 << (n + 1)):
            if world.Kmax(x) >= n and world.Kmin(x) >= n:
                out.append((n, x))
                break
    return out


def incompressible_count(world: ClosedWorld, n: int) -> int:
    return sum(1 for x in range(1 << (n + 1))
               if world.Kmax(x) >= n and world.Kmin(x) >= n)


def invariance_gap(u: ClosedWorld, v: ClosedWorld, n: int) -> int:
    """max over x < n of |K_u(x) - K_v(x)|."""
    return max(abs(u.K(x) - v.K(x)) for x in range(n))


def invariance_bound() -> int:
    """Prefix overhead k + 1 of running the sibling machine inside a wrapper."""
    return SIBLING_INDEX + 1


def brute_force(world: ClosedWorld, n: int,
                oracle: Optional[OracleView] = None) -> Tables:
    """K, Kmin, Kmax on [0, n) straight from the definitions.

    Every description is evaluated on its own with ``ClosedWorld.value``
    (no tables, no sharing of marker runs between descriptions).
    """
    fresh = ClosedWorld(world.L_max, world.T_max, world.perm, world.catalog)
    T = world.T_max
    best = {"plain": {}, "min": {}, "max": {}}
    for q in fresh.descriptions():
        for mode in best:
            v = fresh.value(q, mode, T, oracle)
            if v is not None and v < n:
                d = best[mode]
                if v not in d or len(q) < d[v]:
                    d[v] = len(q)
    cols = []
    for mode in ("plain", "min", "max"):
        cols.append(tuple(min(best[mode].get(x, lit_length(x)), lit_length(x))
                          for x in range(n)))
    return Tables(n, cols[0], cols[1], cols[2], None)

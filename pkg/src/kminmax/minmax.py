"""Min and max of staged partial functions.

A staged function phi(x, u) is read through its index i as
phi_i(pair(x, u)). Its min (resp. max) at x is the least (resp. largest)
value over all halting branches u. At stage t only branches u <= t that halt
within t steps are seen: the min estimate can only go down with t and the
max estimate can only go up. Neither is final at a finite stage.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

from . import _programs as lib
from ._codec import pair
from .enum import And, smn
from .machine import Halted, OracleView, run_index


@dataclass(frozen=True)
class StagedFnValue:
    defined: bool
    value: int
    stage: int
    provisional: bool = True


def _branches(i, x, t, oracle):
    for u in range(t + 1):
        r = run_index(i, pair(x, u), t, oracle)
        if isinstance(r, Halted):
            yield r.value


def min_eval(i: int, x: int, t: int,
             oracle: Optional[OracleView] = None) -> StagedFnValue:
    vals = list(_branches(i, x, t, oracle))
    if not vals:
        return StagedFnValue(False, 0, t)
    return StagedFnValue(True, min(vals), t)


def max_eval(i: int, x: int, t: int,
             oracle: Optional[OracleView] = None) -> StagedFnValue:
    vals = list(_branches(i, x, t, oracle))
    if not vals:
        return StagedFnValue(False, 0, t)
    return StagedFnValue(True, max(vals), t)


def approx_from_above(i: int) -> int:
    """Index of the approximation from above of min phi_i.

    The returned program on pair(x, t) first finds the branch that halts
    first in dovetail order (stage s = 1, 2, ..., branches u < s, budget s).
    For t >= 1 it then lowers that value to the least phi_i(x, v) with v < t
    halting within t - 1 steps.
    """
    return smn(lib.INDEX["XI"], i)


def compose_min(psi_idx: int, phi_idx: int) -> int:
    """Index of (x, v) -> theta(phi(x, fst v), snd v) where psi = min theta.

    Its min over v is psi(min phi) when psi is monotone increasing. That
    precondition is not checked.
    """
    return smn(lib.INDEX["COMPOSE_MIN"], pair(psi_idx, phi_idx))


def graph_code(i: int, mode: str = "min") -> And:
    """And code of {pair(x, y) : (min phi_i)(x) = y} (or max with mode='max')."""
    neg = lib.INDEX["GRAPH_NEG_MIN" if mode == "min" else "GRAPH_NEG_MAX"]
    return And(smn(lib.INDEX["GRAPH_POS"], i), smn(neg, i))


class XiApprox:
    """Native evaluation of the approx_from_above program for fixed (i, x).

    Stage s >= 2 sees branch v once v < s and its run halts within s - 1
    steps. Each branch is run once, rerun with a doubled budget only while
    it is still pending, so reading stages in order costs amortized
    constant work per stage. ``at(t)`` is None when no branch halts within
    the search cap.
    """

    def __init__(self, i: int, x: int, oracle: Optional[OracleView] = None,
                 cap: int = 1 << 16):
        self.i, self.x, self.oracle, self.cap = i, x, oracle, cap
        self._steps: dict[int, tuple[int, int]] = {}
        self._tried: dict[int, int] = {}
        self.base: Optional[int] = None
        self.base_stage: Optional[int] = None
        self._searched = False
        self._stage = 1
        self._cur: Optional[int] = None
        self._events: list[tuple[int, int]] = []
        self._pending: list[tuple[int, int]] = []
        self._added = 0
        self._change_at: list[int] = []
        self._change_val: list[int] = []

    def _run(self, u: int, budget: int):
        """(steps, value) of branch u if it halts within budget."""
        if u in self._steps:
            s, v = self._steps[u]
            return (s, v) if s <= budget else None
        if self._tried.get(u, 0) >= budget:
            return None
        r = run_index(self.i, pair(self.x, u), budget, self.oracle)
        if isinstance(r, Halted):
            self._steps[u] = (r.steps, r.value)
            return r.steps, r.value
        self._tried[u] = budget
        return None

    def _search_base(self):
        self._searched = True
        best = None
        u = 0
        while True:
            limit = self.cap if best is None else best[0] - 1
            if u + 1 > limit:
                break
            b = self._run(u, limit)
            if b is not None:
                e = max(u + 1, b[0])
                if best is None or e < best[0]:
                    best = (e, u, b[1])
            u += 1
        if best is not None:
            self.base_stage, _, self.base = best
            self._cur = self.base
            self._change_at.append(0)
            self._change_val.append(self.base)

    def _admit(self, v: int, budget: int):
        b = self._steps.get(v) or self._run(v, budget)
        if b is not None:
            heapq.heappush(self._events, (max(v + 1, b[0] + 1), b[1]))
        else:
            heapq.heappush(self._pending, (self._tried.get(v, budget), v))

    def at(self, t: int) -> Optional[int]:
        if not self._searched:
            self._search_base()
        if self.base is None:
            return None
        while self._stage < t:
            s = self._stage + 1
            while self._added < s:
                self._admit(self._added, max(2 * s, 16))
                self._added += 1
            while self._pending and self._pending[0][0] < s - 1:
                _, v = heapq.heappop(self._pending)
                self._admit(v, max(2 * self._tried[v], s - 1))
            while self._events and self._events[0][0] <= s:
                _, val = heapq.heappop(self._events)
                if val < self._cur:
                    self._cur = val
                    self._change_at.append(s)
                    self._change_val.append(val)
            self._stage = s
        return self._change_val[bisect_right(self._change_at, t) - 1]

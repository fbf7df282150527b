"""Oracle constructors and uniform relativization.

Three kinds of oracle: a finite set, a decider program run with a fixed
budget per query, and a stage of the first or second jump. The jump at
stage s holds e exactly when program(e) halts on input e within s steps
(level 2 runs that test relative to the level-1 stage-s oracle).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

from .enum import SetClassCode, Verdict, class_member
from .machine import Halted, OracleView, RunOutcome, run_index

__all__ = ["OracleSpec", "jump_stage", "decider", "finite", "uniform_phi",
           "relativize_class", "oracle_from_json"]


@dataclass(frozen=True)
class OracleSpec:
    kind: str                      # "finite" | "decider" | "jump"
    elements: tuple = ()
    index: int = 0
    budget_per_query: int = 0
    level: int = 1
    s: int = 0

    def view(self) -> OracleView:
        if self.kind == "finite":
            return finite(self.elements)
        if self.kind == "decider":
            return decider(self.index, self.budget_per_query)
        if self.kind == "jump":
            return jump_stage(self.level, self.s)
        raise ValueError("unknown oracle kind %r" % self.kind)

    def to_json(self) -> dict:
        if self.kind == "finite":
            return {"kind": "finite", "elements": list(self.elements)}
        if self.kind == "decider":
            return {"kind": "decider", "index": self.index,
                    "budget_per_query": self.budget_per_query}
        return {"kind": "jump", "level": self.level, "s": self.s}


def oracle_from_json(d) -> OracleSpec:
    if isinstance(d, str):
        d = json.loads(d)
    kind = d.get("kind")
    if kind == "finite":
        return OracleSpec("finite", elements=tuple(sorted(int(e) for e in d["elements"])))
    if kind == "decider":
        return OracleSpec("decider", index=int(d["index"]),
                          budget_per_query=int(d["budget_per_query"]))
    if kind == "jump":
        level = int(d["level"])
        if level not in (1, 2):
            raise ValueError("jump level must be 1 or 2")
        return OracleSpec("jump", level=level, s=int(d["s"]))
    raise ValueError("unknown oracle kind %r" % kind)


def finite(elements) -> OracleView:
    return OracleView.finite(elements)


def decider(index: int, budget_per_query: int) -> OracleView:
    """A = {n : program(index) halts on n with a nonzero value in budget}.

    A run that exceeds the budget answers 0 and sets flags["breach"].
    """
    flags: dict = {"breach": False}
    memo: dict[int, bool] = {}

    def member(n: int) -> bool:
        if n not in memo:
            r = run_index(index, n, budget_per_query)
            if isinstance(r, Halted):
                memo[n] = r.value != 0
            else:
                flags["breach"] = True
                memo[n] = False
        return memo[n]

    return OracleView(member, key=("decider", index, budget_per_query),
                      flags=flags)


_JUMP_MEMO: dict = {}


def _jump_member(level: int, s: int) -> Callable[[int], bool]:
    memo = _JUMP_MEMO.setdefault((level, s), {})
    inner = jump_stage(1, s) if level == 2 else None

    def member(e: int) -> bool:
        hit = memo.get(e)
        if hit is None:
            view = inner.fresh() if inner is not None else None
            hit = memo[e] = isinstance(run_index(e, e, s, view), Halted)
        return hit

    return member


def jump_stage(level: int, s: int) -> OracleView:
    """Stage s of the level-th jump (level 1 or 2)."""
    if level not in (1, 2):
        raise ValueError("jump level must be 1 or 2")
    return OracleView(_jump_member(level, s), key=("jump", level, s))


def uniform_phi(i: int, x: int, A: Optional[OracleView],
                t: int) -> RunOutcome:
    """phi^A_i(x) within t steps; the index space is the same for every A."""
    return run_index(i, x, t, A)


def relativize_class(c: SetClassCode,
                     A: Optional[OracleView]) -> Callable[[int, int], Verdict]:
    """Budgeted membership in the set coded by c, relative to A."""
    def member(x: int, t: int) -> Verdict:
        return class_member(c, x, t, A)
    return member

"""Acceptable enumeration of partial functions, staged r.e. sets and set codes.

Index i names the program ``nat_to_word(i)``; phi_i(x) runs it on the word of
x. W_i is the domain of phi_i. At stage t the set W_{i,t} holds the x < t on
which phi_i halts within t steps. An element x enters the standard
enumeration at stage e(x) = max(x + 1, steps); elements entering at the same
stage are listed in increasing order.
"""

from __future__ import annotations

import enum as _enum
import json
from dataclasses import dataclass
from itertools import product
from typing import Optional, Union

from . import _programs as lib
from ._codec import nat_to_word, pair, unpair, word_to_nat
from .machine import (SMN_OVERHEAD, UNIVERSAL_INDEX, UNIVERSAL_OVERHEAD,
                      Halted, OracleView, RunOutcome, run_index, smn_index)

__all__ = [
    "pair", "unpair", "word_to_nat", "nat_to_word", "program", "phi", "smn",
    "UNIVERSAL_INDEX", "SMN_OVERHEAD", "UNIVERSAL_OVERHEAD", "StagedSet",
    "w_members", "enumeration", "entry_stage", "thin_to_decidable",
    "TriState", "Verdict", "Sigma1", "Pi1", "And", "Or", "BoundedExists",
    "SetClassCode", "StructuralError", "class_member", "code_to_json",
    "code_from_json", "INDEX",
]

INDEX = lib.INDEX
MAX_TUPLES = 1 << 14


def program(i: int) -> str:
    return nat_to_word(i)


def phi(i: int, x: int, t: int, oracle: Optional[OracleView] = None,
        perm: int = 0) -> RunOutcome:
    """phi_i(x) with budget t, optionally relative to an oracle."""
    return run_index(i, x, t, oracle, perm)


def smn(i: int, z: int) -> int:
    """Index of x -> phi_i(pair(z, x)); costs SMN_OVERHEAD extra steps."""
    return smn_index(i, z)


def entry_stage(i: int, x: int, t: int,
                oracle: Optional[OracleView] = None) -> Optional[int]:
    """Stage at which x enters W_i, if that happens by stage t."""
    if x + 1 > t:
        return None
    r = phi(i, x, t, oracle)
    if isinstance(r, Halted):
        return max(x + 1, r.steps)
    return None


@dataclass(frozen=True)
class StagedSet:
    index: int
    stage: int
    elements: tuple


def enumeration(i: int, t: int, bound: Optional[int] = None,
                oracle: Optional[OracleView] = None) -> list[tuple[int, int]]:
    """Elements of W_{i,t} as (x, entry stage), in standard enumeration order."""
    top = t - 1 if bound is None else min(bound, t - 1)
    out = []
    for x in range(top + 1):
        e = entry_stage(i, x, t, oracle)
        if e is not None:
            out.append((x, e))
    out.sort(key=lambda xe: (xe[1], xe[0]))
    return out


def w_members(i: int, t: int, bound: int,
              oracle: Optional[OracleView] = None) -> StagedSet:
    """Sorted elements x <= bound of W_{i,t}."""
    elems = tuple(sorted(x for x, _ in enumeration(i, t, bound, oracle)))
    return StagedSet(i, t, elems)


def thin_to_decidable(i: int) -> tuple[int, int]:
    """Indices (j, j') with W_j the records of the enumeration of W_i.

    W_j keeps each element that exceeds every element enumerated before it,
    so it is increasing and decidable when infinite. W_j' enumerates its
    complement: x is listed once a record above x shows up and x is not one.
    """
    return smn(INDEX["THIN"], i), smn(INDEX["THIN_CO"], i)


def records(i: int, t: int, oracle: Optional[OracleView] = None) -> list[int]:
    """Native counterpart of the THIN program, at stage t."""
    out: list[int] = []
    for x, _ in enumeration(i, t, None, oracle):
        if not out or x > out[-1]:
            out.append(x)
    return out


# -- set class codes --------------------------------------------------------

class TriState(_enum.Enum):
    IN = "In"
    OUT = "Out"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    state: TriState
    unrefuted: bool
    capped: bool = False


class StructuralError(ValueError):
    pass


@dataclass(frozen=True)
class Sigma1:
    i: int


@dataclass(frozen=True)
class Pi1:
    i: int


@dataclass(frozen=True)
class And:
    """W_i intersected with the complement of W_k."""
    i: int
    k: int


@dataclass(frozen=True)
class Or:
    """W_i united with the complement of W_k."""
    i: int
    k: int


@dataclass(frozen=True)
class BoundedExists:
    """x such that some tuple of words of length <= phi_mu(|x|) puts
    pair(x, tuple code) into the inner set."""
    inner: object
    mu: int
    arity: int


SetClassCode = Union[Sigma1, Pi1, And, Or, BoundedExists]

_IN, _OUT, _UNK = TriState.IN, TriState.OUT, TriState.UNKNOWN


def _not(a: TriState) -> TriState:
    return _OUT if a is _IN else _IN if a is _OUT else _UNK


def _and(a: TriState, b: TriState) -> TriState:
    if a is _OUT or b is _OUT:
        return _OUT
    if a is _IN and b is _IN:
        return _IN
    return _UNK


def _or(a: TriState, b: TriState) -> TriState:
    return _not(_and(_not(a), _not(b)))


def tuple_code(values) -> int:
    """Right-nested pairing of a nonempty tuple."""
    values = list(values)
    code = values[-1]
    for v in reversed(values[:-1]):
        code = pair(v, code)
    return code


def _sigma(i, x, t, oracle) -> TriState:
    return _IN if isinstance(phi(i, x, t, oracle), Halted) else _UNK


def _eval(c, x, t, oracle, optimistic: bool):
    """Three-valued membership. Optimistic mode reads unresolved Pi parts as In."""
    if isinstance(c, Sigma1):
        return _sigma(c.i, x, t, oracle), False
    if isinstance(c, Pi1):
        s = _not(_sigma(c.i, x, t, oracle))
        return (_IN if optimistic and s is _UNK else s), False
    if isinstance(c, (And, Or)):
        a = _sigma(c.i, x, t, oracle)
        b = _not(_sigma(c.k, x, t, oracle))
        if optimistic and b is _UNK:
            b = _IN
        return (_and(a, b) if isinstance(c, And) else _or(a, b)), False
    if isinstance(c, BoundedExists):
        if c.arity < 1 or not isinstance(c.inner, And):
            raise StructuralError("bounded quantifier needs arity >= 1 and an And code")
        r = phi(c.mu, len(nat_to_word(x)), t, oracle)
        if not isinstance(r, Halted):
            return _UNK, False
        words = (1 << (r.value + 1)) - 1
        if words ** c.arity > MAX_TUPLES:
            return _UNK, True
        acc = _OUT
        for tup in product(range(words), repeat=c.arity):
            v, _ = _eval(c.inner, pair(x, tuple_code(tup)), t, oracle, optimistic)
            acc = _or(acc, v)
            if acc is _IN:
                break
        return acc, False
    raise StructuralError("unknown set code %r" % (c,))


def class_member(c: SetClassCode, x: int, t: int,
                 oracle: Optional[OracleView] = None) -> Verdict:
    """Budgeted membership of x in the set coded by c.

    In and Out are final. Unknown carries ``unrefuted``: whether x would be
    In if every pending co-r.e. condition turned out true.
    """
    state, capped = _eval(c, x, t, oracle, False)
    if state is _UNK:
        opt, _ = _eval(c, x, t, oracle, True)
        return Verdict(state, opt is _IN, capped)
    return Verdict(state, state is _IN, capped)


def code_to_json(c: SetClassCode) -> dict:
    if isinstance(c, (Sigma1, Pi1)):
        return {"kind": type(c).__name__, "i": c.i}
    if isinstance(c, (And, Or)):
        return {"kind": type(c).__name__, "i": c.i, "k": c.k}
    if isinstance(c, BoundedExists):
        return {"kind": "BoundedExists", "inner": code_to_json(c.inner),
                "mu": c.mu, "arity": c.arity}
    raise StructuralError("unknown set code %r" % (c,))


def code_from_json(d) -> SetClassCode:
    if isinstance(d, str):
        d = json.loads(d)
    kind = d.get("kind")
    if kind == "Sigma1":
        return Sigma1(int(d["i"]))
    if kind == "Pi1":
        return Pi1(int(d["i"]))
    if kind == "And":
        return And(int(d["i"]), int(d["k"]))
    if kind == "Or":
        return Or(int(d["i"]), int(d["k"]))
    if kind == "BoundedExists":
        return BoundedExists(code_from_json(d["inner"]), int(d["mu"]),
                             int(d["arity"]))
    raise StructuralError("unknown set code kind %r" % kind)

"""Up-to-a-constant comparisons and the set inclusions behind them.

Functions are exchanged as tables (sequences indexed by x) or as callables.
Nothing here decides an ordering; every report holds for its window only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from . import _programs as lib
from ._codec import pair
from .density import check_density
from .enum import smn
from .machine import Halted, OracleView, run_index
from .minmax import XiApprox

__all__ = [
    "CtComparison", "WindowMismatch", "ct_compare", "hat_transform",
    "tilde_transform", "hat", "tilde", "inclusion_check",
    "growth_modulus_minorant", "growth_minorant_values", "modulus_iterate",
    "left_compose_transform", "left_compose_check", "often_check",
    "as_function", "minpr_function",
]

FnLike = Union[int, Sequence[int], Callable[[int], Optional[int]]]
DEFAULT_BUDGET = 1 << 20


class WindowMismatch(ValueError):
    pass


class NotTotal(RuntimeError):
    """A program did not halt within its budget where a value was needed."""


def as_function(phi: FnLike, budget: int = DEFAULT_BUDGET,
                oracle: Optional[OracleView] = None) -> Callable[[int], int]:
    """Index, table or callable as a callable. Indices run with the budget."""
    if callable(phi):
        return phi
    if isinstance(phi, int):
        def run(z: int) -> int:
            r = run_index(phi, z, budget, oracle)
            if not isinstance(r, Halted):
                raise NotTotal("program %d did not halt on %d" % (phi, z))
            return r.value
        return run
    table = phi
    return lambda z: table[z]


def minpr_function(i: int, t: int,
                   oracle: Optional[OracleView] = None) -> Callable[[int], int]:
    """z -> the stage-t approximation from above of min phi_i at z."""
    cache: dict[int, XiApprox] = {}

    def f(z: int) -> int:
        xa = cache.get(z)
        if xa is None:
            xa = cache[z] = XiApprox(i, z, oracle, cap=max(t, 1 << 12))
        v = xa.at(t)
        if v is None:
            raise NotTotal("min phi_%d undefined at %d by stage %d" % (i, z, t))
        return v

    return f


# -- up-to-a-constant comparison ---------------------------------------------

@dataclass(frozen=True)
class CtComparison:
    window: tuple[int, int]
    best_constant: int
    direction: str                      # "LEQ" | "GEQ" | "Incomparable"
    leq_constant: int                   # least c with f <= g + c on the window
    geq_constant: int                   # least c with g <= f + c on the window
    strict_evidence: tuple = ()         # (c, x) with g(x) > f(x) + c

    @property
    def equal(self) -> bool:
        return self.leq_constant == 0 and self.geq_constant == 0


def ct_compare(f: Sequence[int], g: Sequence[int], N: int,
               bound: Optional[int] = None) -> CtComparison:
    """Compare f and g on [0, N] up to an additive constant.

    The direction is the one with the smaller constant (LEQ on ties).
    With ``bound`` set, both constants above it read as Incomparable.
    Strict evidence lists, for each c below the largest gap g - f, the
    first x with g(x) > f(x) + c.
    """
    if len(f) < N + 1 or len(g) < N + 1:
        raise WindowMismatch("tables must cover [0, %d]" % N)
    diffs = [f[x] - g[x] for x in range(N + 1)]
    leq = max(0, max(diffs))
    geq = max(0, -min(diffs))
    if bound is not None and leq > bound and geq > bound:
        direction, best = "Incomparable", min(leq, geq)
    elif leq <= geq:
        direction, best = "LEQ", leq
    else:
        direction, best = "GEQ", geq
    evidence = []
    for c in range(geq):
        x = next(x for x in range(N + 1) if g[x] > f[x] + c)
        evidence.append((c, x))
    return CtComparison((0, N), best, direction, leq, geq, tuple(evidence))


# -- translations ------------------------------------------------------------

def hat_transform(phi_idx: int, c: int) -> int:
    """Index of z -> max(0, phi(z) - c)."""
    return smn(lib.INDEX["HAT"], pair(phi_idx, c))


def tilde_transform(phi_idx: int, c: int) -> int:
    """Index of z -> max(0, phi(max(0, z - c)) - c)."""
    return smn(lib.INDEX["TILDE"], pair(phi_idx, c))


def hat(phi: Callable[[int], int], c: int) -> Callable[[int], int]:
    return lambda z: max(0, phi(z) - c)


def tilde(phi: Callable[[int], int], c: int) -> Callable[[int], int]:
    return lambda z: max(0, phi(max(0, z - c)) - c)


def _fn(t: FnLike) -> Callable[[int], int]:
    return as_function(t)


def inclusion_check(e: FnLike, f: FnLike, g: FnLike, h: Optional[FnLike],
                    phi: FnLike, c: int, N: int,
                    budget: int = DEFAULT_BUDGET) -> dict:
    """Check pointwise on [0, N]:

    (1) {x : f(x) < hat_c(phi)(g(x))} is inside {x : e(x) < phi(g(x))}
    (2) {x : f(x) < tilde_c(phi)(g(x))} is inside {x : e(x) < phi(h(x))}

    given e <= f + c (both) and g <= h + c with phi monotone (second).
    When phi is an index, the translated functions are read from the
    transform programs and cross-checked against the formulas.
    """
    E, F, G = _fn(e), _fn(f), _fn(g)
    H = _fn(h) if h is not None else None
    P = as_function(phi, budget)
    if isinstance(phi, int):
        Ph = as_function(hat_transform(phi, c), budget)
        Pt = as_function(tilde_transform(phi, c), budget)
    else:
        Ph, Pt = hat(P, c), tilde(P, c)
    xs = range(N + 1)
    pre = {"e_le_f_plus_c": all(E(x) <= F(x) + c for x in xs)}
    if H is not None:
        top = max(max(G(x), H(x)) for x in xs)
        pre["g_le_h_plus_c"] = all(G(x) <= H(x) + c for x in xs)
        pre["phi_monotone"] = all(P(z) <= P(z + 1) for z in range(top))
    routes = []
    if isinstance(phi, int):
        zs = sorted({G(x) for x in xs})
        routes = [z for z in zs if Ph(z) != hat(P, c)(z)
                  or Pt(z) != tilde(P, c)(z)]
    report = {"window": N, "c": c, "preconditions": pre,
              "route_mismatches": routes}
    if not all(pre.values()):
        report.update(status="precondition_violated", passed=False)
        return report
    lhs1 = [x for x in xs if F(x) < Ph(G(x))]
    bad1 = [x for x in lhs1 if not E(x) < P(G(x))]
    report["inclusion1"] = {"lhs_size": len(lhs1), "counterexamples": bad1}
    ok = not bad1 and not routes
    if H is not None:
        lhs2 = [x for x in xs if F(x) < Pt(G(x))]
        bad2 = [x for x in lhs2 if not E(x) < P(H(x))]
        report["inclusion2"] = {"lhs_size": len(lhs2), "counterexamples": bad2}
        ok = ok and not bad2
    report.update(status="checked", passed=ok)
    return report


# -- growth modulus ----------------------------------------------------------

def growth_modulus_minorant(phi_idx: int, xi_idx: int) -> int:
    """Index of psi(n) = largest N with xi(M) <= n for every 1 <= M <= N.

    When xi is a growth modulus of phi (phi(n) >= N once n >= xi(N)),
    psi is total, monotone, unbounded and psi <= phi.
    """
    return smn(lib.INDEX["GROWTH_MINORANT"], pair(phi_idx, xi_idx))


def growth_minorant_values(xi: FnLike, n: int,
                           budget: int = DEFAULT_BUDGET) -> list[int]:
    """psi(0..n) computed natively."""
    X = as_function(xi, budget)
    out, N, m = [], 0, 0
    nxt = X(1)
    for v in range(n + 1):
        while max(m, nxt) <= v:
            m = max(m, nxt)
            N += 1
            nxt = X(N + 1)
        out.append(N)
    return out


def modulus_iterate(phi: FnLike, xi: FnLike, n: int,
                    budget: int = DEFAULT_BUDGET) -> list[int]:
    """r(0) = phi(0), r(N + 1) = phi(xi(1 + r(N))) for N < n.

    Since phi(xi(M)) >= M, r(N) >= N: the sequence tends to infinity but
    need not stay below phi (phi(n) = n // 2 with xi(N) = 2N gives r = Id).
    """
    P, X = as_function(phi, budget), as_function(xi, budget)
    r = [P(0)]
    for _ in range(n):
        r.append(P(X(1 + r[-1])))
    return r


# -- left composition --------------------------------------------------------

def left_compose_transform(psi_idx: int, phi_idx: int) -> tuple[int, int, int]:
    """Indices of psi', alpha and zeta.

    psi'(z) = max(z, max psi[0..z]); alpha(z) = largest u with
    psi'(u) <= phi(z); zeta(z) = smallest s with psi' constant on
    [s, alpha(z)]. For a min-form phi, alpha and zeta called on pair(z, t)
    give the stage-t functions.
    """
    az = lib.INDEX["ALPHA_ZETA"]
    return (smn(lib.INDEX["PSI_PRIME"], psi_idx),
            smn(az, pair(pair(psi_idx, phi_idx), 0)),
            smn(az, pair(pair(psi_idx, phi_idx), 1)))


def _psi_prime_table(psi: Callable[[int], int], n: int) -> list[int]:
    out, m = [], 0
    for z in range(n + 1):
        m = max(m, psi(z))
        out.append(max(z, m))
    return out


def _alpha_zeta(pp: Callable[[int], int], v: int):
    """(alpha, zeta) for threshold v, or None when psi'(0) > v."""
    if pp(0) > v:
        return None
    u, s = 0, 0
    while pp(u + 1) <= v:
        if pp(u + 1) > pp(u):
            s = u + 1
        u += 1
    return u, s


def left_compose_check(psi: int, phi: int, N: int,
                       f: Optional[FnLike] = None, g: Optional[FnLike] = None,
                       budget: int = DEFAULT_BUDGET) -> dict:
    """Cross-check the transform programs against the formulas on [0, N].

    Checks u < zeta(z) => psi'(u) < phi(z) for all z <= N, and with f, g
    given, {x : f(x) < zeta(g(x))} is inside {x : psi'(f(x)) < phi(g(x))}.
    """
    pp_idx, a_idx, z_idx = left_compose_transform(psi, phi)
    PSI, PHI = as_function(psi, budget), as_function(phi, budget)
    cache: dict[int, int] = {}

    def pp(u):
        if u not in cache:
            cache[u] = max(u, max(PSI(v) for v in range(u + 1)))
        return cache[u]

    mism, cond = [], []
    zeta: dict[int, Optional[int]] = {}
    for z in range(N + 1):
        az = _alpha_zeta(pp, PHI(z))
        ra = run_index(a_idx, z, budget)
        rz = run_index(z_idx, z, budget)
        if az is None:
            if isinstance(ra, Halted) or isinstance(rz, Halted):
                mism.append(z)
            zeta[z] = None
            continue
        if not (isinstance(ra, Halted) and isinstance(rz, Halted)
                and (ra.value, rz.value) == az):
            mism.append(z)
        zeta[z] = az[1]
        cond += [(u, z) for u in range(az[1]) if not pp(u) < PHI(z)]
    pp_mism = []
    for u in range(N + 1):
        r = run_index(pp_idx, u, budget)
        if not isinstance(r, Halted) or r.value != pp(u):
            pp_mism.append(u)
    report = {"window": N, "route_mismatches": mism,
              "psi_prime_mismatches": pp_mism,
              "zeta_condition_failures": cond}
    ok = not mism and not pp_mism and not cond
    if f is not None and g is not None:
        F, G = _fn(f), _fn(g)
        bad = []
        for x in range(N + 1):
            gz = G(x)
            zt = zeta.get(gz)
            if zt is None and gz not in zeta:
                az = _alpha_zeta(pp, PHI(gz))
                zt = None if az is None else az[1]
            if zt is not None and F(x) < zt and not pp(F(x)) < PHI(gz):
                bad.append(x)
        report["inclusion_failures"] = bad
        ok = ok and not bad
    report["passed"] = ok
    return report


# -- often -------------------------------------------------------------------

def often_check(f: FnLike, g: FnLike, phi_family: Sequence, C_codes: Sequence,
                generator, scale: dict) -> dict:
    """Density of {x : f(x) < phi(g(x))} for each phi in the family.

    ``generator(phi)`` returns the code transfer used for that phi; the
    report records whether it was the same map for the whole family.
    Family members are indices, tables or callables.
    """
    F, G = _fn(f), _fn(g)
    rows, maps = [], []
    for k, phi in enumerate(phi_family):
        P = as_function(phi)
        gen = generator(phi)
        maps.append(gen)

        def Z(x, cap, P=P):
            try:
                return F(x) < P(G(x))
            except NotTotal:
                return False

        rep = check_density(C_codes, gen, Z, scale)
        rows.append({"phi": phi if isinstance(phi, int) else k,
                     "report": rep, "passed": rep["passed"]})
    ok = all(r["passed"] for r in rows)
    return {"rows": rows, "verdict": "Often" if ok else "NotOften",
            "uniform_transfer": all(m is maps[0] for m in maps),
            "scale": dict(scale)}

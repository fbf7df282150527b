"""Witness constructions for the density lemmas, with checkable certificates.

Every witness comes with a certificate holding the short description that
produces it, the run evidence for the lower bound it beats, and the set
membership evidence. ``verify_certificate`` rebuilds the world from the
certificate fields alone and re-executes all of it.

Witnesses exist in the limit; a finite run either settles by its stage cap
or reports StageExhausted / GuardUnstable. Neither outcome refutes anything.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence, Union

from . import _programs as lib
from ._codec import pair
from ._markers import Enumerator
from .complexity import (CATALOG_BASE, ClosedWorld, Term, parse,
                         decomposition_constant, theta_index)
from .enum import (Pi1, SetClassCode, Sigma1, TriState, class_member,
                   code_from_json, code_to_json, smn)
from .machine import Halted, OracleView, run_index
from .minmax import XiApprox, approx_from_above
from .oracles import OracleSpec, oracle_from_json

__all__ = [
    "StageExhausted", "GuardUnstable", "InvalidGrowthBound",
    "DensityCertificate", "GrowthBound", "barzdins_witness", "kmax_witness",
    "kmin_witness", "kminmax_witness", "theta_transform", "verify_certificate",
    "world_from_params", "dense_to_immune", "immune_to_dense",
    "diagonal_value", "mu_values", "check_density", "k_upper",
    "StagedSubset", "subset_of_code", "barzdins_generator",
    "threshold_generator", "identity_generator", "chain",
]

DEFAULT_CAP = 1 << 18
OracleArg = Union[None, OracleSpec, OracleView]


class StageExhausted(RuntimeError):
    """No witness appeared by the stage cap."""


class GuardUnstable(RuntimeError):
    """The marker was still moving at the stage cap."""


class InvalidGrowthBound(ValueError):
    """psi_m falls below the growth function on the checked prefix."""


@dataclass(frozen=True)
class GrowthBound:
    m: int
    checked_prefix: int = 16


@dataclass(frozen=True)
class DensityCertificate:
    lemma: str
    side: Optional[str]
    direction: Optional[str]
    mode: str
    witness: int
    membership_evidence: dict
    upper_bound_program: str
    upper_bound_trace: dict
    upper_bound: int
    lower_bound_value: int
    lower_bound_trace: dict
    threshold: int
    params: dict
    transfer: dict
    world: dict
    world_hash: str
    closed_world: dict
    growth_bound: Optional[dict] = None
    decomposition: Optional[dict] = None
    reduction: Optional[dict] = None

    def to_json(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d) -> "DensityCertificate":
        if isinstance(d, str):
            d = json.loads(d)
        return cls(**d)


# -- helpers -------------------------------------------------------------------

def _spec_and_view(A: OracleArg):
    """(json spec or None, fresh view or None)."""
    if A is None:
        return None, None
    if isinstance(A, OracleSpec):
        return A.to_json(), A.view()
    key = A.key
    if key is not None and key[0] == "finite":
        spec = OracleSpec("finite", elements=tuple(key[1]))
    elif key is not None and key[0] == "jump":
        spec = OracleSpec("jump", level=key[1], s=key[2])
    elif key is not None and key[0] == "decider":
        spec = OracleSpec("decider", index=key[1], budget_per_query=key[2])
    else:
        raise ValueError("oracle view has no replayable key")
    return spec.to_json(), A


def _view_from_spec(spec: Optional[dict]) -> Optional[OracleView]:
    return None if spec is None else oracle_from_json(spec).view()


def world_from_params(params: dict) -> ClosedWorld:
    catalog = [Term(kind, tuple(p)) for kind, p in params["catalog"]]
    return ClosedWorld(params["L_max"], params["T_max"], params["perm"],
                       catalog)


def _breached(view: Optional[OracleView]) -> bool:
    return bool(view is not None and view.flags.get("breach"))


def _world(world: Optional[ClosedWorld]) -> ClosedWorld:
    if world is None:
        from .complexity import default_world
        return default_world()
    return world


def _p_word(p: Union[str, int]) -> str:
    """Accept a bit word or a length (the all-zero word of that length)."""
    if isinstance(p, int):
        return "0" * p
    if any(ch not in "01" for ch in p):
        raise ValueError("p must be a binary word")
    return p


def _run_trace(i: int, x: int, budget: int, view) -> dict:
    r = run_index(i, x, budget, view)
    if isinstance(r, Halted):
        return {"kind": "run", "index": i, "input": x, "budget": budget,
                "value": r.value, "steps": r.steps}
    return {"kind": "run", "index": i, "input": x, "budget": budget,
            "value": None, "steps": budget}


def _xi_value(i: int, z: int, t: int, view, cap: int) -> Optional[int]:
    return XiApprox(i, z, view, cap=cap).at(t)


def theta_transform(phi_idx: int, c: int) -> int:
    """Min-form index of x -> min(x // 4, phi(max(0, (x - c) // 2)))."""
    return theta_index(phi_idx, c)


def k_upper(world: ClosedWorld, x: int, t: int,
            oracle: Optional[OracleView] = None) -> int:
    """Upper bound on K(x) witnessed by a description at budget t.

    The closed-world value (table plus literal) lowered by any plain catalog
    search term whose run at budget t returns x. Every value returned is the
    length of a description that really produces x, so the bound is sound.
    """
    best = world.K(x, oracle)
    tab = world._tab(oracle)
    for pos, term in enumerate(world.catalog):
        if term.kind != "barzdins":
            continue
        eta = CATALOG_BASE + pos
        plen = 0
        while eta + 1 + plen < best:
            r = world._barzdins(term, plen, t, oracle, tab)
            if r is not None and r[0] == x:
                best = eta + 1 + plen
                break
            plen += 1
    return best


# -- membership and growth ---------------------------------------------------

def _membership(side: str, idx: int, w: int, stage: int, view) -> dict:
    code = Sigma1(idx) if side == "Sigma" else Pi1(idx)
    v = class_member(code, w, stage, view)
    return {"code": code_to_json(code), "stage": stage,
            "verdict": v.state.value, "unrefuted": v.unrefuted}


def complement_points(k: int, n: int, T_max: int,
                      oracle: Optional[OracleView] = None) -> list[int]:
    """First n points x where program k runs T_max steps on x without halting."""
    out, x = [], 0
    while len(out) < n:
        r = run_index(k, x, T_max, oracle)
        if not isinstance(r, Halted):
            out.append(x)
        x += 1
    return out


def check_growth(g: GrowthBound, k: int, T_max: int,
                 oracle: Optional[OracleView] = None) -> dict:
    """psi_m(n) >= (n+1)-th complement point of W_k for n <= checked_prefix."""
    pts = complement_points(k, g.checked_prefix + 1, T_max, oracle)
    bad = []
    for n, x in enumerate(pts):
        r = run_index(g.m, n, T_max, oracle)
        if not isinstance(r, Halted) or r.value < x:
            bad.append(n)
    return {"m": g.m, "checked_prefix": g.checked_prefix, "points": pts,
            "valid": not bad, "failures": bad}


PIGEONHOLE_LIMIT = 1 << 18


def kmin_candidates(world: ClosedWorld, term: Term, plen: int,
                    view: Optional[OracleView], cap: int) -> Optional[list]:
    """The 2^(2|p|+1) points the Kmin marker starts above.

    Sigma side: the first points enumerated in W_j. Pi side: the first
    complement points of W_k in the closed world.
    None when there are more than PIGEONHOLE_LIMIT of them.
    """
    n = 1 << (2 * plen + 1)
    if n > PIGEONHOLE_LIMIT:
        return None
    if term.kind == "kmin_sigma":
        first = Enumerator(term.params[1], view).first(n, cap)
        return None if first is None else sorted(x for _, x in first)
    return complement_points(term.params[1], n, world.T_max, view)


def pigeonhole(world: ClosedWorld, term: Term, plen: int,
               view: Optional[OracleView], cap: int) -> dict:
    """Some candidate has Kmin_cw > 2|p|: only 2^(2|p|+1) - 1 shorter words."""
    cands = kmin_candidates(world, term, plen, view, cap)
    if cands is None:
        return {"checked": False, "candidates": 1 << (2 * plen + 1)}
    hits = [x for x in cands if world.Kmin(x, view) > 2 * plen]
    return {"checked": True, "candidates": len(cands),
            "largest_incompressible": max(hits) if hits else None,
            "holds": bool(hits)}


# -- constructions ------------------------------------------------------------

def _base_cert(world, lemma, side, direction, mode, term, p, w, stage,
               steps, spec, params):
    q = world.description(term, p)
    return dict(lemma=lemma, side=side, direction=direction, mode=mode,
                witness=w, upper_bound_program=q,
                upper_bound_trace={"mode": mode, "stage": stage,
                                   "value": w, "steps": steps},
                upper_bound=len(q), threshold=2 * len(p),
                params=dict(params, p=p, stage=stage, oracle=spec),
                world=world.params(), world_hash=world.hash)


def barzdins_witness(i: int, j: int, p: Union[str, int],
                     A: OracleArg = None, cap: int = DEFAULT_CAP,
                     world: Optional[ClosedWorld] = None) -> DensityCertificate:
    """First x of W_j (dovetail order) with phi_i(x) > 2|p|, with proof that
    K(x) <= |p| + eta + 1 through the description 0^eta 1 p."""
    world = _world(world)
    p = _p_word(p)
    spec, view = _spec_and_view(A)
    term = Term("barzdins", (i, j))
    eta = world.eta(term)
    r = world._barzdins(term, len(p), cap, view, world._tab(view))
    if r is None:
        raise StageExhausted("no x in W_%d with phi_%d(x) > %d by stage %d"
                             % (j, i, 2 * len(p), cap))
    w, e = r
    lb = _run_trace(i, w, e, view)
    base = _base_cert(world, "barzdins", "Sigma", None, "plain", term, p, w,
                      e, e, spec, {"i": i, "j": j})
    K = world.K(w, view)
    return DensityCertificate(
        **base,
        membership_evidence=_membership("Sigma", j, w, e, view),
        lower_bound_value=lb["value"], lower_bound_trace=lb,
        transfer={"eta": eta, "xi": None, "theta": None},
        closed_world={"K": K, "phi": lb["value"],
                      "description_in_world": len(base["upper_bound_program"])
                      <= world.L_max and e <= world.T_max},
    )


def _marker_cert(world, lemma, kind, side, direction, term, p, view, spec,
                 cap, params, extra_transfer=None):
    p = _p_word(p)
    run = world.marker(term, len(p), view)
    res = run.settle(cap, rest_from=world.T_max, lag=world.T_max)
    if res is None:
        raise StageExhausted("%s marker undefined by stage %d" % (kind, cap))
    if not res["settled"]:
        raise GuardUnstable("%s marker still moving at stage %d (guard %s)"
                            % (kind, cap, res["guard"]))
    i = term.params[0]
    mode = "min" if kind.startswith("kmin") else "max"
    w, u, steps = res["value"], res["last_stage"], res["last_steps"]
    xi = approx_from_above(i)
    base = _base_cert(world, lemma, side, direction, mode, term, p, w, steps,
                      steps, spec, params)
    lb_trace = {"kind": "xi", "index": xi, "phi": i, "k_t": res["k_t"],
                "stage": u, "value": res["guard"], "cap": cap}
    set_idx = term.params[1]
    member = _membership(side, set_idx, w, u if side == "Pi" else steps, view)
    Kcw = world.K(w, view)
    other = world.Kmin(w, view) if mode == "min" else world.Kmax(w, view)
    phi_K = _xi_value(i, Kcw, steps, view, cap)
    cw = {"K": Kcw, "K" + mode: other, "phi_of_K": phi_K,
          "upper_bound_below_phi_of_K": phi_K is not None
          and base["upper_bound"] < phi_K,
          "phi_of_K_above_threshold": phi_K is not None
          and phi_K > 2 * len(p)}
    if mode == "min":
        cw["pigeonhole"] = pigeonhole(world, term, len(p), view, cap)
    transfer = {"eta": world.eta(term), "xi": xi, "theta": None}
    if extra_transfer:
        transfer.update(extra_transfer)
    return base, dict(membership_evidence=member, lower_bound_value=res["guard"],
                      lower_bound_trace=lb_trace, transfer=transfer,
                      closed_world=cw)


def kmax_witness(i: int, j_or_k: int, side: str, p: Union[str, int],
                 A: OracleArg = None, cap: int = DEFAULT_CAP,
                 world: Optional[ClosedWorld] = None) -> DensityCertificate:
    """Movable-marker witness x in W_j (Sigma) or outside W_k (Pi) with
    Kmax(x) <= |p| + eta + 1 < phi_i(K(x)) in the limit."""
    world = _world(world)
    spec, view = _spec_and_view(A)
    kind = {"Sigma": "kmax_sigma", "Pi": "kmax_pi"}[side]
    term = Term(kind, (i, j_or_k))
    key = "j" if side == "Sigma" else "k"
    base, rest = _marker_cert(world, "kmax", kind, side, None, term, p, view,
                              spec, cap, {"i": i, key: j_or_k})
    return DensityCertificate(**base, **rest)


def kmin_witness(i: int, j_or_k: int, side: str, p: Union[str, int],
                 g: Optional[GrowthBound] = None, A: OracleArg = None,
                 cap: int = DEFAULT_CAP,
                 world: Optional[ClosedWorld] = None) -> DensityCertificate:
    """Movable-marker witness with Kmin(x) <= |p| + eta + 1 < phi_i(K(x)).

    The Pi side needs a growth bound psi_m for the complement of W_k; it is
    validated on its checked prefix before the marker runs.
    """
    world = _world(world)
    spec, view = _spec_and_view(A)
    growth = None
    if side == "Sigma":
        term = Term("kmin_sigma", (i, j_or_k))
        params = {"i": i, "j": j_or_k}
    elif side == "Pi":
        if g is None:
            raise ValueError("the Pi side needs a GrowthBound")
        growth = check_growth(g, j_or_k, world.T_max, view)
        if not growth["valid"]:
            raise InvalidGrowthBound("psi_%d below growth at n in %s"
                                     % (g.m, growth["failures"]))
        term = Term("kmin_pi", (i, j_or_k, g.m))
        params = {"i": i, "k": j_or_k, "m": g.m}
    else:
        raise ValueError("side must be Sigma or Pi")
    base, rest = _marker_cert(world, "kmin", term.kind, side, None, term, p,
                              view, spec, cap, params)
    return DensityCertificate(**base, **rest, growth_bound=growth)


def kminmax_witness(direction: str, i: int, j_or_k: int, p: Union[str, int],
                    g: Optional[GrowthBound] = None, c: int = 1,
                    A: OracleArg = None, cap: int = DEFAULT_CAP,
                    world: Optional[ClosedWorld] = None,
                    decomposition_range: int = 1 << 10) -> DensityCertificate:
    """Witness for Kmin < phi(Kmax) (MinBelowMax) or Kmax < phi(Kmin).

    Runs the Kmin (resp. Kmax) construction on theta = theta_transform(i, c)
    and records the K <= 2 Kmin + Kmax + c instance that turns
    Kmin < theta(K) into Kmin < phi(Kmax).
    MinBelowMax uses the Pi side with growth bound g; MaxBelowMin uses
    the Sigma side.
    """
    world = _world(world)
    spec, view = _spec_and_view(A)
    th = theta_transform(i, c)
    if direction == "MinBelowMax":
        if g is None:
            raise ValueError("MinBelowMax needs a GrowthBound")
        growth = check_growth(g, j_or_k, world.T_max, view)
        if not growth["valid"]:
            raise InvalidGrowthBound("psi_%d below growth" % g.m)
        term = Term("kmin_pi", (th, j_or_k, g.m))
        side, params = "Pi", {"i": i, "k": j_or_k, "m": g.m, "c": c}
    elif direction == "MaxBelowMin":
        growth = None
        term = Term("kmax_sigma", (th, j_or_k))
        side, params = "Sigma", {"i": i, "j": j_or_k, "c": c}
    else:
        raise ValueError("direction must be MinBelowMax or MaxBelowMin")
    base, rest = _marker_cert(world, "kminmax", term.kind, side, direction,
                              term, p, view, spec, cap, params,
                              {"theta": th, "phi": i, "c": c})
    w = base["witness"]
    K, Kmin, Kmax = world.K(w, view), world.Kmin(w, view), world.Kmax(w, view)
    measured = decomposition_constant(world, decomposition_range)
    dec = {"c_measured": measured, "range": decomposition_range, "c_theta": c,
           "K": K, "Kmin": Kmin, "Kmax": Kmax,
           "holds": K <= 2 * Kmin + Kmax + measured,
           "c_theta_covers": measured <= c}
    other = Kmax if direction == "MinBelowMax" else Kmin
    phi_other = _xi_value(i, other, base["upper_bound_trace"]["stage"], view,
                          cap)
    red = {"other": "Kmax" if direction == "MinBelowMax" else "Kmin",
           "other_value": other, "phi_of_other": phi_other,
           "holds": phi_other is not None
           and base["upper_bound"] < phi_other}
    return DensityCertificate(**base, **rest, growth_bound=growth,
                              decomposition=dec, reduction=red)


# -- verification --------------------------------------------------------------

def verify_certificate(cert: Union[DensityCertificate, dict, str]
                       ) -> list[tuple[str, bool, str]]:
    """Re-execute every piece of evidence; returns (check, ok, detail)."""
    if not isinstance(cert, DensityCertificate):
        cert = DensityCertificate.from_json(cert)
    out: list[tuple[str, bool, str]] = []

    def check(name, ok, detail=""):
        out.append((name, bool(ok), str(detail)))

    world = world_from_params(cert.world)
    check("world_hash", world.hash == cert.world_hash, world.hash)
    pr = cert.params
    view = _view_from_spec(pr.get("oracle"))
    p, q, w = pr["p"], cert.upper_bound_program, cert.witness
    stage = cert.upper_bound_trace["stage"]
    k, pp = parse(q)
    term = world.term_at(k)
    check("description_shape", pp == p and k == cert.transfer["eta"]
          and term is not None, "eta=%d" % k)
    check("upper_bound_is_length", cert.upper_bound == len(q))
    v = world.value(q, cert.mode, stage, view)
    check("upper_bound_reproduces_witness", v == w,
          "%s-mode value at stage %d is %s" % (cert.mode, stage, v))
    check("threshold", cert.threshold == 2 * len(p))

    lt = cert.lower_bound_trace
    if lt["kind"] == "run":
        r = run_index(lt["index"], lt["input"], lt["budget"], view)
        lb = r.value if isinstance(r, Halted) else None
        check("lower_bound_rerun", lt["input"] == w and lb == cert.lower_bound_value,
              lb)
    else:
        kt = world.kt_total(w, lt["stage"], view)
        lb = _xi_value(lt["phi"], kt, lt["stage"], view, lt["cap"])
        check("guard_rerun", kt == lt["k_t"] and lb == cert.lower_bound_value
              and approx_from_above(lt["phi"]) == lt["index"],
              "K^t=%d guard=%s" % (kt, lb))
    check("lower_bound_beats_threshold",
          cert.lower_bound_value > cert.threshold,
          "%d > %d" % (cert.lower_bound_value, cert.threshold))
    eta = cert.transfer["eta"]
    check("upper_bound_chain_1", cert.upper_bound <= len(p) + eta + 1)
    if len(p) > eta:
        check("upper_bound_chain_2", len(p) + eta + 1 <= 2 * len(p))

    ev = cert.membership_evidence
    code = code_from_json(ev["code"])
    mv = class_member(code, w, ev["stage"], view)
    if isinstance(code, Sigma1):
        check("membership", mv.state is TriState.IN, mv.state.value)
    else:
        check("membership", mv.state is not TriState.OUT and mv.unrefuted,
              mv.state.value)

    cw = cert.closed_world
    Kcw = world.K(w, view)
    check("closed_world_K", Kcw == cw["K"], Kcw)
    if cert.mode != "plain":
        i = pr["i"] if cert.lemma != "kminmax" else cert.transfer["theta"]
        phi_K = _xi_value(i, Kcw, stage, view, lt["cap"])
        check("closed_world_phi_of_K", phi_K == cw["phi_of_K"], phi_K)
        check("closed_world_upper_bound_below_phi_of_K",
              phi_K is not None and cert.upper_bound < phi_K,
              "%d < %s" % (cert.upper_bound, phi_K))
        if cert.mode == "min":
            km = world.Kmin(w, view)
            check("closed_world_Kmin", km == cw["Kmin"], km)
            if cw["pigeonhole"]["checked"]:
                ph = pigeonhole(world, term, len(p), view, lt["cap"])
                check("pigeonhole", ph == cw["pigeonhole"] and ph["holds"],
                      ph.get("largest_incompressible"))
        else:
            km = world.Kmax(w, view)
            check("closed_world_Kmax", km == cw["Kmax"], km)
    if cert.growth_bound is not None:
        gb = cert.growth_bound
        g = check_growth(GrowthBound(gb["m"], gb["checked_prefix"]),
                         pr["k"], world.T_max, view)
        check("growth_bound_prefix", g["valid"] and g == gb)
    if cert.decomposition is not None:
        dec = cert.decomposition
        K, Kmin, Kmax = world.K(w, view), world.Kmin(w, view), world.Kmax(w, view)
        check("decomposition_instance",
              (K, Kmin, Kmax) == (dec["K"], dec["Kmin"], dec["Kmax"])
              and K <= 2 * Kmin + Kmax + dec["c_measured"])
    if cert.reduction is not None:
        red = cert.reduction
        other = world.Kmax(w, view) if red["other"] == "Kmax" else world.Kmin(w, view)
        ph = _xi_value(pr["i"], other, stage, view, lt.get("cap", stage))
        check("reduction_inequality", other == red["other_value"]
              and ph is not None and cert.upper_bound < ph,
              "%d < %s" % (cert.upper_bound, ph))
    check("oracle_budget", not _breached(view))
    return out


# -- immunity and density ------------------------------------------------------

def dense_to_immune(lam: int) -> int:
    """Index of i -> the first element enumerated in W_{lam(i)}."""
    return smn(lib.INDEX["DIAG"], lam)


def immune_to_dense(d: int) -> int:
    """Index of i -> lambda(i) with W_{lambda(i)} = {mu(i, n) : n}.

    mu(i, 0) = d(i) and mu(i, n + 1) = d applied to an index of W_i minus
    the earlier values.
    """
    return smn(lib.INDEX["LAMBDA_GEN"], d)


def diagonal_value(lam: int, i: int, cap: int,
                   oracle: Optional[OracleView] = None) -> int:
    """The first element of W_{lam(i)}, found natively."""
    r = run_index(lam, i, cap, oracle)
    if not isinstance(r, Halted):
        raise StageExhausted("lambda(%d) undefined by stage %d" % (i, cap))
    first = Enumerator(r.value, oracle).first(1, cap)
    if first is None:
        raise StageExhausted("W_lambda(%d) empty by stage %d" % (i, cap))
    return first[0][1]


def mu_values(d: int, i: int, n: int, cap: int,
              oracle: Optional[OracleView] = None) -> list[int]:
    """mu(i, 0..n-1): each value is d on W_i minus the earlier ones."""
    out, s = [], 0
    for _ in range(n):
        idx = smn(lib.INDEX["REMOVE"], pair(i, s))
        r = run_index(d, idx, cap, oracle)
        if not isinstance(r, Halted):
            raise StageExhausted("mu(%d, %d) undefined by stage %d"
                                 % (i, len(out), cap))
        out.append(r.value)
        s = pair(r.value, s) + 1
    return out


@dataclass
class StagedSubset:
    """A set read at a finite scale: members <= B found by stage cap."""
    label: str
    members: Callable[[int, int], list]
    test: Optional[Callable[[int, int], bool]] = None

    def elements(self, B: int, cap: int) -> list[int]:
        return self.members(B, cap)

    def contains(self, x: int, cap: int) -> bool:
        if self.test is not None:
            return self.test(x, cap)
        return x in self.members(x, cap)


def subset_of_code(code: SetClassCode, oracle: Optional[OracleView] = None,
                   label: Optional[str] = None) -> StagedSubset:
    """Members are x with verdict In, or Unknown but not refuted."""
    def test(x, cap):
        v = class_member(code, x, cap, oracle)
        return v.state is TriState.IN or (v.state is TriState.UNKNOWN
                                          and v.unrefuted)

    def members(B, cap):
        return [x for x in range(B + 1) if test(x, cap)]

    return StagedSubset(label or json.dumps(code_to_json(code)), members, test)


def identity_generator(X) -> StagedSubset:
    return X if isinstance(X, StagedSubset) else subset_of_code(X)


def barzdins_generator(i: int, world: Optional[ClosedWorld] = None,
                       oracle: Optional[OracleView] = None):
    """X = W_j  ->  {alpha(i, j, p) : |p| > eta}, the Barzdins witnesses."""
    world = _world(world)

    def gen(X) -> Optional[StagedSubset]:
        if not isinstance(X, Sigma1):
            return None
        term = Term("barzdins", (i, X.i))
        eta = world.eta(term)
        tab = world._tab(oracle)

        def members(B, cap):
            # Witnesses above B cannot matter, so the scan stops at x = B.
            runs = world._barzdins_runs(term, oracle, tab)
            out, plen = [], eta + 1
            while True:
                r = runs.search(plen, cap, x_max=B)
                if r is None or r[0] > B:
                    return sorted(set(out))
                out.append(r[0])
                plen += 1

        return StagedSubset("barzdins(%d,%d)" % (i, X.i), members)

    return gen


def threshold_generator(i: int, oracle: Optional[OracleView] = None):
    """Y -> {first y of Y with phi_i(y) > 2n : n >= 0}, on staged subsets."""
    def gen(X) -> StagedSubset:
        Y = identity_generator(X)

        def members(B, cap):
            out = set()
            els = Y.elements(B, cap)
            n = 0
            while True:
                hit = None
                for y in els:
                    r = run_index(i, y, cap, oracle)
                    if isinstance(r, Halted) and r.value > 2 * n:
                        hit = y
                        break
                if hit is None:
                    return sorted(out)
                out.add(hit)
                n += 1

        return StagedSubset("threshold(%d)<%s>" % (i, Y.label), members)

    return gen


def chain(*gens):
    """Apply generators in turn: Y = g_k(... g_1(X))."""
    def gen(X):
        Y = X
        for g in gens:
            Y = g(Y)
            if Y is None:
                return None
        return Y
    return gen


def check_density(C_codes: Sequence, generator, Z: Callable[[int, int], bool],
                  scale: dict) -> dict:
    """Finite-scale density check: every X with >= N elements <= B gets a
    generated Y with >= N elements <= B, all inside X and Z at the cap."""
    N, B, cap = scale["min_elements"], scale["search_bound"], scale["stage_cap"]
    rows = []
    for code in C_codes:
        X = identity_generator(code)
        label = X.label
        count = 0
        x = 0
        while count < N and x <= B:
            if X.contains(x, cap):
                count += 1
            x += 1
        row = {"X": label, "qualifies": count >= N}
        if count < N:
            row.update(passed=True, note="fewer than N elements <= B")
            rows.append(row)
            continue
        Y = generator(code)
        if Y is None:
            row.update(passed=False, note="generator does not apply")
            rows.append(row)
            continue
        ys = Y.elements(B, cap)
        outside_x = [y for y in ys if not X.contains(y, cap)]
        outside_z = [y for y in ys if not Z(y, cap)]
        row.update(Y=Y.label, elements=ys, count=len(ys),
                   outside_X=outside_x, outside_Z=outside_z,
                   passed=len(ys) >= N and not outside_x and not outside_z)
        rows.append(row)
    return {"scale": dict(scale), "rows": rows,
            "passed": all(r["passed"] for r in rows)}

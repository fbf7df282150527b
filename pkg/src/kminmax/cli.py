"""Command line: closed-world tables, certificates, verification, invariant suite.

Exit codes: 0 pass, 1 verification failure, 2 resource limit, 3 bad input.
"""

from __future__ import annotations

import hashlib
import json
import random
import sys
from dataclasses import asdict, dataclass
from typing import Optional

import click

from . import _programs as lib
from .complexity import (ClosedWorld, ResourceLimitError, Term,
                         closed_world_oracle, incompressible_set,
                         decomposition_constant, table_csv, table_metadata)
from .density import (DensityCertificate, GrowthBound, GuardUnstable,
                      InvalidGrowthBound, StageExhausted, barzdins_witness,
                      kmax_witness, kmin_witness, kminmax_witness,
                      verify_certificate, world_from_params)
from .oracles import OracleSpec, oracle_from_json
from .orderings import inclusion_check

EXIT_OK, EXIT_FAIL, EXIT_LIMIT, EXIT_INPUT = 0, 1, 2, 3
I = lib.INDEX

SETS = {"evens": I["EVENS"], "odds": I["ODDS"], "squares": I["SQUARES"],
        "all": I["ALL"]}
PHIS = {"log2p2": I["LOG2P2"], "idmin": I["IDMIN"], "half": I["HALF"],
        "log2p2min": I["LOG2P2_MIN"]}
BOUNDS = {"linear": I["LINEAR_BOUND"], "quartic": I["QUARTIC_BOUND"]}


@dataclass(frozen=True)
class ExperimentConfig:
    L_max: int = 14
    T_max: int = 256
    range: int = 256
    oracle: Optional[dict] = None
    scale: tuple = (4, 1 << 20, 1 << 22)
    seed: int = 0

    def __post_init__(self):
        if min(self.L_max, self.T_max, self.range) < 1 or min(self.scale) < 1:
            raise ValueError("all bounds must be positive")

    @property
    def hash(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def world(self) -> ClosedWorld:
        return ClosedWorld(self.L_max, self.T_max)

    def oracle_spec(self) -> Optional[OracleSpec]:
        return None if self.oracle is None else oracle_from_json(self.oracle)


class BadInput(click.ClickException):
    exit_code = EXIT_INPUT


def _parse_scale(s: Optional[str]) -> tuple:
    if s is None:
        return ExperimentConfig.scale
    try:
        parts = tuple(int(v) for v in s.split(","))
    except ValueError:
        raise BadInput("--scale must be N,B,cap")
    if len(parts) != 3:
        raise BadInput("--scale must be N,B,cap")
    return parts


def _config(lmax, tmax, rng, oracle, scale, seed) -> ExperimentConfig:
    try:
        spec = None
        if oracle is not None:
            spec = oracle_from_json(oracle).to_json()
        return ExperimentConfig(lmax, tmax, rng, spec, _parse_scale(scale), seed)
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        raise BadInput(str(e))


def _emit(text: str, out: Optional[str]):
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _common(f):
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    f = click.option("--scale", default=None,
                     help="N,B,cap for finite-scale density checks.")(f)
    f = click.option("--oracle", default=None, help="OracleSpec JSON.")(f)
    f = click.option("--range", "rng", type=int, default=256,
                     show_default=True)(f)
    f = click.option("--tmax", type=int, default=256, show_default=True)(f)
    f = click.option("--lmax", type=int, default=14, show_default=True)(f)
    return f


@click.group()
def main():
    """Closed-world Kolmogorov complexity laboratory."""


@main.command()
@_common
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--out", default=None, help="Output path (metadata goes to"
              " OUT.meta.json for csv).")
def table(lmax, tmax, rng, oracle, scale, seed, fmt, out):
    """K, Kmin, Kmax and K relative to the stage-T_max jump on [0, range)."""
    cfg = _config(lmax, tmax, rng, oracle, scale, seed)
    try:
        world = cfg.world()
        tabs = closed_world_oracle(world, cfg.range)
    except ResourceLimitError as e:
        click.echo("resource limit: %s" % e, err=True)
        sys.exit(EXIT_LIMIT)
    meta = dict(table_metadata(world, tabs), config=asdict(cfg),
                config_hash=cfg.hash)
    extra = None
    if cfg.oracle is not None:
        A = cfg.oracle_spec().view()
        extra = [world.K(x, A) for x in range(cfg.range)]
    if fmt == "json":
        rows = [{"x": x, "K": tabs.K[x], "Kmin": tabs.Kmin[x],
                 "Kmax": tabs.Kmax[x], "K_jump1": tabs.K_jump1[x]}
                for x in range(tabs.range)]
        if extra is not None:
            for r, k in zip(rows, extra):
                r["K_A"] = k
        _emit(_dump({"metadata": meta, "rows": rows}), out)
        return
    text = table_csv(tabs)
    if extra is not None:
        lines = text.splitlines()
        lines[0] += ",K_A"
        for x in range(tabs.range):
            lines[x + 1] += ",%d" % extra[x]
        text = "\n".join(lines) + "\n"
    _emit(text, out)
    if out is not None:
        with open(out + ".meta.json", "w") as fh:
            fh.write(_dump(meta))


def _lengths(spec: Optional[str], lo: int, hi: int) -> list[int]:
    if spec is None:
        return list(range(lo, hi + 1))
    try:
        if "-" in spec:
            a, b = spec.split("-")
            return list(range(int(a), int(b) + 1))
        return [int(v) for v in spec.split(",")]
    except ValueError:
        raise BadInput("--lengths must look like 4-9 or 4,5,6")


@main.command()
@click.argument("lemma", type=click.Choice(["barzdins", "kmax", "kmin",
                                            "kminmax"]))
@_common
@click.option("--set", "set_name", type=click.Choice(sorted(SETS)),
              default=None, help="W_j (Sigma side) or W_k (Pi side).")
@click.option("--phi", "phi_name", type=click.Choice(sorted(PHIS)),
              default=None)
@click.option("--side", type=click.Choice(["Sigma", "Pi"]), default="Sigma",
              show_default=True)
@click.option("--direction", type=click.Choice(["MinBelowMax",
                                                "MaxBelowMin"]),
              default="MinBelowMax", show_default=True)
@click.option("--bound", "bound_name", type=click.Choice(sorted(BOUNDS)),
              default=None, help="Growth bound psi_m for the Kmin Pi side.")
@click.option("--lengths", default=None, help="|p| values, e.g. 4-9.")
@click.option("--cap", type=int, default=1 << 22, show_default=True)
@click.option("--out", default=None)
def certify(lemma, lmax, tmax, rng, oracle, scale, seed, set_name, phi_name,
            side, direction, bound_name, lengths, cap, out):
    """Build witness certificates and self-verify them."""
    cfg = _config(lmax, tmax, rng, oracle, scale, seed)
    try:
        world = cfg.world()
    except ResourceLimitError as e:
        click.echo("resource limit: %s" % e, err=True)
        sys.exit(EXIT_LIMIT)
    A = cfg.oracle_spec()
    if lemma == "barzdins":
        phi = PHIS[phi_name or "log2p2"]
        j = SETS[set_name or "evens"]
        eta = world.eta(Term("barzdins", (phi, j)))
        lens = _lengths(lengths, eta + 1, eta + 6)

        def build(n):
            return barzdins_witness(phi, j, n, A, cap, world)
    elif lemma in ("kmax", "kmin"):
        phi = PHIS[phi_name or "idmin"]
        idx = SETS[set_name or ("evens" if side == "Sigma" else "odds")]
        g = GrowthBound(BOUNDS[bound_name or "linear"])
        if lemma == "kmax":
            kind = "kmax_sigma" if side == "Sigma" else "kmax_pi"
            term = Term(kind, (phi, idx))
        elif side == "Sigma":
            term = Term("kmin_sigma", (phi, idx))
        else:
            term = Term("kmin_pi", (phi, idx, g.m))
        eta = world.eta(term)
        lens = _lengths(lengths, eta + 1, eta + 2)

        def build(n):
            if lemma == "kmax":
                return kmax_witness(phi, idx, side, n, A, cap, world)
            return kmin_witness(phi, idx, side, n, g, A, cap, world)
    else:
        phi = PHIS[phi_name or "idmin"]
        if direction == "MinBelowMax":
            idx = SETS[set_name or "odds"]
            g = GrowthBound(BOUNDS[bound_name or "quartic"])
        else:
            idx = SETS[set_name or "evens"]
            g = None
        from .complexity import theta_index
        th = theta_index(phi, 1)
        term = (Term("kmin_pi", (th, idx, g.m)) if g is not None
                else Term("kmax_sigma", (th, idx)))
        eta = world.eta(term)
        lens = _lengths(lengths, eta + 1, eta + 1)

        def build(n):
            return kminmax_witness(direction, phi, idx, n, g, 1, A, cap, world)

    entries, failed = [], False
    for n in lens:
        try:
            cert = build(n)
        except (StageExhausted, GuardUnstable) as e:
            entries.append({"p_length": n, "outcome": type(e).__name__,
                            "detail": str(e)})
            continue
        except InvalidGrowthBound as e:
            raise BadInput(str(e))
        checks = verify_certificate(cert)
        ok = all(c[1] for c in checks)
        failed |= not ok
        entries.append({"p_length": n, "outcome": "certificate",
                        "verified": ok, "certificate": cert.to_json(),
                        "failed_checks": [c[0] for c in checks if not c[1]]})
    doc = {"lemma": lemma, "config": asdict(cfg), "config_hash": cfg.hash,
           "world_hash": world.hash, "entries": entries}
    _emit(_dump(doc), out)
    summary = ", ".join("%d:%s" % (e["p_length"],
                                   ("ok" if e.get("verified") else "FAIL")
                                   if e["outcome"] == "certificate"
                                   else e["outcome"]) for e in entries)
    click.echo(summary, err=True)
    sys.exit(EXIT_FAIL if failed else EXIT_OK)


def _load_certs(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise BadInput("cannot read %s: %s" % (path, e))
    if isinstance(doc, dict) and "entries" in doc:
        items = [e["certificate"] for e in doc["entries"]
                 if e.get("outcome") == "certificate"]
    elif isinstance(doc, list):
        items = doc
    else:
        items = [doc]
    try:
        return [DensityCertificate.from_json(d) for d in items]
    except TypeError as e:
        raise BadInput("schema error: %s" % e)


@main.command()
@click.argument("cert_file")
@click.option("--lmax", type=int, default=None,
              help="Refuse certificates from any other world.")
@click.option("--tmax", type=int, default=None)
def verify(cert_file, lmax, tmax):
    """Re-execute all evidence of a certificate file."""
    certs = _load_certs(cert_file)
    failed = False
    for k, cert in enumerate(certs):
        w = cert.world
        if (lmax is not None and w.get("L_max") != lmax) or \
                (tmax is not None and w.get("T_max") != tmax):
            raise BadInput("certificate %d comes from another world" % k)
        try:
            if world_from_params(w).hash != cert.world_hash:
                raise BadInput("certificate %d: world hash mismatch" % k)
        except (KeyError, TypeError, ValueError) as e:
            raise BadInput("certificate %d: bad world: %s" % (k, e))
        checks = verify_certificate(cert)
        bad = [c for c in checks if not c[1]]
        failed |= bool(bad)
        click.echo("%d %s %s |p|=%d witness=%d: %s" % (
            k, cert.lemma, cert.side or "", len(cert.params["p"]),
            cert.witness, "PASS" if not bad else
            "FAIL " + ",".join(c[0] for c in bad)))
    sys.exit(EXIT_FAIL if failed else EXIT_OK)


def run_suite(cfg: ExperimentConfig) -> dict:
    """Module invariants at the configured scale."""
    world = cfg.world()
    rng = random.Random(cfg.seed)
    n = cfg.range
    tabs = closed_world_oracle(world, n, jump=False)
    rows = []

    def add(name, ok, counterexamples=(), exhausted=0):
        rows.append({"name": name, "passed": bool(ok),
                     "counterexamples": list(counterexamples)[:10],
                     "stage_exhausted": exhausted})

    add("normalization Kmin <= K and Kmax <= K",
        all(a <= k and b <= k for a, b, k in zip(tabs.Kmin, tabs.Kmax, tabs.K)),
        [x for x in range(n) if tabs.Kmin[x] > tabs.K[x]
         or tabs.Kmax[x] > tabs.K[x]])
    grid = sorted({1, 2, 4, 8, 16, 32, 64, 128, world.T_max, world.T_max + 1})
    bad = [(x, t) for x in range(n) for t, t2 in zip(grid, grid[1:])
           if world.kt_total(x, t2) > world.kt_total(x, t)]
    add("K^t non-increasing in t", not bad, bad)
    bad = [(k, t) for k in range(0, min(world.L_max, 10) + 1)
           for t in grid if world.count_below(k, t, n) > (1 << k) - 1]
    add("counting bound |{x : K^t(x) < n}| <= 2^n - 1", not bad, bad)
    inc = incompressible_set(world, 8)
    add("incompressible witnesses for n <= 8",
        [m for m, _ in inc] == list(range(9)), inc)
    c9 = decomposition_constant(world, 1 << 9)
    c10 = decomposition_constant(world, 1 << 10)
    add("K <= 2 Kmin + Kmax + c stable between 2^9 and 2^10", c9 == c10,
        [] if c9 == c10 else [(c9, c10)])
    bad = []
    for n_ in range(4):
        m = 1 << (2 * n_ + 1)
        lowest = sorted(range(n), key=lambda x: (tabs.Kmin[x], x))[:m]
        if m <= n and all(tabs.Kmin[x] <= 2 * n_ for x in lowest):
            bad.append(n_)
    add("Kmin pigeonhole for n <= 3", not bad, bad)
    trials, bad = 0, []
    for _ in range(20):
        steps = [rng.randint(0, 2) for _ in range(64)]
        phi = [sum(steps[:z + 1]) for z in range(64)]
        r = inclusion_check(tabs.K, tabs.K, tabs.Kmax,
                            [v + 1 for v in tabs.Kmax], phi, 1, n - 1)
        trials += 1
        if not r["passed"]:
            bad.append(phi[:8])
    add("inclusions (1), (2) with random monotone phi", not bad, bad)
    exhausted, bad = 0, []
    eta = world.eta(Term("barzdins", (I["LOG2P2"], I["EVENS"])))
    for plen in range(eta + 1, eta + 4):
        try:
            cert = barzdins_witness(I["LOG2P2"], I["EVENS"], plen,
                                    cfg.oracle_spec(), cfg.scale[2], world)
        except StageExhausted:
            exhausted += 1
            continue
        if not all(c[1] for c in verify_certificate(cert)):
            bad.append(plen)
    add("Barzdins certificates self-verify", not bad, bad, exhausted)
    return {"config": asdict(cfg), "config_hash": cfg.hash,
            "world_hash": world.hash, "checks": rows,
            "passed": all(r["passed"] for r in rows)}


@main.command()
@_common
@click.option("--out", default=None)
def suite(lmax, tmax, rng, oracle, scale, seed, out):
    """Run the invariant suite; JSON report."""
    cfg = _config(lmax, tmax, rng, oracle, scale, seed)
    try:
        report = run_suite(cfg)
    except ResourceLimitError as e:
        click.echo("resource limit: %s" % e, err=True)
        sys.exit(EXIT_LIMIT)
    _emit(_dump(report), out)
    for r in report["checks"]:
        click.echo("%s %s" % ("PASS" if r["passed"] else "FAIL", r["name"]),
                   err=True)
    sys.exit(EXIT_OK if report["passed"] else EXIT_FAIL)


if __name__ == "__main__":
    main()

import json
from pathlib import Path

import pytest

from kminmax.complexity import ClosedWorld

HERE = Path(__file__).parent


@pytest.fixture(scope="session")
def world():
    return ClosedWorld(14, 256)


@pytest.fixture(scope="session")
def halting_corpus():
    return json.loads((HERE / "corpus" / "halting.json").read_text())


@pytest.fixture(scope="session")
def setcodes_corpus():
    return json.loads((HERE / "corpus" / "setcodes.json").read_text())


CAP = 1 << 22


class CertCache:
    """Certificates built on first use and shared by every test module."""

    def __init__(self, world):
        from kminmax import _programs as lib
        self.world, self.I = world, lib.INDEX
        self._got = {}

    def get(self, lemma, which, n):
        key = (lemma, which, n)
        if key not in self._got:
            self._got[key] = self._build(lemma, which, n)
        return self._got[key]

    def _build(self, lemma, which, n):
        from kminmax.density import (GrowthBound, barzdins_witness,
                                     kmax_witness, kmin_witness,
                                     kminmax_witness)
        I, w = self.I, self.world
        if lemma == "barzdins":
            return barzdins_witness(I["LOG2P2"], I[which], n, cap=CAP, world=w)
        if lemma == "kmax":
            s = I["EVENS"] if which == "Sigma" else I["ODDS"]
            return kmax_witness(I["IDMIN"], s, which, n, cap=CAP, world=w)
        if lemma == "kmin":
            if which == "Sigma":
                return kmin_witness(I["IDMIN"], I["EVENS"], "Sigma", n,
                                    cap=CAP, world=w)
            return kmin_witness(I["IDMIN"], I["ODDS"], "Pi", n,
                                GrowthBound(I["LINEAR_BOUND"]), cap=CAP,
                                world=w)
        assert lemma == "kminmax" and which == "MinBelowMax"
        return kminmax_witness("MinBelowMax", I["IDMIN"], I["ODDS"], n,
                               GrowthBound(I["QUARTIC_BOUND"]), 1, cap=CAP,
                               world=w)


@pytest.fixture(scope="session")
def certs(world):
    return CertCache(world)


CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, title, detail = CRITERIA[n]
        terminalreporter.write_line("criterion %2d %s  %s  [%s]"
                                    % (n, "PASS" if ok else "FAIL", title,
                                       detail))

"""Native engines shared by the description wrapper and the certificates.

Everything here is a plain function of its arguments plus per-instance
caches; a run capped at C is always a prefix of the same run at a larger cap.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left
from typing import Callable, Iterator, Optional

from .machine import Halted, OracleView, run_index
from .minmax import XiApprox

KINDS = ("barzdins", "kmax_sigma", "kmax_pi", "kmin_sigma", "kmin_pi",
         "least_member")
MODE_OF = {"barzdins": "plain", "least_member": "plain",
           "kmax_sigma": "max", "kmax_pi": "max",
           "kmin_sigma": "min", "kmin_pi": "min"}


class Enumerator:
    """Entry stages e(x) = max(x + 1, steps) of the standard enumeration of W_j."""

    def __init__(self, j: int, oracle: Optional[OracleView] = None):
        self.j, self.oracle = j, oracle
        self._known: dict[int, int] = {}
        self._tried: dict[int, int] = {}

    def entry(self, x: int, limit: int) -> Optional[int]:
        """e(x) if x has entered by stage ``limit``, else None."""
        e = self._known.get(x)
        if e is not None:
            return e if e <= limit else None
        if x + 1 > limit or self._tried.get(x, 0) >= limit:
            return None
        r = run_index(self.j, x, limit, self.oracle)
        if isinstance(r, Halted):
            e = max(x + 1, r.steps)
            self._known[x] = e
            return e
        self._tried[x] = limit
        return None

    def member(self, x: int, t: int) -> bool:
        return self.entry(x, t) is not None

    def first(self, n: int, cap: int) -> Optional[list[tuple[int, int]]]:
        """The n earliest (e, x) of the enumeration, or None if not all by cap."""
        heap: list[tuple[int, int]] = []
        x = 0
        while True:
            if len(heap) == n:
                worst = (-heap[0][0], -heap[0][1])
                if (x + 1, x) > worst:
                    break
                limit = worst[0]
            else:
                limit = cap
            if x + 1 > limit:
                break
            e = self.entry(x, limit)
            if e is not None:
                heapq.heappush(heap, (-e, -x))
                if len(heap) > n:
                    heapq.heappop(heap)
            x += 1
        if len(heap) < n:
            return None
        return sorted((-ne, -nx) for ne, nx in heap)

    def next_after(self, a: int, ea: int, cap: int) -> Optional[tuple[int, int]]:
        """Earliest (e, x) listed after (ea, a) with x > a."""
        best = None
        x = a + 1
        while True:
            lb = (max(x + 1, ea), x)
            if best is not None and lb > best:
                break
            limit = best[0] if best is not None else cap
            if x + 1 > limit:
                break
            e = self.entry(x, limit)
            if e is not None and e >= ea and (best is None or (e, x) < best):
                best = (e, x)
            x += 1
        return best


def barzdins_search(i: int, j: int, plen: int, budget: int,
                    oracle: Optional[OracleView] = None
                    ) -> Optional[tuple[int, int]]:
    """First x of W_j, in dovetail order, with phi_i(x) > 2 plen.

    x counts at stage e = max(x + 1, steps of W_j on x, steps of phi_i on x).
    Returns (x, e) with e <= budget, or None.
    """
    best = None
    x = 0
    while True:
        limit = best[0] - 1 if best is not None else budget
        if x + 1 > limit:
            break
        rj = run_index(j, x, limit, oracle)
        if isinstance(rj, Halted):
            ri = run_index(i, x, limit, oracle)
            if isinstance(ri, Halted) and ri.value > 2 * plen:
                e = max(x + 1, rj.steps, ri.steps)
                if best is None or e < best[0]:
                    best = (e, x)
        x += 1
    if best is None:
        return None
    return best[1], best[0]


class BarzdinsRuns:
    """Memoized barzdins_search for one (i, j): runs are shared across |p|."""

    def __init__(self, i: int, j: int, oracle: Optional[OracleView] = None):
        self.i = i
        self.enum = Enumerator(j, oracle)
        self.oracle = oracle
        self._known: dict[int, tuple[int, int]] = {}
        self._tried: dict[int, int] = {}

    def _value(self, x: int, limit: int) -> Optional[tuple[int, int]]:
        hit = self._known.get(x)
        if hit is not None:
            return hit if hit[1] <= limit else None
        if self._tried.get(x, 0) >= limit:
            return None
        r = run_index(self.i, x, limit, self.oracle)
        if isinstance(r, Halted):
            self._known[x] = (r.value, r.steps)
            return self._known[x]
        self._tried[x] = limit
        return None

    def search(self, plen: int, budget: int,
               x_max: Optional[int] = None) -> Optional[tuple[int, int]]:
        """barzdins_search(i, j, plen, budget), memoized.

        With ``x_max`` only points x <= x_max are scanned; the answer is kept
        only when it is provably the unrestricted one (stage <= x_max + 1,
        which no larger x can beat), else None.
        """
        best = None
        x = 0
        while True:
            limit = best[0] - 1 if best is not None else budget
            if x + 1 > limit or (x_max is not None and x > x_max):
                break
            ej = self.enum.entry(x, limit)
            if ej is not None:
                vi = self._value(x, limit)
                if vi is not None and vi[0] > 2 * plen:
                    e = max(ej, vi[1])
                    if best is None or e < best[0]:
                        best = (e, x)
            x += 1
        if best is None or (x_max is not None and best[0] > x_max + 1
                            and x <= best[0] - 1):
            return None
        return best[1], best[0]


def least_member(start: int, budget: int,
                 oracle: Optional[OracleView]) -> Optional[tuple[int, int]]:
    """Least a >= start in the oracle set; one step per query."""
    if oracle is None:
        return None
    for n in range(budget):
        if oracle.query(start + n):
            return start + n, n + 1
    return None


KtFn = Callable[[int, int], int]


class MarkerRun:
    """Movable-marker recursion for one (kind, params, |p|).

    ``stages(cap)`` yields (u, steps, a(u)) for as long as a(u) is defined
    and steps <= cap. The guard at stage t is phi_xi(i)(K^t(a(t)), t) with
    K^t supplied by ``kt`` (a total approximation from above).
    """

    def __init__(self, kind: str, params: tuple, plen: int, kt: KtFn,
                 oracle: Optional[OracleView] = None,
                 xi_cache: Optional[dict] = None):
        if MODE_OF.get(kind) not in ("min", "max"):
            raise ValueError("not a marker kind: %r" % kind)
        self.kind, self.params, self.plen = kind, params, plen
        self.kt, self.oracle = kt, oracle
        self.xi_cache = {} if xi_cache is None else xi_cache
        self.i = params[0]
        self.enum = Enumerator(params[1], oracle)
        self.last_guard: Optional[int] = None

    def guard(self, a: int, t: int, cap: int) -> Optional[int]:
        z = self.kt(a, t)
        key = (self.i, z)
        xa = self.xi_cache.get(key)
        if xa is None or (xa.base is None and xa._searched and xa.cap < cap):
            xa = XiApprox(self.i, z, self.oracle, cap=cap)
            self.xi_cache[key] = xa
        return xa.at(t)

    def _start(self, cap):
        """(a(0), setup cost, extra state) or None when undefined by cap."""
        kind, n = self.kind, 1 << (2 * self.plen + 1)
        if kind == "kmax_sigma":
            first = self.enum.first(1, cap)
            if first is None:
                return None
            e0, a0 = first[0]
            return a0, e0, e0
        if kind == "kmax_pi":
            return 0, 0, None
        if kind == "kmin_sigma":
            z0 = self.enum.first(n, cap)
            if z0 is None:
                return None
            cost = max(e for e, _ in z0)
            zs = sorted(x for _, x in z0)
            return zs[-1], cost, zs
        r = run_index(self.params[2], n, cap, self.oracle)
        if not isinstance(r, Halted):
            return None
        return r.value, r.steps, None

    def stages(self, cap: int) -> Iterator[tuple[int, int, int]]:
        start = self._start(cap)
        if start is None:
            return
        a, cost, extra = start
        bar = 2 * self.plen
        u = 0
        while True:
            steps = max(u + 1, cost)
            if steps > cap:
                return
            yield u, steps, a
            g = self.guard(a, u, cap)
            self.last_guard = g
            if g is None:
                return
            kind = self.kind
            if kind == "kmax_sigma":
                if g <= bar:
                    nxt = self.enum.next_after(a, extra, cap)
                    if nxt is None:
                        return
                    extra, a = nxt
                    cost = max(cost, extra)
            elif kind == "kmin_sigma":
                if g <= bar:
                    pos = bisect_left(extra, a)
                    if pos == 0:
                        return
                    a = extra[pos - 1]
            else:
                if g <= bar or self.enum.member(a, u):
                    if kind == "kmax_pi":
                        a += 1
                    elif a == 0:
                        return
                    else:
                        a -= 1
            u += 1

    def at_rest(self, a: int, u: int, cap: int, lag: int = 0) -> bool:
        """The update at stage u leaves the marker where it is.

        On the Pi side rest also needs the program for W_k to run ``lag``
        steps on the marker without halting.
        """
        pi = self.kind in ("kmax_pi", "kmin_pi")
        if pi and lag and isinstance(
                run_index(self.enum.j, a, lag, self.oracle), Halted):
            return False
        g = self.guard(a, u, cap)
        if g is None or g <= 2 * self.plen:
            return False
        return not (pi and self.enum.member(a, u))

    def settle(self, cap: int, rest_from: Optional[int] = None,
               lag: int = 0) -> Optional[dict]:
        """Limit of the marker at stage cap with the evidence used to judge it.

        Returns None when the marker is undefined somewhere before the cap.
        The value is the min (kmin kinds) or max (kmax kinds) of all a(u)
        seen; the guard and membership are read at the last stage reached.
        With ``rest_from`` the run stops at the first stage u >= rest_from
        where the marker is at rest instead of running on to the cap.
        """
        best = None
        last = None
        for u, steps, a in self.stages(cap):
            last = (u, steps, a)
            if best is None:
                best = a
            elif self.kind.startswith("kmin"):
                best = min(best, a)
            else:
                best = max(best, a)
            if (rest_from is not None and u >= rest_from and best == a
                    and self.at_rest(a, u, cap, lag)):
                break
        if last is None:
            return None
        u, steps, a = last
        g = self.guard(a, u, cap)
        if g is None:
            return None
        member_k = (self.enum.member(a, u)
                    if self.kind in ("kmax_pi", "kmin_pi") else None)
        settled = g > 2 * self.plen and not member_k
        return {"value": best, "last_stage": u, "last_steps": steps,
                "marker": a, "guard": g, "k_t": self.kt(a, u),
                "in_wk": member_k, "settled": settled and best == a}

"""Time the compiled interpreter against the pure-Python one.

    python3 benchmarks/bench_kernel.py [--repeat 5]

Each workload is run on both backends; results must agree exactly.
"""

import argparse
import time

from kminmax import _programs as lib
from kminmax._codec import nat_to_bits, word_to_nat
from kminmax.complexity import ClosedWorld
from kminmax.machine import BACKEND, assemble, execute

I = lib.INDEX


def _workloads():
    loop = nat_to_bits(word_to_nat(assemble([":top", "INC", ("JMP", "top")])))
    evens = nat_to_bits(I["EVENS"])
    squares = nat_to_bits(I["SQUARES"])
    log2p2 = nat_to_bits(I["LOG2P2"])
    return {
        "counting loop, budget 2^22": [(loop, 0, 1 << 22)],
        "evens on 0..4095": [(evens, x, 1 << 12) for x in range(4096)],
        "squares on 0..2047": [(squares, x, 1 << 14) for x in range(2048)],
        "log2p2 on 0..8191": [(log2p2, x, 64) for x in range(8192)],
        "all words <= 12 bits, t=256": [((P, L), 5, 256)
                                        for L in range(13)
                                        for P in range(1 << L)],
    }


def _time(jobs, backend, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = [execute(P, L, x, b, backend=backend) for (P, L), x, b in jobs]
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print("default backend: %s" % BACKEND)
    print("%-30s %10s %10s %8s" % ("workload", "cython s", "python s", "ratio"))
    for name, jobs in _workloads().items():
        tc, rc = _time(jobs, "cython", args.repeat)
        tp, rp = _time(jobs, "python", args.repeat)
        assert rc == rp, "backends disagree on %s" % name
        print("%-30s %10.4f %10.4f %7.1fx" % (name, tc, tp, tp / tc))
    t0 = time.perf_counter()
    ClosedWorld(12, 256).plain_table()
    print("closed world L_max=12 plain table: %.2f s" % (time.perf_counter() - t0))


if __name__ == "__main__":
    main()

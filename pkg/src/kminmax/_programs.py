"""Hand-written machine programs and the small structured compiler behind them.

Programs keep their variables in a frame at the bottom of the stack: variable
0 is the input and the remaining variables start at 0. Expressions push one
value; statements leave the frame unchanged. Generic programs take their
parameters through s-m-n, so their input is ``pair(params, x)``.

Finite sets handed to REMOVE use list codes: 0 is empty and
``cons(a, s) = pair(a, s) + 1``.
"""

from __future__ import annotations

import itertools

from ._codec import pair, unpair, word_to_nat
from .machine import assemble

_BINARY = {"ADD", "SUB", "MUL", "DIV", "MOD", "LT", "EQ", "PAIR", "MAX",
           "MIN"}
_UNARY = {"NOT", "DEC", "LOG2", "ISQRT"}
_labels = itertools.count()


def _fresh() -> str:
    return "L%d" % next(_labels)


def _expr(e, d: int, nv: int) -> list:
    if isinstance(e, int):
        return [("LIT", e)]
    head = e[0]
    if head == "v":
        return [("PICK", d + nv - 1 - e[1])]
    if head == "stage":
        return ["STAGE"]
    if head == "query":
        return _expr(e[1], d, nv) + ["QUERY"]
    if head == "inc":
        return _expr(e[1], d, nv) + ["INC"]
    if head in _UNARY:
        return _expr(e[1], d, nv) + [head]
    if head == "fst":
        return _expr(e[1], d, nv) + ["UNPAIR", "DROP"]
    if head == "snd":
        return _expr(e[1], d, nv) + ["UNPAIR", "SWAP", "DROP"]
    if head in _BINARY:
        return _expr(e[1], d, nv) + _expr(e[2], d + 1, nv) + [head]
    if head == "ne":
        return _expr(e[1], d, nv) + _expr(e[2], d + 1, nv) + ["EQ", "NOT"]
    if head == "gt":
        return _expr(e[2], d, nv) + _expr(e[1], d + 1, nv) + ["LT"]
    if head == "le":
        return _expr(e[2], d, nv) + _expr(e[1], d + 1, nv) + ["LT", "NOT"]
    if head == "ge":
        return _expr(e[1], d, nv) + _expr(e[2], d + 1, nv) + ["LT", "NOT"]
    if head == "and":
        return (_expr(e[1], d, nv) + ["NOT", "NOT"]
                + _expr(e[2], d + 1, nv) + ["NOT", "NOT", "MUL"])
    if head == "or":
        return (_expr(e[1], d, nv) + _expr(e[2], d + 1, nv)
                + ["ADD", "NOT", "NOT"])
    if head == "eval":
        return (_expr(e[1], d, nv) + _expr(e[2], d + 1, nv)
                + _expr(e[3], d + 2, nv) + ["EVAL"])
    if head == "call":
        return (_expr(e[1], d, nv) + _expr(e[2], d + 1, nv)
                + [("LIT", 0), "EVAL", "DEC"])
    if head == "smn":
        return _expr(e[1], d, nv) + _expr(e[2], d + 1, nv) + ["SMN"]
    raise ValueError("bad expression %r" % (e,))


def _stmts(body, nv: int) -> list:
    out = []
    for s in body:
        head = s[0]
        if head == "set":
            k = s[1]
            out += _expr(s[2], 0, nv)
            depth = nv - k
            out += [("ROLL", depth), "DROP"]
            out += [("ROLL", depth - 1)] * (depth - 1)
        elif head == "while":
            top, end = _fresh(), _fresh()
            out += [":" + top] + _expr(s[1], 0, nv) + [("JZ", end)]
            out += _stmts(s[2], nv) + [("JMP", top), ":" + end]
        elif head == "if":
            other, end = _fresh(), _fresh()
            out += _expr(s[1], 0, nv) + [("JZ", other)] + _stmts(s[2], nv)
            out += [("JMP", end), ":" + other]
            out += _stmts(s[3] if len(s) > 3 else [], nv) + [":" + end]
        elif head == "halt":
            out += _expr(s[1], 0, nv) + ["HALT"]
        elif head == "diverge":
            lab = _fresh()
            out += [":" + lab, ("JMP", lab)]
        else:
            raise ValueError("bad statement %r" % (s,))
    return out


def compile_program(nv: int, body) -> str:
    """Compile a structured body using nv frame variables (v0 is the input)."""
    return assemble([("LIT", 0)] * (nv - 1) + _stmts(body, nv))


def V(k):
    return ("v", k)


# -- base programs ----------------------------------------------------------

EVENS = assemble([("LIT", 2), "MOD", ("JZ", "ok"), ":no", ("JMP", "no"), ":ok"])
ODDS = assemble([("LIT", 2), "MOD", ("JZ", "no"), ("JMP", "ok"), ":no",
                 ("JMP", "no"), ":ok"])
SQUARES = assemble(["DUP", "ISQRT", "DUP", "MUL", "EQ", ("JZ", "no"),
                    ("JMP", "ok"), ":no", ("JMP", "no"), ":ok"])
ALL = ""
EMPTY = assemble([":no", ("JMP", "no")])
LOG2P2 = assemble(["INC", "INC", "LOG2"])
IDMIN = assemble(["UNPAIR", "DROP"])
IDENTITY = ""
HALF = assemble([("LIT", 2), "DIV"])
DOUBLE = assemble(["DUP", "ADD"])
# psi(n) = 2n + 2
LINEAR_BOUND = assemble(["DUP", "ADD", "INC", "INC"])
# psi(n) = (2n + 2)^4
QUARTIC_BOUND = assemble(["DUP", "ADD", "INC", "INC", "DUP", "MUL", "DUP",
                          "MUL"])
# log2(z + 2) in min form: pair(z, t) -> floor(log2(z + 2))
LOG2P2_MIN = assemble(["UNPAIR", "DROP", "INC", "INC", "LOG2"])
# z // 2 in min form
HALF_MIN = assemble(["UNPAIR", "DROP", ("LIT", 2), "DIV"])
# pair(z, t) -> z + 1
PLUS1_MIN = assemble(["UNPAIR", "DROP", "INC"])
# pair(x, u): u = 0 -> 5, u = 1 -> 3, otherwise diverge
TWO_BRANCH = compile_program(2, [
    ("set", 1, ("snd", V(0))),
    ("if", ("EQ", V(1), 0), [("halt", 5)]),
    ("if", ("EQ", V(1), 1), [("halt", 3)]),
    ("diverge",),
])
# pair(x, u) -> diverges everywhere
NOWHERE_MIN = EMPTY


def _enters(i, y, s):
    """y enters the standard enumeration of W_i exactly at stage s.

    The second run gets budget max(s - 1, 1): budget 0 means unbounded to
    EVAL, and at s = 1 the first disjunct already decides.
    """
    return ("and", ("eval", i, y, s),
            ("or", ("EQ", ("inc", y), s),
             ("NOT", ("eval", i, y, ("MAX", ("DEC", s), 1)))))


# -- generic programs (parameters through s-m-n) ----------------------------

# XI: input pair(i, pair(x, t)). Approximation of min phi_i from above.
XI = compile_program(12, [
    ("set", 1, ("fst", V(0))),
    ("set", 2, ("snd", V(0))),
    ("set", 3, ("fst", V(2))),
    ("set", 4, ("snd", V(2))),
    ("set", 5, 1),
    ("set", 6, 0),
    ("while", ("NOT", V(6)), [
        ("set", 7, 0),
        ("while", ("and", ("LT", V(7), V(5)), ("NOT", V(6))), [
            ("set", 8, ("eval", V(1), ("PAIR", V(3), V(7)), V(5))),
            ("if", V(8), [("set", 6, 1), ("set", 9, ("DEC", V(8)))]),
            ("set", 7, ("inc", V(7))),
        ]),
        ("set", 5, ("inc", V(5))),
    ]),
    ("if", ("LT", 1, V(4)), [
        ("set", 10, 0),
        ("while", ("LT", V(10), V(4)), [
            ("set", 11, ("eval", V(1), ("PAIR", V(3), V(10)), ("DEC", V(4)))),
            ("if", ("and", V(11), ("LT", ("DEC", V(11)), V(9))),
             [("set", 9, ("DEC", V(11)))]),
            ("set", 10, ("inc", V(10))),
        ]),
    ]),
    ("halt", V(9)),
])

# COMPOSE_MIN: input pair(pair(psi, phi), pair(x, v)).
COMPOSE_MIN = compile_program(5, [
    ("set", 1, ("fst", V(0))),
    ("set", 2, ("snd", V(0))),
    ("set", 3, ("snd", V(2))),
    ("set", 4, ("call", ("snd", V(1)), ("PAIR", ("fst", V(2)), ("fst", V(3))))),
    ("halt", ("call", ("fst", V(1)), ("PAIR", V(4), ("snd", V(3))))),
])

# THETA: input pair(pair(i, c), pair(x, t)).
THETA = compile_program(4, [
    ("set", 1, ("fst", V(0))),
    ("set", 2, ("snd", V(0))),
    ("set", 3, ("fst", V(2))),
    ("halt", ("MIN", ("DIV", V(3), 4),
              ("call", ("fst", V(1)),
               ("PAIR", ("DIV", ("SUB", V(3), ("snd", V(1))), 2),
                ("snd", V(2)))))),
])

# HAT: input pair(pair(i, c), z) -> max(0, phi_i(z) - c).
HAT = compile_program(2, [
    ("set", 1, ("fst", V(0))),
    ("halt", ("SUB", ("call", ("fst", V(1)), ("snd", V(0))), ("snd", V(1)))),
])

# TILDE: input pair(pair(i, c), z) -> max(0, phi_i(max(0, z - c)) - c).
TILDE = compile_program(2, [
    ("set", 1, ("fst", V(0))),
    ("halt", ("SUB", ("call", ("fst", V(1)),
                      ("SUB", ("snd", V(0)), ("snd", V(1)))),
              ("snd", V(1)))),
])

# GROWTH_MINORANT: input pair(pair(phi, xi), n) -> the largest N with
# xi(M) <= n for all 1 <= M <= N (0 if none). Below phi when xi is a growth
# modulus of phi, monotone, and unbounded.
GROWTH_MINORANT = compile_program(5, [
    ("set", 1, ("snd", ("fst", V(0)))),
    ("set", 2, ("snd", V(0))),
    ("set", 3, 0),
    ("set", 4, 0),
    ("while", 1, [
        ("set", 4, ("MAX", V(4), ("call", V(1), ("inc", V(3))))),
        ("if", ("LT", V(2), V(4)), [("halt", V(3))]),
        ("set", 3, ("inc", V(3))),
    ]),
])

# MODULUS_ITERATE: input pair(pair(phi, xi), N); r(0) = phi(0),
# r(N + 1) = phi(xi(1 + r(N))).
MODULUS_ITERATE = compile_program(6, [
    ("set", 1, ("fst", ("fst", V(0)))),
    ("set", 2, ("snd", ("fst", V(0)))),
    ("set", 3, ("snd", V(0))),
    ("set", 4, ("call", V(1), 0)),
    ("set", 5, 0),
    ("while", ("LT", V(5), V(3)), [
        ("set", 4, ("call", V(1), ("call", V(2), ("inc", V(4))))),
        ("set", 5, ("inc", V(5))),
    ]),
    ("halt", V(4)),
])

# PSI_PRIME: input pair(psi, z) -> max(z, max{psi(u) : u <= z}).
PSI_PRIME = compile_program(4, [
    ("set", 1, ("fst", V(0))),
    ("set", 2, ("snd", V(0))),
    ("set", 3, 0),
    ("while", ("le", V(3), V(2)), [
        ("set", 2, ("MAX", V(2), ("call", V(1), V(3)))),
        ("set", 3, ("inc", V(3))),
    ]),
    ("halt", V(2)),
])

# ALPHA_ZETA: input pair(pair(pair(psi, phi), mode), arg).
# mode 1 returns zeta, mode 0 returns alpha. A min-form phi is handled by
# passing arg = pair(z, t), which yields the stage-t functions of the pair.
ALPHA_ZETA = compile_program(10, [
    ("set", 1, ("fst", ("fst", ("fst", V(0))))),
    ("set", 2, ("snd", ("fst", ("fst", V(0))))),
    ("set", 3, ("snd", ("fst", V(0)))),
    ("set", 4, ("snd", V(0))),
    ("set", 5, ("call", V(2), V(4))),
    # v6: psi'(u), v7: u, v8: first u with the current psi' value
    ("set", 6, ("call", V(1), 0)),
    ("if", ("LT", V(5), V(6)), [("diverge",)]),
    ("set", 7, 0),
    ("set", 8, 0),
    ("set", 9, ("MAX", ("MAX", V(6), 1), ("call", V(1), 1))),
    ("while", ("le", V(9), V(5)), [
        ("if", ("LT", V(6), V(9)), [("set", 8, ("inc", V(7)))]),
        ("set", 6, V(9)),
        ("set", 7, ("inc", V(7))),
        ("set", 9, ("MAX", ("MAX", V(6), ("inc", V(7))),
                    ("call", V(1), ("inc", V(7))))),
    ]),
    ("if", ("MOD", V(3), 2), [("halt", V(8))]),
    ("halt", V(7)),
])

# GRAPH_POS: input pair(i, pair(x, y)); halts iff some phi_i(x, t) = y.
GRAPH_POS = compile_program(7, [
    ("set", 1, ("fst", V(0))),
    ("set", 2, ("fst", ("snd", V(0)))),
    ("set", 3, ("snd", ("snd", V(0)))),
    ("set", 4, 1),
    ("while", 1, [
        ("set", 5, 0),
        ("while", ("LT", V(5), V(4)), [
            ("set", 6, ("eval", V(1), ("PAIR", V(2), V(5)), V(4))),
            ("if", ("EQ", V(6), ("inc", V(3))), [("halt", 0)]),
            ("set", 5, ("inc", V(5))),
        ]),
        ("set", 4, ("inc", V(4))),
    ]),
])


def _graph_neg(cmp):
    # halts iff some branch value is strictly below (min) or above (max) y
    return compile_program(7, [
        ("set", 1, ("fst", V(0))),
        ("set", 2, ("fst", ("snd", V(0)))),
        ("set", 3, ("snd", ("snd", V(0)))),
        ("set", 4, 1),
        ("while", 1, [
            ("set", 5, 0),
            ("while", ("LT", V(5), V(4)), [
                ("set", 6, ("eval", V(1), ("PAIR", V(2), V(5)), V(4))),
                ("if", ("and", V(6), cmp(("DEC", V(6)), V(3))), [("halt", 0)]),
                ("set", 5, ("inc", V(5))),
            ]),
            ("set", 4, ("inc", V(4))),
        ]),
    ])


GRAPH_NEG_MIN = _graph_neg(lambda a, b: ("LT", a, b))
GRAPH_NEG_MAX = _graph_neg(lambda a, b: ("gt", a, b))


def _thin(co: bool):
    # records of the standard enumeration of W_i; v7 flags that a record
    # exists, v6 holds the current one
    on_record = [
        ("if", ("EQ", V(5), V(2)), [("halt", 0)] if not co else [("diverge",)]),
        ("if", ("LT", V(2), V(5)), [("diverge",)] if not co else [("halt", 0)]),
    ]
    return compile_program(8, [
        ("set", 1, ("fst", V(0))),
        ("set", 2, ("snd", V(0))),
        ("set", 3, 1),
        ("while", 1, [
            ("set", 4, 0),
            ("while", ("LT", V(4), V(3)), [
                ("set", 5, V(4)),
                ("if", _enters(V(1), V(5), V(3)), [
                    ("if", ("or", ("NOT", V(7)), ("LT", V(6), V(5))), [
                        ("set", 6, V(5)),
                        ("set", 7, 1),
                    ] + on_record),
                ]),
                ("set", 4, ("inc", V(4))),
            ]),
            ("set", 3, ("inc", V(3))),
        ]),
    ])


THIN = _thin(False)
THIN_CO = _thin(True)

# FIRST_EVEN: input i; the first even element of W_i in enumeration order.
FIRST_EVEN = compile_program(4, [
    ("set", 1, 1),
    ("while", 1, [
        ("set", 2, 0),
        ("while", ("LT", V(2), V(1)), [
            ("if", ("and", ("NOT", ("MOD", V(2), 2)),
                    _enters(V(0), V(2), V(1))), [("halt", V(2))]),
            ("set", 2, ("inc", V(2))),
        ]),
        ("set", 1, ("inc", V(1))),
    ]),
])

# DIAG: input pair(lam, i); the first element of W_{lam(i)}.
DIAG = compile_program(5, [
    ("set", 1, ("call", ("fst", V(0)), ("snd", V(0)))),
    ("set", 2, 1),
    ("while", 1, [
        ("set", 3, 0),
        ("while", ("LT", V(3), V(2)), [
            ("if", _enters(V(1), V(3), V(2)), [("halt", V(3))]),
            ("set", 3, ("inc", V(3))),
        ]),
        ("set", 2, ("inc", V(2))),
    ]),
])

# REMOVE: input pair(pair(i, s), x); W_i minus the finite list s.
REMOVE = compile_program(4, [
    ("set", 1, ("snd", ("fst", V(0)))),
    ("set", 2, ("snd", V(0))),
    ("while", V(1), [
        ("set", 3, ("DEC", V(1))),
        ("if", ("EQ", ("fst", V(3)), V(2)), [("diverge",)]),
        ("set", 1, ("snd", V(3))),
    ]),
    ("halt", ("call", ("fst", ("fst", V(0))), V(2))),
])
REMOVE_INDEX = word_to_nat(REMOVE)

# LAMBDA_MU: input pair(pair(d, i), x); halts iff x = mu(i, n) for some n.
LAMBDA_MU = compile_program(5, [
    ("set", 1, ("fst", ("fst", V(0)))),
    ("set", 2, ("snd", ("fst", V(0)))),
    ("set", 3, 0),
    ("while", 1, [
        ("set", 4, ("call", V(1), ("smn", REMOVE_INDEX, ("PAIR", V(2), V(3))))),
        ("if", ("EQ", V(4), ("snd", V(0))), [("halt", 0)]),
        ("set", 3, ("inc", ("PAIR", V(4), V(3)))),
    ]),
])
LAMBDA_MU_INDEX = word_to_nat(LAMBDA_MU)

# LAMBDA_GEN: input pair(d, i) -> index of LAMBDA_MU specialised to (d, i).
LAMBDA_GEN = compile_program(1, [
    ("halt", ("smn", LAMBDA_MU_INDEX, V(0))),
])

# MU_AT: input pair(pair(d, i), n) -> mu(i, n).
MU_AT = compile_program(6, [
    ("set", 1, ("fst", ("fst", V(0)))),
    ("set", 2, ("snd", ("fst", V(0)))),
    ("set", 3, 0),
    ("set", 5, 0),
    ("while", 1, [
        ("set", 4, ("call", V(1), ("smn", REMOVE_INDEX, ("PAIR", V(2), V(3))))),
        ("if", ("EQ", V(5), ("snd", V(0))), [("halt", V(4))]),
        ("set", 3, ("inc", ("PAIR", V(4), V(3)))),
        ("set", 5, ("inc", V(5))),
    ]),
])


# EVEN_PART: input pair(i, x); halts iff x is even and in W_i.
EVEN_PART = compile_program(2, [
    ("if", ("MOD", ("snd", V(0)), 2), [("diverge",)]),
    ("halt", ("call", ("fst", V(0)), ("snd", V(0)))),
])
EVEN_PART_INDEX = word_to_nat(EVEN_PART)

# LAMBDA_EVENS: input i -> index of W_i intersected with the evens.
LAMBDA_EVENS = compile_program(1, [
    ("halt", ("smn", EVEN_PART_INDEX, V(0))),
])

def list_code(values) -> int:
    """List code of a finite sequence, last element innermost."""
    s = 0
    for a in values:
        s = pair(a, s) + 1
    return s


def list_decode(s: int) -> list[int]:
    out = []
    while s:
        a, s = unpair(s - 1)
        out.append(a)
    return out[::-1]


LIBRARY = {
    "EVENS": EVENS, "ODDS": ODDS, "SQUARES": SQUARES, "ALL": ALL,
    "IDENTITY": IDENTITY,
    "EMPTY": EMPTY, "LOG2P2": LOG2P2, "IDMIN": IDMIN, "HALF": HALF,
    "DOUBLE": DOUBLE, "LINEAR_BOUND": LINEAR_BOUND,
    "QUARTIC_BOUND": QUARTIC_BOUND, "LOG2P2_MIN": LOG2P2_MIN,
    "HALF_MIN": HALF_MIN, "PLUS1_MIN": PLUS1_MIN, "TWO_BRANCH": TWO_BRANCH,
    "XI": XI, "COMPOSE_MIN": COMPOSE_MIN, "THETA": THETA, "HAT": HAT,
    "TILDE": TILDE, "GROWTH_MINORANT": GROWTH_MINORANT,
    "MODULUS_ITERATE": MODULUS_ITERATE,
    "PSI_PRIME": PSI_PRIME, "ALPHA_ZETA": ALPHA_ZETA,
    "GRAPH_POS": GRAPH_POS, "GRAPH_NEG_MIN": GRAPH_NEG_MIN,
    "GRAPH_NEG_MAX": GRAPH_NEG_MAX, "THIN": THIN, "THIN_CO": THIN_CO,
    "FIRST_EVEN": FIRST_EVEN, "DIAG": DIAG, "REMOVE": REMOVE,
    "LAMBDA_MU": LAMBDA_MU, "LAMBDA_GEN": LAMBDA_GEN, "MU_AT": MU_AT,
    "EVEN_PART": EVEN_PART, "LAMBDA_EVENS": LAMBDA_EVENS,
}
INDEX = {name: word_to_nat(bits) for name, bits in LIBRARY.items()}

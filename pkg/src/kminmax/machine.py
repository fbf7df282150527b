"""Step-budgeted stack machine over binary programs.

Every binary word is a program. The machine reads 4-bit opcode groups from
the left, keeps a stack of naturals and charges one step per decoded
instruction. Anything that cannot be decoded (a truncated opcode or operand,
a jump out of range, a jump to itself) diverges, which a budgeted run reports
as ``OutOfBudget``. The bit-level layout is described in docs/isa.md.

Two interpreters share these semantics: the pure-Python one below and an
optional Cython kernel (``kminmax._kernel``). The kernel is chosen at import
time when it is available and ``KMINMAX_PURE`` is unset. The kernel hands
back a fallback status for anything it cannot represent in 64-bit words, and
the pure-Python path then reruns the call.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from ._codec import bits_to_word, nat_to_bits, pair, unpair, word_to_nat

MAX_VALUE_BITS = 1 << 16
MAX_NESTING = 256
C_LIT = 4
SIBLING_PERM = 0xA

(HALT, LITR, LIT, DUP, SWAP, DROP, PICK, ROLL,
 ALU, JZ, JMP, EXEC, EVAL, QUERY, STAGE, INC) = range(16)

OPNAMES = ("HALT", "LITR", "LIT", "DUP", "SWAP", "DROP", "PICK", "ROLL",
           "ALU", "JZ", "JMP", "EXEC", "EVAL", "QUERY", "STAGE", "INC")
ALU_NAMES = ("ADD", "SUB", "MUL", "DIV", "MOD", "LT", "EQ", "PAIR",
             "UNPAIR", "LOG2", "ISQRT", "MAX", "MIN", "NOT", "DEC", "SMN")
_OPCODE = {name: k for k, name in enumerate(OPNAMES)}
_ALUCODE = {name: k for k, name in enumerate(ALU_NAMES)}
_WITH_OPERAND = {LIT, PICK, ROLL}
_JUMPS = {JZ, JMP}

# status codes shared with the kernel
ST_HALTED, ST_OUT, ST_FALLBACK = 0, 1, 2

Program = str


@dataclass(frozen=True)
class Halted:
    value: int
    steps: int


@dataclass(frozen=True)
class OutOfBudget:
    pass


RunOutcome = Union[Halted, OutOfBudget]
OUT_OF_BUDGET = OutOfBudget()


@dataclass
class OracleView:
    """Membership access to a set A of naturals, with a per-view query log.

    ``key`` is a hashable description used for caching tables; views with
    ``key=None`` are never cached.
    """

    membership: Callable[[int], bool]
    key: Optional[object] = None
    query_count: int = 0
    log: list = field(default_factory=list)
    # shared with fresh() copies; deciders set "breach" here
    flags: dict = field(default_factory=dict)

    def query(self, n: int) -> int:
        bit = 1 if self.membership(n) else 0
        self.query_count += 1
        self.log.append((n, bit))
        return bit

    def fresh(self) -> "OracleView":
        return OracleView(self.membership, self.key, flags=self.flags)

    @classmethod
    def replay(cls, log: Iterable[tuple[int, int]]) -> "OracleView":
        """A view answering the logged points as recorded and 0 elsewhere."""
        table = {n: b for n, b in log}
        return cls(lambda n: table.get(n, 0) == 1, key=None)

    @classmethod
    def finite(cls, elements: Iterable[int]) -> "OracleView":
        s = frozenset(elements)
        return cls(s.__contains__, key=("finite", tuple(sorted(s))))


def empty_oracle() -> OracleView:
    return OracleView(lambda n: False, key=("finite", ()))


# -- operand encoding -------------------------------------------------------

def encode_operand(n: int, groups: int = 0) -> str:
    """Nibble groups ``c d2 d1 d0``, big-endian, c=1 when another group follows."""
    digits = []
    while True:
        digits.append(n & 7)
        n >>= 3
        if n == 0:
            break
    while len(digits) < groups:
        digits.append(0)
    digits.reverse()
    out = []
    for k, d in enumerate(digits):
        c = 1 if k < len(digits) - 1 else 0
        out.append(format(c * 8 + d, "04b"))
    return "".join(out)


def zigzag(n: int) -> int:
    return 2 * n if n >= 0 else -2 * n - 1


def unzigzag(z: int) -> int:
    return z // 2 if z % 2 == 0 else -(z + 1) // 2


# -- assembler --------------------------------------------------------------

def _op_bits(op: int, perm: int) -> str:
    return format(op ^ perm, "04b")


def assemble(items: Iterable, perm: int = 0) -> Program:
    """Assemble a list of instructions into program bits.

    Items are opcode names ("DUP"), ALU subop names ("ADD"), tuples with an
    operand (("LIT", 5), ("PICK", 2), ("JZ", "loop")), labels (":loop") and
    raw bits (("RAW", "0101")). Jump operands are sized iteratively so that
    every relative offset fits.
    """
    items = list(items)
    labels = {}
    sizes = {}
    for _ in range(64):
        pos = 0
        for k, it in enumerate(items):
            if isinstance(it, str) and it.startswith(":"):
                labels[it[1:]] = pos
                continue
            pos += len(_encode_item(it, perm, k, labels, sizes, pos, probe=True))
        changed = False
        pos = 0
        for k, it in enumerate(items):
            if isinstance(it, str) and it.startswith(":"):
                continue
            if isinstance(it, tuple) and it[0] in ("JZ", "JMP"):
                g = sizes.get(k, 1)
                after = pos + 4 + 4 * g
                need = len(encode_operand(zigzag(labels[it[1]] - after))) // 4
                if need > g:
                    sizes[k] = need
                    changed = True
            pos += len(_encode_item(it, perm, k, labels, sizes, pos, probe=True))
        if not changed:
            break
    out = []
    pos = 0
    for k, it in enumerate(items):
        if isinstance(it, str) and it.startswith(":"):
            continue
        bits = _encode_item(it, perm, k, labels, sizes, pos, probe=False)
        out.append(bits)
        pos += len(bits)
    return "".join(out)


def _encode_item(it, perm, k, labels, sizes, pos, probe):
    if isinstance(it, str):
        if it in _OPCODE:
            return _op_bits(_OPCODE[it], perm)
        if it in _ALUCODE:
            return _op_bits(ALU, perm) + format(_ALUCODE[it], "04b")
        raise ValueError("unknown instruction %r" % it)
    name, arg = it
    if name == "RAW":
        return arg
    op = _OPCODE[name]
    if op in _JUMPS:
        g = sizes.get(k, 1)
        if probe and arg not in labels:
            return _op_bits(op, perm) + "0" * (4 * g)
        after = pos + 4 + 4 * g
        return _op_bits(op, perm) + encode_operand(zigzag(labels[arg] - after), g)
    if op == ALU:
        return _op_bits(ALU, perm) + format(_ALUCODE[arg], "04b")
    if op in _WITH_OPERAND:
        return _op_bits(op, perm) + encode_operand(arg)
    raise ValueError("instruction %r takes no operand" % name)


def disassemble(bits: Program, perm: int = 0) -> list[str]:
    out = []
    pc, n = 0, len(bits)
    while pc < n:
        if pc + 4 > n:
            out.append("%d ?%s" % (pc, bits[pc:]))
            break
        op = int(bits[pc:pc + 4], 2) ^ perm
        start = pc
        pc += 4
        if op == LITR:
            out.append("%d LITR %s" % (start, bits[pc:] or "-"))
            break
        if op == ALU:
            if pc + 4 > n:
                out.append("%d ALU ?" % start)
                break
            out.append("%d %s" % (start, ALU_NAMES[int(bits[pc:pc + 4], 2)]))
            pc += 4
            continue
        if op in _WITH_OPERAND or op in _JUMPS:
            v = 0
            while True:
                if pc + 4 > n:
                    out.append("%d %s ?" % (start, OPNAMES[op]))
                    return out
                g = int(bits[pc:pc + 4], 2)
                pc += 4
                v = (v << 3) | (g & 7)
                if not g & 8:
                    break
            if op in _JUMPS:
                out.append("%d %s %+d" % (start, OPNAMES[op], unzigzag(v)))
            else:
                out.append("%d %s %d" % (start, OPNAMES[op], v))
            continue
        out.append("%d %s" % (start, OPNAMES[op]))
    return out


def smn_program(i: int, z: int, perm: int = 0) -> Program:
    """Program that runs program(i) on pair(z, input)."""
    return assemble([("LIT", z), "SWAP", "PAIR", ("LIT", i), "SWAP", "EXEC"], perm)


def smn_index(i: int, z: int, perm: int = 0) -> int:
    return word_to_nat(smn_program(i, z, perm))


SMN_OVERHEAD = 6
UNIVERSAL_PROGRAM = assemble(["UNPAIR", "EXEC"])
UNIVERSAL_INDEX = word_to_nat(UNIVERSAL_PROGRAM)
UNIVERSAL_OVERHEAD = 2


def encode_literal(x: int) -> Program:
    """``LITR`` followed by the binary expansion of x; halts in one step."""
    return _op_bits(LITR, 0) + format(x, "b")


# -- pure-Python interpreter ------------------------------------------------

def _alu(f: int, st: list, perm: int) -> bool:
    """Apply ALU subop f in place. Returns False when a value overflows."""
    def pop():
        return st.pop() if st else 0

    if f == 13:
        st.append(1 if pop() == 0 else 0)
        return True
    if f == 14:
        a = pop()
        st.append(a - 1 if a else 0)
        return True
    if f == 9:
        a = pop()
        st.append(a.bit_length() - 1 if a else 0)
        return True
    if f == 10:
        from math import isqrt
        st.append(isqrt(pop()))
        return True
    if f == 8:
        x, y = unpair(pop())
        st.append(x)
        st.append(y)
        return True
    b = pop()
    a = pop()
    if f == 0:
        r = a + b
    elif f == 1:
        r = a - b if a > b else 0
    elif f == 2:
        if a.bit_length() + b.bit_length() > MAX_VALUE_BITS + 1:
            return False
        r = a * b
    elif f == 3:
        r = a // b if b else 0
    elif f == 4:
        r = a % b if b else a
    elif f == 5:
        r = 1 if a < b else 0
    elif f == 6:
        r = 1 if a == b else 0
    elif f == 7:
        r = pair(a, b)
    elif f == 11:
        r = a if a > b else b
    elif f == 12:
        r = a if a < b else b
    else:
        r = smn_index(a, b, perm)
    if r.bit_length() > MAX_VALUE_BITS:
        return False
    st.append(r)
    return True


def _exec(P: int, L: int, stack: list, budget: int, oracle, perm: int,
          stage, depth: int, trace: Optional[list]):
    """Run one frame. Returns (status, value, steps, touched_stage)."""
    steps = 0
    pc = 0
    touched = False
    while True:
        if steps >= budget:
            return ST_OUT, 0, budget, touched
        if pc == L:
            steps += 1
            v = stack[-1] if stack else 0
            if trace is not None:
                trace.append("%d END %d %d" % (pc, v, len(stack)))
            return ST_HALTED, v, steps, touched
        if pc + 4 > L:
            return ST_OUT, 0, budget, touched
        start = pc
        op = ((P >> (L - pc - 4)) & 15) ^ perm
        pc += 4
        steps += 1
        if op in _WITH_OPERAND or op in _JUMPS:
            n = 0
            while True:
                if pc + 4 > L:
                    return ST_OUT, 0, budget, touched
                g = (P >> (L - pc - 4)) & 15
                pc += 4
                n = (n << 3) | (g & 7)
                if not g & 8:
                    break
            if n.bit_length() > MAX_VALUE_BITS:
                return ST_OUT, 0, budget, touched
        if op == HALT:
            v = stack[-1] if stack else 0
            if trace is not None:
                trace.append("%d HALT %d %d" % (start, v, len(stack)))
            return ST_HALTED, v, steps, touched
        if op == LITR:
            rem = L - pc
            v = P & ((1 << rem) - 1)
            if trace is not None:
                trace.append("%d LITR %d %d" % (start, v, len(stack)))
            return ST_HALTED, v, steps, touched
        if op == LIT:
            stack.append(n)
        elif op == DUP:
            stack.append(stack[-1] if stack else 0)
        elif op == SWAP:
            b = stack.pop() if stack else 0
            a = stack.pop() if stack else 0
            stack.append(b)
            stack.append(a)
        elif op == DROP:
            if stack:
                stack.pop()
        elif op == PICK:
            stack.append(stack[-1 - n] if n < len(stack) else 0)
        elif op == ROLL:
            stack.append(stack.pop(-1 - n) if n < len(stack) else 0)
        elif op == ALU:
            if pc + 4 > L:
                return ST_OUT, 0, budget, touched
            f = (P >> (L - pc - 4)) & 15
            pc += 4
            if not _alu(f, stack, perm):
                return ST_OUT, 0, budget, touched
        elif op == JZ or op == JMP:
            target = pc + unzigzag(n)
            if op == JZ:
                v = stack.pop() if stack else 0
                take = v == 0
            else:
                take = True
                if target == start:
                    return ST_OUT, 0, budget, touched
            if take:
                if target < 0 or target > L:
                    return ST_OUT, 0, budget, touched
                pc = target
        elif op == EXEC:
            w = stack.pop() if stack else 0
            i = stack.pop() if stack else 0
            P, L = nat_to_bits(i)
            stack = [w]
            pc = 0
        elif op == EVAL:
            b = stack.pop() if stack else 0
            w = stack.pop() if stack else 0
            i = stack.pop() if stack else 0
            if depth + 1 > MAX_NESTING:
                return ST_OUT, 0, budget, touched
            rem = budget - steps
            inner = rem if b == 0 else min(b, rem)
            iP, iL = nat_to_bits(i)
            st, v, s, tch = _exec(iP, iL, [w], inner, oracle, perm, stage,
                                  depth + 1, None)
            touched = touched or tch
            if st == ST_HALTED:
                steps += s
                stack.append(v + 1)
            elif b != 0 and b <= rem:
                steps += b
                stack.append(0)
            else:
                return ST_OUT, 0, budget, touched
        elif op == QUERY:
            q = stack.pop() if stack else 0
            stack.append(oracle.query(q) if oracle is not None else 0)
        elif op == STAGE:
            if stage is None:
                return ST_OUT, 0, budget, True
            stack.append(stage)
        else:
            v = (stack.pop() if stack else 0) + 1
            if v.bit_length() > MAX_VALUE_BITS:
                return ST_OUT, 0, budget, touched
            stack.append(v)
        if trace is not None:
            name = OPNAMES[op] if op != ALU else ALU_NAMES[f]
            trace.append("%d %s %d %d" % (start, name,
                                          stack[-1] if stack else 0, len(stack)))


def _exec_python(P, L, x, budget, oracle, perm, stage):
    return _exec(P, L, [x], budget, oracle, perm, stage, 0, None)


try:
    if os.environ.get("KMINMAX_PURE"):
        raise ImportError("pure backend requested")
    from . import _kernel
    BACKEND = "cython"
except ImportError:
    _kernel = None
    BACKEND = "python"

_KMAX = (1 << 62) - 1


def execute(P: int, L: int, x: int, budget: int, oracle=None, perm: int = 0,
            stage=None, backend: Optional[str] = None):
    """Low-level run of the program with bits (P, L) on input value x.

    Returns (status, value, steps, touched_stage) where touched_stage records
    that a STAGE instruction was reached without a stage register.
    """
    if budget <= 0:
        return ST_OUT, 0, 0, False
    use = backend or BACKEND
    if (use == "cython" and _kernel is not None and x <= _KMAX and (stage is None or stage <= _KMAX)
            and budget <= _KMAX):
        res = _kernel.execute(bits_to_word(P, L).encode(), x, budget, perm,
                              -1 if stage is None else stage,
                              0 if oracle is None else 1)
        if res[0] != ST_FALLBACK:
            return res
    return _exec_python(P, L, x, budget, oracle, perm, stage)


def _outcome(res) -> RunOutcome:
    if res[0] == ST_HALTED:
        return Halted(res[1], res[2])
    return OUT_OF_BUDGET


def _bits(p: Program) -> tuple[int, int]:
    return (int(p, 2) if p else 0), len(p)


def run(p: Program, w: str, t: int, *, perm: int = 0, stage=None,
        backend: Optional[str] = None) -> RunOutcome:
    """Run program p on the word w for at most t steps."""
    P, L = _bits(p)
    return _outcome(execute(P, L, word_to_nat(w), t, None, perm, stage, backend))


def run_with_oracle(p: Program, w: str, A: Optional[OracleView], t: int, *,
                    perm: int = 0, stage=None) -> RunOutcome:
    """As ``run``; QUERY instructions consult A (an absent oracle answers 0)."""
    P, L = _bits(p)
    return _outcome(execute(P, L, word_to_nat(w), t, A, perm, stage))


def run_index(i: int, x: int, t: int, oracle: Optional[OracleView] = None,
              perm: int = 0, stage=None) -> RunOutcome:
    """Run program(i) on the input value x."""
    P, L = nat_to_bits(i)
    return _outcome(execute(P, L, x, t, oracle, perm, stage))


def embed_oracle_free(p: Program) -> Program:
    """Oracle-free program equivalent to p run against the empty oracle.

    A QUERY with no oracle already answers 0, so the embedding is the identity.
    """
    return p


def trace(p: Program, w: str, t: int, perm: int = 0,
          oracle: Optional[OracleView] = None, stage=None) -> list[str]:
    """Golden trace: one ``pc op top depth`` line per executed instruction."""
    P, L = _bits(p)
    lines: list[str] = []
    if t <= 0:
        return lines
    _exec(P, L, [word_to_nat(w)], t, oracle, perm, stage, 0, lines)
    return lines

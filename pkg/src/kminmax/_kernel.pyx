# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Native frame loop for machine.execute on 64-bit values.

Anything that does not fit (values at or above 2**62, deep stacks, EXEC or
EVAL targets whose program is longer than 62 bits, the SMN subop, QUERY when
an oracle is attached) returns
status 2 so the caller reruns the pure-Python interpreter.
"""

from libc.stdlib cimport malloc, free

ctypedef long long i64

cdef enum:
    STACK_CAP = 4096
    MAX_NESTING = 256
    ST_HALTED = 0
    ST_OUT = 1
    ST_FALLBACK = 2

cdef i64 LIM = (1 << 62) - 1


cdef struct Frame:
    int status
    i64 value
    i64 steps
    int touched


cdef inline int nib(const unsigned char *bits, i64 pc) nogil:
    return ((bits[pc] & 1) << 3) | ((bits[pc + 1] & 1) << 2) | \
           ((bits[pc + 2] & 1) << 1) | (bits[pc + 3] & 1)


cdef inline i64 isqrt64(i64 n) nogil:
    cdef i64 x, y
    if n < 2:
        return n
    x = n
    y = (x + 1) // 2
    while y < x:
        x = y
        y = (x + n // x) // 2
    return x


cdef inline int bitlen(i64 v) nogil:
    cdef int k = 0
    while v:
        v >>= 1
        k += 1
    return k


cdef int load_index(i64 i, unsigned char *buf) nogil:
    """Bits of program(i) into buf; returns the length or -1 if too long."""
    cdef i64 v = i + 1
    cdef int length = bitlen(v) - 1
    cdef int k
    if length > 62:
        return -1
    for k in range(length):
        buf[k] = (v >> (length - 1 - k)) & 1
    return length


cdef Frame run_frame(const unsigned char *bits0, i64 L0, i64 x, i64 budget,
                     int perm, i64 stage, int depth, int has_oracle) nogil:
    cdef Frame res, sub
    cdef i64 *st = <i64 *> malloc(STACK_CAP * sizeof(i64))
    cdef unsigned char buf[64]
    cdef unsigned char ebuf[64]
    cdef const unsigned char *bits = bits0
    cdef i64 L = L0
    cdef i64 sp = 0, steps = 0, pc = 0, start, n, target, a, b, v, w, i
    cdef i64 rem, inner, s, y
    cdef int op, g, f, touched = 0, length
    cdef i64 k
    res.touched = 0
    if st == NULL:
        res.status = ST_FALLBACK
        return res
    st[0] = x
    sp = 1
    while True:
        if steps >= budget:
            res.status = ST_OUT
            break
        if pc == L:
            steps += 1
            res.status = ST_HALTED
            res.value = st[sp - 1] if sp > 0 else 0
            res.steps = steps
            break
        if pc + 4 > L:
            res.status = ST_OUT
            break
        start = pc
        op = nib(bits, pc) ^ perm
        pc += 4
        steps += 1
        n = 0
        if op == 2 or op == 6 or op == 7 or op == 9 or op == 10:
            while True:
                if pc + 4 > L:
                    op = -1
                    break
                g = nib(bits, pc)
                pc += 4
                if n > (LIM >> 3):
                    op = -2
                    break
                n = (n << 3) | (g & 7)
                if not (g & 8):
                    break
            if op == -1:
                res.status = ST_OUT
                break
            if op == -2:
                res.status = ST_FALLBACK
                break
        if sp >= STACK_CAP - 4:
            res.status = ST_FALLBACK
            break
        if op == 0:
            res.status = ST_HALTED
            res.value = st[sp - 1] if sp > 0 else 0
            res.steps = steps
            break
        elif op == 1:
            if L - pc > 62:
                res.status = ST_FALLBACK
                break
            v = 0
            while pc < L:
                v = (v << 1) | (bits[pc] & 1)
                pc += 1
            res.status = ST_HALTED
            res.value = v
            res.steps = steps
            break
        elif op == 2:
            st[sp] = n
            sp += 1
        elif op == 3:
            st[sp] = st[sp - 1] if sp > 0 else 0
            sp += 1
        elif op == 4:
            if sp > 0:
                sp -= 1
                b = st[sp]
            else:
                b = 0
            if sp > 0:
                sp -= 1
                a = st[sp]
            else:
                a = 0
            st[sp] = b
            st[sp + 1] = a
            sp += 2
        elif op == 5:
            if sp > 0:
                sp -= 1
        elif op == 6:
            st[sp] = st[sp - 1 - n] if n < sp else 0
            sp += 1
        elif op == 7:
            if n < sp:
                v = st[sp - 1 - n]
                for k in range(sp - 1 - n, sp - 1):
                    st[k] = st[k + 1]
                st[sp - 1] = v
            else:
                st[sp] = 0
                sp += 1
        elif op == 8:
            if pc + 4 > L:
                res.status = ST_OUT
                break
            f = nib(bits, pc)
            pc += 4
            if f == 15:
                res.status = ST_FALLBACK
                break
            if f == 13 or f == 14 or f == 9 or f == 10 or f == 8:
                if sp > 0:
                    sp -= 1
                    a = st[sp]
                else:
                    a = 0
                if f == 13:
                    v = 1 if a == 0 else 0
                elif f == 14:
                    v = a - 1 if a > 0 else 0
                elif f == 9:
                    v = bitlen(a) - 1 if a > 0 else 0
                elif f == 10:
                    v = isqrt64(a)
                else:
                    if a > (LIM >> 3):
                        res.status = ST_FALLBACK
                        break
                    s = (isqrt64(8 * a + 1) - 1) // 2
                    y = a - s * (s + 1) // 2
                    st[sp] = s - y
                    sp += 1
                    v = y
                st[sp] = v
                sp += 1
            else:
                if sp > 0:
                    sp -= 1
                    b = st[sp]
                else:
                    b = 0
                if sp > 0:
                    sp -= 1
                    a = st[sp]
                else:
                    a = 0
                if f == 0:
                    v = a + b
                    if v > LIM:
                        res.status = ST_FALLBACK
                        break
                elif f == 1:
                    v = a - b if a > b else 0
                elif f == 2:
                    if a != 0 and b > LIM // a:
                        res.status = ST_FALLBACK
                        break
                    v = a * b
                elif f == 3:
                    v = a // b if b else 0
                elif f == 4:
                    v = a % b if b else a
                elif f == 5:
                    v = 1 if a < b else 0
                elif f == 6:
                    v = 1 if a == b else 0
                elif f == 7:
                    if a + b >= (1 << 30):
                        res.status = ST_FALLBACK
                        break
                    v = (a + b) * (a + b + 1) // 2 + b
                elif f == 11:
                    v = a if a > b else b
                else:
                    v = a if a < b else b
                st[sp] = v
                sp += 1
        elif op == 9 or op == 10:
            if n % 2 == 0:
                target = pc + n // 2
            else:
                target = pc - (n + 1) // 2
            if op == 9:
                if sp > 0:
                    sp -= 1
                    v = st[sp]
                else:
                    v = 0
                if v != 0:
                    continue
            elif target == start:
                res.status = ST_OUT
                break
            if target < 0 or target > L:
                res.status = ST_OUT
                break
            pc = target
        elif op == 11:
            if sp > 0:
                sp -= 1
                w = st[sp]
            else:
                w = 0
            if sp > 0:
                sp -= 1
                i = st[sp]
            else:
                i = 0
            length = load_index(i, buf)
            if length < 0:
                res.status = ST_FALLBACK
                break
            bits = buf
            L = length
            st[0] = w
            sp = 1
            pc = 0
        elif op == 12:
            if sp > 0:
                sp -= 1
                b = st[sp]
            else:
                b = 0
            if sp > 0:
                sp -= 1
                w = st[sp]
            else:
                w = 0
            if sp > 0:
                sp -= 1
                i = st[sp]
            else:
                i = 0
            if depth + 1 > MAX_NESTING:
                res.status = ST_OUT
                break
            rem = budget - steps
            inner = rem if b == 0 else (b if b < rem else rem)
            length = load_index(i, ebuf)
            if length < 0:
                res.status = ST_FALLBACK
                break
            sub = run_frame(ebuf, length, w, inner, perm, stage, depth + 1,
                            has_oracle)
            if sub.status == ST_FALLBACK:
                res.status = ST_FALLBACK
                break
            if sub.touched:
                touched = 1
            if sub.status == ST_HALTED:
                if sub.value >= LIM:
                    res.status = ST_FALLBACK
                    break
                steps += sub.steps
                st[sp] = sub.value + 1
                sp += 1
            elif b != 0 and b <= rem:
                steps += b
                st[sp] = 0
                sp += 1
            else:
                res.status = ST_OUT
                break
        elif op == 13:
            if has_oracle:
                res.status = ST_FALLBACK
                break
            if sp > 0:
                sp -= 1
            st[sp] = 0
            sp += 1
        elif op == 14:
            if stage < 0:
                touched = 1
                res.status = ST_OUT
                break
            st[sp] = stage
            sp += 1
        else:
            if sp > 0:
                sp -= 1
                v = st[sp]
            else:
                v = 0
            if v >= LIM:
                res.status = ST_FALLBACK
                break
            st[sp] = v + 1
            sp += 1
    free(st)
    if res.status == ST_OUT:
        res.steps = budget
        res.value = 0
    if touched:
        res.touched = 1
    return res


def execute(const unsigned char[:] prog, i64 x, i64 budget, int perm, i64 stage,
            int has_oracle=0):
    """Returns (status, value, steps, touched_stage) as machine.execute does."""
    cdef Frame r
    cdef i64 L = prog.shape[0]
    cdef unsigned char *tmp
    cdef i64 k
    tmp = <unsigned char *> malloc(L + 1)
    for k in range(L):
        tmp[k] = prog[k] & 1
    with nogil:
        r = run_frame(tmp, L, x, budget, perm, stage, 0, has_oracle)
    free(tmp)
    return r.status, r.value, r.steps, bool(r.touched)

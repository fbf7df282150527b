"""Bijections between naturals, pairs of naturals and binary words."""

from math import isqrt


def pair(x: int, y: int) -> int:
    """Cantor pairing."""
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(n: int) -> tuple[int, int]:
    s = (isqrt(8 * n + 1) - 1) // 2
    y = n - s * (s + 1) // 2
    return s - y, y


def word_to_nat(w: str) -> int:
    """Length-lexicographic rank of a binary word (empty word is 0)."""
    return int("1" + w, 2) - 1


def nat_to_word(n: int) -> str:
    return bin(n + 1)[3:]


def nat_to_bits(n: int) -> tuple[int, int]:
    """Word of rank n as an (integer value, length) pair."""
    v = n + 1
    length = v.bit_length() - 1
    return v - (1 << length), length


def bits_to_word(value: int, length: int) -> str:
    if length == 0:
        return ""
    return format(value, "0%db" % length)

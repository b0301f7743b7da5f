"""Definition-level reference implementations, independent of the package.

Pure Python over lists of bits; only practical for a handful of variables.
"""

from __future__ import annotations

from itertools import combinations, product


def dot(a: int, b: int) -> int:
    return bin(a & b).count("1") & 1


def walsh(bits: list[int]) -> list[int]:
    size = len(bits)
    return [sum(1 - 2 * (bits[x] ^ dot(w, x)) for x in range(size)) for w in range(size)]


def anf_coefficients(bits: list[int]) -> list[int]:
    """``a_u = XOR of f(x) over x subset of u``."""
    size = len(bits)
    out = []
    for u in range(size):
        acc = 0
        for x in range(size):
            if x & u == x:
                acc ^= bits[x]
        out.append(acc)
    return out


def degree(bits: list[int]) -> int:
    coeffs = anf_coefficients(bits)
    return max((bin(u).count("1") for u, c in enumerate(coeffs) if c), default=-1)


def nonlinearity(bits: list[int]) -> int:
    """Minimum Hamming distance to every affine function."""
    size = len(bits)
    best = size
    for w in range(size):
        lin = [dot(w, x) for x in range(size)]
        d = sum(b != l for b, l in zip(bits, lin))
        best = min(best, d, size - d)
    return best


def is_balanced(bits: list[int]) -> bool:
    return 2 * sum(bits) == len(bits)


def resiliency(bits: list[int], n: int) -> int:
    """Largest m such that fixing any m inputs leaves a balanced subfunction; -1 if unbalanced."""
    if not is_balanced(bits):
        return -1
    best = 0
    for m in range(1, n + 1):
        for vars_ in combinations(range(n), m):
            for vals in product((0, 1), repeat=m):
                sub = [bits[x] for x in range(1 << n)
                       if all(((x >> v) & 1) == val for v, val in zip(vars_, vals))]
                if not is_balanced(sub):
                    return best
        best = m
    return best

"""Exact (big-integer) binomial counts behind the family sizes."""

from __future__ import annotations

from functools import lru_cache
from math import comb


@lru_cache(maxsize=4096)
def lower_binomial_sum(t: int, m: int) -> int:
    """``sum_{j=0}^{m} C(t, j)``; zero when ``m < 0``."""
    if m < 0:
        return 0
    if m >= t:
        return 1 << t
    total = 0
    c = 1
    for j in range(m + 1):
        total += c
        c = c * (t - j) // (j + 1)
    return total


def masks_above(t: int, m: int) -> int:
    """Number of masks in ``F_2^t`` with weight ``> m``."""
    if t < 0:
        return 0
    return (1 << t) - lower_binomial_sum(t, m)


def linear_family_size(half: int, m: int) -> int:
    return masks_above(half, m)


def partial_family_size(half: int, m: int, k: int, e: int = 0) -> int:
    """Members ``c . X'_t + h(X''_2k)`` with ``wt(c) > m - e`` and ``t = half - 2k``."""
    return masks_above(half - 2 * k, m - e)


def prime_family_size(half: int, m: int) -> int:
    """The linear family with the pivot-coset masks swapped for one degree-raising member."""
    return linear_family_size(half, m) - (1 << (half - m - 1)) + 1


def deficit(half: int, m: int) -> int:
    """Blocks left to fill once every weight-``>m`` linear mask is used.

    Equals ``sum_{i=0}^{m} C(half, i)``: the ``i = 0`` term is included.
    """
    return (1 << half) - linear_family_size(half, m)


def comb_sum(t: int, lo: int, hi: int) -> int:
    """``sum_{j=lo}^{hi} C(t, j)``, used by tests as an independent count."""
    return sum(comb(t, j) for j in range(max(lo, 0), hi + 1))

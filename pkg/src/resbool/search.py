"""Exhaustive search over all Boolean functions on a handful of variables."""

from __future__ import annotations

import numpy as np

from .core import TruthTable, _spectrum_dtype, butterfly, moebius, popcounts
from .errors import CapacityError
from .formats import SeedRecord

SEARCH_MAX_N = 4


def all_tables(n: int) -> np.ndarray:
    """Every truth table on ``n`` variables as rows; row ``i`` has bit ``x`` = ``(i >> x) & 1``."""
    if n > SEARCH_MAX_N:
        raise CapacityError(f"exhaustive search limited to n <= {SEARCH_MAX_N}, got {n}")
    idx = np.arange(1 << (1 << n), dtype=np.int64)[:, None]
    return ((idx >> np.arange(1 << n)) & 1).astype(np.uint8)


def all_profiles(n: int) -> dict[str, np.ndarray]:
    """Resiliency, degree and nonlinearity of every function on ``n`` variables."""
    tables = all_tables(n)
    spec = (1 - 2 * tables.astype(_spectrum_dtype(n))).copy()
    butterfly(spec)
    wt = popcounts(n)
    zero = spec == 0
    nonzero_wt = np.where(zero, 127, wt[None, :])
    res = nonzero_wt.min(axis=1).astype(np.int64) - 1
    res[zero.all(axis=1)] = n  # unreachable for Boolean functions; kept for safety
    coeffs = moebius(tables.copy())
    deg = np.where(coeffs.astype(bool), wt[None, :], -1).max(axis=1)
    nl = (1 << (n - 1)) - np.abs(spec).max(axis=1) // 2
    return {"tables": tables, "resiliency": res, "degree": deg, "nonlinearity": nl}


def search(n: int, m: int | None = None, N: int | None = None, d: int | None = None,
           limit: int | None = None) -> list[SeedRecord]:
    """Functions with exactly resiliency ``m``, nonlinearity ``N`` and degree ``d`` (``None`` = any).

    Results are in increasing truth-table index order.
    """
    prof = all_profiles(n)
    keep = np.ones(len(prof["tables"]), dtype=bool)
    if m is not None:
        keep &= prof["resiliency"] == m
    if N is not None:
        keep &= prof["nonlinearity"] == N
    if d is not None:
        keep &= prof["degree"] == d
    out = []
    for i in np.flatnonzero(keep)[:limit]:
        out.append(SeedRecord(n, int(prof["resiliency"][i]), int(prof["degree"][i]),
                              int(prof["nonlinearity"][i]), TruthTable(n, prof["tables"][i])))
    return out


def best_nonlinearity(n: int, m: int) -> int:
    """Largest nonlinearity among functions that are at least ``m``-resilient."""
    prof = all_profiles(n)
    ok = prof["resiliency"] >= m
    if not ok.any():
        return -1
    return int(prof["nonlinearity"][ok].max())

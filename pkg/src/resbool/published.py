"""Published parameter tables and their plan-only reproduction.

Nonlinearity values are written as ``2^{lead} - sum 2^{e}`` (plus small
constants for the low-order table). Reproduction solves the counting
inequalities with big integers and evaluates the closed-form certificate, so
no truth table is ever built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .constructor import bound_certificate, solve_feasibility
from .errors import InfeasibleError


@dataclass(frozen=True)
class RangeRow:
    """Low-order table row: ``2^{n-1} - 2^{n/2-1} - sum 2^{(n+off)/4} - sum consts``."""

    m: int
    residue: int  # n mod 4
    n_lo: int
    n_hi: int
    offsets: tuple[int, ...]
    consts: tuple[int, ...]

    def ns(self) -> range:
        start = self.n_lo + (self.residue - self.n_lo) % 4
        return range(start, self.n_hi + 1, 4)

    def value(self, n: int) -> int:
        return (1 << (n - 1)) - (1 << (n // 2 - 1)) - sum(1 << ((n + o) // 4) for o in self.offsets) - sum(self.consts)

    def formula(self) -> str:
        def term(o):
            if self.residue == 0:
                a = o // 4
                return "2^{n/4}" if a == 0 else f"2^{{n/4+{a}}}"
            return f"2^{{(n+{o})/4}}"
        parts = ["2^{n-1}", "2^{n/2-1}", *(term(o) for o in self.offsets), *map(str, self.consts)]
        return "-".join(parts)


# m, n mod 4, n range, exponent offsets, constants (as printed; note the doubled 16 at m=3)
LOW_ORDER_ROWS = tuple(RangeRow(*r) for r in [
    (1, 0, 12, 20, (4,), (4,)),
    (1, 0, 24, 112, (8,), (4,)),
    (1, 0, 116, 132, (8, 4), (4,)),
    (1, 0, 136, 136, (8, 4, 0), (4,)),
    (1, 0, 140, 492, (12,), (4,)),
    (1, 0, 496, 512, (12, 4), (4,)),
    (1, 2, 14, 50, (6,), (4,)),
    (1, 2, 54, 58, (6, 2), (4,)),
    (1, 2, 62, 238, (10,), (4,)),
    (1, 2, 242, 246, (10, 2), (4,)),
    (1, 2, 250, 290, (10, 6), (4,)),
    (1, 2, 294, 298, (10, 6, 2), (4,)),
    (2, 0, 16, 16, (8,), (8,)),
    (2, 0, 20, 40, (12,), (8,)),
    (2, 0, 44, 44, (12, 8), (8,)),
    (2, 0, 48, 84, (16,), (8,)),
    (2, 0, 88, 88, (16, 8), (8,)),
    (2, 0, 92, 96, (16, 12), (8,)),
    (2, 0, 100, 176, (20,), (8,)),
    (2, 2, 18, 26, (10,), (8,)),
    (2, 2, 30, 58, (14,), (8,)),
    (2, 2, 62, 66, (14, 10), (8,)),
    (2, 2, 70, 122, (18,), (8,)),
    (3, 0, 20, 20, (12, 8), (16,)),
    (3, 0, 24, 32, (16,), (16,)),
    (3, 0, 36, 36, (16, 12), (16,)),
    (3, 0, 40, 56, (20,), (16, 16)),
    (3, 0, 60, 60, (20, 16), (16,)),
    (3, 0, 64, 88, (24,), (16,)),
    (3, 0, 92, 92, (24, 16), (16,)),
    (3, 0, 96, 96, (24, 20), (16,)),
    (3, 0, 100, 144, (28,), (16,)),
    (3, 2, 22, 26, (14,), (16,)),
    (3, 2, 30, 42, (18,), (16,)),
    (3, 2, 46, 46, (18, 14), (16,)),
    (3, 2, 52, 70, (22,), (16,)),
    (3, 2, 74, 74, (22, 18), (16,)),
    (3, 2, 78, 78, (22, 18, 14), (16,)),
    (3, 2, 82, 114, (26,), (16,)),
    (4, 0, 28, 32, (20,), (32,)),
    (4, 0, 36, 48, (24,), (32,)),
    (4, 0, 52, 52, (24, 20), (32,)),
    (4, 0, 56, 68, (28,), (32,)),
    (4, 0, 72, 72, (28, 20, 16), (32,)),
    (4, 0, 76, 100, (32,), (32,)),
    (4, 2, 26, 26, (18,), (32,)),
    (4, 2, 30, 38, (22,), (32,)),
    (4, 2, 42, 42, (22, 18), (32,)),
    (4, 2, 46, 58, (26,), (32,)),
    (4, 2, 62, 62, (26, 22), (32,)),
    (4, 2, 66, 82, (30,), (32,)),
    (4, 2, 86, 86, (30, 22, 18, 14), (32,)),
    (4, 2, 90, 90, (30, 26, 22), (32,)),
    (4, 2, 94, 118, (34,), (32,)),
])


@dataclass(frozen=True)
class Entry:
    """High-order table entry ``(n, m, d, 2^{lead} - sum 2^{subs})``; ``star`` marks the monomial route."""

    n: int
    m: int
    d: int
    lead: int
    subs: tuple[int, ...]
    star: bool

    @property
    def value(self) -> int:
        return (1 << self.lead) - sum(1 << e for e in self.subs)

    def formula(self) -> str:
        return "-".join([f"2^{self.lead}", *(f"2^{e}" for e in self.subs)])


HIGH_ORDER_ENTRIES = tuple(Entry(n, m, d, lead, tuple(subs), star) for n, m, d, lead, subs, star in [
    (30, 5, 24, 29, [14, 13], False),
    (36, 5, 30, 35, [17, 15, 6], True),
    (38, 5, 32, 37, [18, 16], False),
    (42, 5, 36, 41, [20, 17, 14, 6], True),
    (44, 5, 38, 43, [21, 18, 6], True),
    (48, 5, 42, 47, [23, 19, 6], True),
    (54, 5, 48, 53, [26, 21, 6], True),
    (58, 5, 52, 57, [28, 22, 21, 6], True),
    (60, 5, 54, 59, [29, 23, 6], True),
    (64, 5, 48, 63, [31, 24, 6], True),
    (70, 5, 64, 69, [34, 26, 6], True),
    (74, 5, 68, 73, [36, 27, 24, 6], True),
    (76, 5, 70, 75, [37, 28, 6], True),
    (80, 5, 74, 79, [39, 29, 6], True),
    (84, 5, 78, 83, [41, 30, 6], True),
    (88, 5, 82, 87, [43, 31, 30, 6], True),
    (90, 5, 84, 89, [44, 32, 6], True),
    (94, 5, 88, 93, [46, 33, 6], True),
    (98, 5, 92, 97, [48, 34, 32, 6], True),
    (100, 5, 94, 99, [49, 35, 6], True),
    (34, 6, 27, 23, [16, 15], False),
    (40, 6, 33, 39, [19, 17, 16, 7], True),
    (42, 6, 35, 41, [20, 18], False),
    (48, 6, 41, 47, [23, 20, 7], True),
    (52, 6, 45, 51, [25, 22], False),
    (54, 6, 47, 53, [26, 22, 7], True),
    (60, 6, 53, 59, [29, 24, 7], True),
    (64, 6, 47, 63, [31, 25, 24, 7], True),
    (66, 6, 59, 65, [32, 26, 7], True),
    (70, 6, 63, 69, [34, 27, 7], True),
    (76, 6, 69, 75, [37, 29, 7], True),
    (80, 6, 73, 79, [39, 30, 29, 7], True),
    (82, 6, 75, 81, [40, 31, 7], True),
    (86, 6, 79, 85, [42, 32, 7], True),
    (90, 6, 83, 89, [44, 33, 32, 7], True),
    (92, 6, 85, 91, [45, 34, 7], True),
    (96, 6, 89, 95, [47, 35, 7], True),
    (100, 6, 93, 99, [49, 36, 35, 7], True),
    (38, 7, 30, 37, [18, 17, 16], False),
    (40, 7, 32, 39, [19, 18], False),
    (46, 7, 38, 45, [22, 20], False),
    (48, 7, 40, 47, [23, 21], False),
    (52, 7, 44, 51, [25, 22, 21, 8], True),
    (54, 7, 46, 53, [26, 23], False),
    (58, 7, 50, 57, [28, 24, 23, 8], True),
    (60, 7, 52, 59, [29, 25, 8], True),
    (64, 7, 46, 63, [31, 26, 25, 8], True),
    (66, 7, 58, 65, [32, 27, 8], True),
    (70, 7, 62, 69, [34, 28, 27, 8], True),
    (72, 7, 64, 71, [35, 29, 8], True),
    (76, 7, 68, 73, [37, 30, 8], True),
    (78, 7, 70, 77, [38, 31, 8], True),
    (82, 7, 74, 81, [40, 32, 8], True),
    (86, 7, 78, 85, [42, 33, 32, 8], True),
    (88, 7, 80, 87, [43, 34, 8], True),
    (92, 7, 84, 91, [45, 35, 8], True),
    (98, 7, 90, 97, [48, 37, 8], True),
    (100, 7, 92, 99, [49, 38, 8], True),
    (42, 8, 33, 41, [20, 19, 18], False),
    (44, 8, 35, 43, [21, 20], False),
    (50, 8, 41, 49, [24, 22, 21], False),
    (52, 8, 43, 51, [25, 23], False),
    (58, 8, 49, 57, [28, 25, 9], True),
    (64, 8, 45, 63, [31, 27, 9], True),
    (68, 8, 59, 67, [33, 25, 29], False),
    (70, 8, 61, 69, [34, 29, 27, 9], True),
    (72, 8, 63, 71, [35, 30, 9], True),
    (76, 8, 67, 75, [37, 31, 28, 9], True),
    (78, 8, 69, 77, [38, 32, 9], True),
    (82, 8, 73, 81, [40, 33, 9], True),
    (88, 8, 79, 87, [43, 35, 9], True),
    (92, 8, 83, 91, [45, 36, 35, 9], True),
    (94, 8, 85, 93, [46, 37, 9], True),
    (98, 8, 89, 97, [48, 38, 36, 9], True),
    (100, 8, 91, 99, [49, 39, 9], True),
    (200, 8, 191, 199, [99, 68, 9], True),
    (46, 9, 36, 45, [22, 21, 20, 19, 10], True),
    (48, 9, 38, 47, [23, 22], False),
    (54, 9, 44, 53, [26, 24, 23, 22], False),
    (56, 9, 46, 55, [27, 25], False),
    (62, 9, 52, 61, [30, 27, 26], False),
    (64, 9, 44, 63, [31, 28], False),
    (68, 9, 58, 67, [33, 29, 28, 27, 10], True),
    (70, 9, 60, 69, [34, 30, 10], True),
    (74, 9, 64, 73, [36, 32], False),
    (76, 9, 66, 75, [37, 32, 10], True),
    (80, 9, 70, 79, [39, 34, 10], True),
    (82, 9, 72, 81, [40, 34, 10], True),
    (88, 9, 78, 87, [43, 36, 10], True),
    (94, 9, 84, 93, [46, 38, 10], True),
    (98, 9, 88, 97, [48, 39, 38, 10], True),
    (100, 9, 90, 99, [49, 40, 10], True),
    (52, 10, 41, 51, [25, 24], False),
    (60, 10, 49, 59, [29, 27], False),
    (66, 10, 55, 65, [32, 29, 28, 27, 26, 25, 11], True),
    (68, 10, 57, 67, [33, 30], False),
    (74, 10, 63, 73, [36, 32, 30, 11], True),
    (76, 10, 65, 75, [37, 33], False),
    (80, 10, 69, 79, [39, 34, 33, 11], True),
    (82, 10, 71, 81, [40, 35, 11], True),
    (84, 10, 73, 83, [41, 36, 11], True),
    (86, 10, 75, 85, [42, 36, 35, 34, 11], True),
    (88, 10, 77, 87, [43, 37, 11], True),
    (92, 10, 81, 91, [45, 38, 37, 36, 35, 11], True),
    (94, 10, 83, 93, [46, 39, 11], True),
    (98, 10, 87, 97, [48, 40, 39, 38, 11], True),
    (100, 10, 89, 99, [49, 41, 11], True),
    (500, 10, 489, 499, [249, 153, 11], True),
    (100, 21, 78, 99, [49, 48], False),
    (200, 45, 154, 199, [99, 98], False),
    (184, 38, 145, 183, [91, 89, 87, 86], False),
    (516, 116, 399, 515, [255, 253], False),
    (832, 200, 631, 831, [415, 414, 413], False),
    (10000, 2475, 7524, 9999, [4999, 4998, 4997, 4996], False),
])


def pow2_form(n: int, value: int) -> str:
    """``value`` as ``2^{n-1} - 2^a - 2^b ...`` (binary expansion of the gap)."""
    gap = (1 << (n - 1)) - value
    if gap < 0:
        return str(value)
    terms = [f"2^{i}" for i in range(gap.bit_length() - 1, -1, -1) if (gap >> i) & 1]
    return "-".join([f"2^{n - 1}", *terms])


@dataclass(frozen=True)
class TableRow:
    table: str
    n: int
    m: int
    route: str
    d: int
    d_printed: int
    N: int | None  # bound via the route the printed value uses
    N_best: int | None
    N_printed: int
    formula: str
    status: str  # match | flag
    reasons: tuple[str, ...] = ()

    @property
    def improved(self) -> bool:
        return self.N_best is not None and self.N_best > self.N_printed

    def line(self) -> str:
        n_str = "-" if self.N is None else pow2_form(self.n, self.N)
        best = "-" if self.N_best is None else pow2_form(self.n, self.N_best)
        parts = [
            f"table={self.table}", f"n={self.n}", f"m={self.m}", f"d={self.d}", f"route={self.route}",
            f"N={n_str}", f"N_best={best}", f"N_printed={self.formula}", f"status={self.status}",
            f"improved={int(self.improved)}",
        ]
        if self.reasons:
            parts.append("reason=" + ";".join(self.reasons))
        return " ".join(parts)


def _bound(n: int, m: int, route: str | None):
    try:
        sel = solve_feasibility(n, m, "C2", route=route)
    except InfeasibleError:
        return None
    return bound_certificate(sel)


def compare(table: str, n: int, m: int, d_printed: int, N_printed: int, route: str, formula: str,
            lead_ok: bool = True) -> TableRow:
    cert = _bound(n, m, route)
    best = _bound(n, m, None)
    reasons = []
    N = d = None
    if cert is None:
        reasons.append(f"{route} route infeasible")
        cert = best
    if cert is not None:
        N = cert.nonlinearity_at_least
        d = cert.degree_lower
    if not lead_ok:
        reasons.append(f"printed leading term is not 2^{n - 1}")
    if d_printed != n - m - 1:
        reasons.append(f"printed degree {d_printed} != n-m-1 = {n - m - 1}")
    if N is None:
        reasons.append("infeasible")
    elif N != N_printed:
        diff = N - N_printed
        reasons.append(f"computed {'exceeds' if diff > 0 else 'is below'} printed by {abs(diff)}")
    status = "match" if not reasons else "flag"
    return TableRow(table, n, m, route, -1 if d is None else d, d_printed, N,
                    None if best is None else best.nonlinearity_at_least, N_printed, formula, status, tuple(reasons))


def low_order_rows(ms: Iterable[int] | None = None, n_range: tuple[int, int] | None = None) -> Iterator[TableRow]:
    ms = set(ms) if ms is not None else None
    for row in LOW_ORDER_ROWS:
        if ms is not None and row.m not in ms:
            continue
        for n in row.ns():
            if n_range and not n_range[0] <= n <= n_range[1]:
                continue
            yield compare("1", n, row.m, n - row.m - 1, row.value(n), "monomial", row.formula())


def high_order_rows(ms: Iterable[int] | None = None, n_range: tuple[int, int] | None = None) -> Iterator[TableRow]:
    ms = set(ms) if ms is not None else None
    for e in HIGH_ORDER_ENTRIES:
        if ms is not None and e.m not in ms:
            continue
        if n_range and not n_range[0] <= e.n <= n_range[1]:
            continue
        route = "monomial" if e.star else "prime"
        yield compare("2", e.n, e.m, e.d, e.value, route, e.formula(), lead_ok=e.lead == e.n - 1)


def reproduce_tables(ms: Iterable[int] | None = None, n_range: tuple[int, int] | None = None,
                     tables: str = "12") -> list[TableRow]:
    """Plan-only comparison against the published tables; ``tables`` picks ``"1"``, ``"2"`` or both."""
    ms = list(ms) if ms is not None else None
    rows = []
    if "1" in tables:
        rows.extend(low_order_rows(ms, n_range))
    if "2" in tables:
        rows.extend(high_order_rows(ms, n_range))
    return rows


def published_value(n: int, m: int) -> int | None:
    """Printed nonlinearity for ``(n, m)``, if either table lists it."""
    for row in LOW_ORDER_ROWS:
        if row.m == m and n in row.ns():
            return row.value(n)
    for e in HIGH_ORDER_ENTRIES:
        if (e.n, e.m) == (n, m):
            return e.value
    return None

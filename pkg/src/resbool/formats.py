"""Text formats for truth tables and seed-function records.

Truth table::

    n=<int>
    <hex>

Hex digit ``j`` (left to right) carries table indices ``4j .. 4j+3`` with
index ``4j`` in the most significant position; tables shorter than four
bits are zero-padded on the right.

A seed file is a sequence of records::

    profile n=<int> m=<int> d=<int|-> N=<int>
    n=<int>
    <hex>
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import TruthTable, check_capacity
from .errors import ParseError, ShapeError

_HEX = re.compile(r"[0-9a-f]*")
_N_LINE = re.compile(r"n=(\d+)")
_PROFILE = re.compile(r"profile\s+n=(\d+)\s+m=(-?\d+)\s+d=(-?\d+|-)\s+N=(\d+)")


def hex_digits(n: int) -> int:
    return max(1, -(-(1 << n) // 4))


def table_to_hex(f: TruthTable) -> str:
    bits = f.bits
    pad = (-bits.size) % 8
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    return np.packbits(bits, bitorder="big").tobytes().hex()[: hex_digits(f.n)]


def format_table(f: TruthTable) -> str:
    return f"n={f.n}\n{table_to_hex(f)}\n"


def _parse_n(line: str, lineno: int) -> int:
    m = _N_LINE.fullmatch(line.strip())
    if not m:
        raise ParseError(f"expected 'n=<int>', got {line.strip()!r}", line=lineno, column=1)
    n = int(m.group(1))
    check_capacity(n)
    return n


def _parse_hex(line: str, n: int, lineno: int) -> TruthTable:
    digits = line.strip()
    bad = _HEX.match(digits).end()
    if bad != len(digits):
        raise ParseError(f"invalid hex digit {digits[bad]!r}", line=lineno, column=bad + 1)
    want = hex_digits(n)
    if len(digits) != want:
        raise ParseError(f"expected {want} hex digits for n={n}, got {len(digits)}",
                         line=lineno, column=len(digits) + 1)
    raw = bytes.fromhex(digits + "0" * (len(digits) % 2))
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="big")[: 1 << n]
    tail = digits and int(digits[-1], 16)
    used = (1 << n) - 4 * (want - 1)
    if used < 4 and tail & ((1 << (4 - used)) - 1):
        raise ParseError("padding bits of the last hex digit must be zero",
                         line=lineno, column=len(digits))
    return TruthTable(n, bits)


def parse_table(text: str) -> TruthTable:
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) < 2:
        raise ParseError("truncated truth-table file: need an 'n=' line and a hex line",
                         line=len(lines) + 1)
    if len(lines) > 2:
        raise ParseError("unexpected content after the hex line", line=3, column=1)
    n = _parse_n(lines[0], 1)
    return _parse_hex(lines[1], n, 2)


def read_table(path) -> TruthTable:
    return parse_table(Path(path).read_text())


def write_table(path, f: TruthTable) -> None:
    Path(path).write_text(format_table(f))


@dataclass(frozen=True)
class SeedRecord:
    n: int
    m: int
    d: int | None
    N: int
    table: TruthTable

    def header(self) -> str:
        d = "-" if self.d is None else str(self.d)
        return f"profile n={self.n} m={self.m} d={d} N={self.N}"


def format_seeds(records) -> str:
    return "".join(f"{r.header()}\n{format_table(r.table)}" for r in records)


def parse_seed_records(text: str) -> list[SeedRecord]:
    """Parse seed records without re-verifying them (see ``families.load_seed_functions``)."""
    lines = text.splitlines()
    records = []
    i = 0
    while i < len(lines):
        if not lines[i].strip() or lines[i].lstrip().startswith("#"):
            i += 1
            continue
        m = _PROFILE.fullmatch(lines[i].strip())
        if not m:
            raise ParseError(f"expected a 'profile n=.. m=.. d=.. N=..' header, got {lines[i].strip()!r}",
                             line=i + 1, column=1)
        if i + 2 >= len(lines):
            raise ParseError("truncated seed record", line=i + 1)
        n = _parse_n(lines[i + 1], i + 2)
        table = _parse_hex(lines[i + 2], n, i + 3)
        pn = int(m.group(1))
        if pn != n:
            raise ParseError(f"profile declares n={pn} but the table has n={n}", line=i + 1)
        d = None if m.group(3) == "-" else int(m.group(3))
        records.append(SeedRecord(pn, int(m.group(2)), d, int(m.group(4)), table))
        i += 3
    return records


def parse_seed_file(path) -> list[SeedRecord]:
    try:
        return parse_seed_records(Path(path).read_text())
    except ShapeError as exc:
        raise ParseError(str(exc)) from exc

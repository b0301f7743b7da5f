import numpy as np
import pytest

from resbool.core import TruthTable
from resbool.errors import ParseError
from resbool.formats import (
    SeedRecord,
    format_seeds,
    format_table,
    hex_digits,
    parse_seed_file,
    parse_seed_records,
    parse_table,
    read_table,
    write_table,
)


@pytest.mark.parametrize("n", range(0, 11))
def test_hex_round_trip(n):
    rng = np.random.default_rng(n)
    f = TruthTable(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))
    text = format_table(f)
    assert len(text.splitlines()[1]) == hex_digits(n)
    assert parse_table(text) == f


def test_hex_layout():
    # index 0 is the most significant bit of the first digit
    f = TruthTable(3, np.array([1, 0, 0, 0, 0, 0, 0, 1], dtype=np.uint8))
    assert format_table(f) == "n=3\n81\n"
    assert format_table(TruthTable(1, np.array([0, 1], dtype=np.uint8))) == "n=1\n4\n"


def test_file_round_trip(tmp_path):
    f = TruthTable.linear(5, 0b10110)
    path = tmp_path / "f.tt"
    write_table(path, f)
    assert read_table(path) == f


@pytest.mark.parametrize("text, line, column", [
    ("n=3\n", 2, None),
    ("m=3\n00\n", 1, 1),
    ("n=3\n0g\n", 2, 2),
    ("n=3\n000\n", 2, 4),
    ("n=3\n00\nextra\n", 3, 1),
    ("n=1\n1\n", 2, 1),  # padding bit set
])
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_table(text)
    assert exc.value.line == line
    assert exc.value.column == column
    assert str(exc.value).startswith(f"line {line}")


def test_seed_records_round_trip(tmp_path):
    recs = [SeedRecord(4, 0, 2, 4, TruthTable.from_monomials(4, [(1,), (2, 3)])),
            SeedRecord(2, -1, None, 1, TruthTable.from_monomials(2, [(1, 2)]))]
    text = "# comment\n\n" + format_seeds(recs)
    back = parse_seed_records(text)
    assert [(r.n, r.m, r.d, r.N, r.table) for r in back] == [(r.n, r.m, r.d, r.N, r.table) for r in recs]
    path = tmp_path / "s.seeds"
    path.write_text(text)
    assert len(parse_seed_file(path)) == 2


def test_seed_record_errors():
    with pytest.raises(ParseError):
        parse_seed_records("profile n=4 m=0 d=2 N=4\nn=4\n")
    with pytest.raises(ParseError):
        parse_seed_records("profile n=3 m=0 d=2 N=4\nn=4\n0000\n")
    with pytest.raises(ParseError):
        parse_seed_records("garbage\n")

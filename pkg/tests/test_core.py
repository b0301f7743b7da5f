import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from resbool.core import (
    TruthTable,
    WalshSpectrum,
    anf,
    concatenate,
    concatenation_spectrum,
    degree,
    fast_walsh,
    fast_walsh_many,
    is_almost_optimal,
    masks_up_to_weight,
    moebius,
    naive_walsh,
    nonlinearity,
    parseval_check,
    profile,
    resiliency_order,
    restricted_walsh,
)
from resbool.errors import CapacityError, ShapeError


def tables(max_n=6):
    return st.integers(0, max_n).flatmap(
        lambda n: st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n).map(
            lambda bits: TruthTable(n, np.array(bits, dtype=np.uint8))))


@settings(max_examples=60, deadline=None)
@given(tables(5))
def test_walsh_matches_definition(f):
    ref = oracles.walsh(f.bits.tolist())
    assert fast_walsh(f).values.tolist() == ref
    assert naive_walsh(f).values.tolist() == ref


@settings(max_examples=40, deadline=None)
@given(tables(5))
def test_profile_matches_definitions(f):
    bits = f.bits.tolist()
    p = profile(f)
    assert p.nonlinearity == oracles.nonlinearity(bits)
    assert p.degree == oracles.degree(bits)
    assert p.balanced == oracles.is_balanced(bits)
    if f.n <= 4:
        assert p.resiliency == oracles.resiliency(bits, f.n)


@settings(max_examples=60, deadline=None)
@given(tables(6))
def test_moebius_is_involution_and_matches_subset_sums(f):
    coeffs = moebius(f.bits)
    assert coeffs.tolist() == oracles.anf_coefficients(f.bits.tolist())
    assert np.array_equal(moebius(coeffs), f.bits)


@settings(max_examples=60, deadline=None)
@given(tables(8))
def test_parseval(f):
    assert parseval_check(fast_walsh(f))


def test_parseval_rejects_wrong_energy():
    assert not parseval_check(WalshSpectrum(2, np.array([4, 0, 0, 1])))


def test_naive_walsh_chunked_path():
    rng = np.random.default_rng(5)
    f = TruthTable(13, rng.integers(0, 2, 1 << 13, dtype=np.uint8))
    assert fast_walsh(f) == naive_walsh(f)


def test_naive_walsh_refuses_large_n():
    with pytest.raises(CapacityError):
        naive_walsh(TruthTable.zeros(15))


def test_fast_walsh_many_rows():
    rng = np.random.default_rng(1)
    rows = rng.integers(0, 2, (7, 32), dtype=np.uint8)
    spectra = fast_walsh_many(rows)
    for r, s in zip(rows, spectra):
        assert s.tolist() == oracles.walsh(r.tolist())


def test_restricted_walsh_agrees():
    rng = np.random.default_rng(2)
    f = TruthTable(7, rng.integers(0, 2, 128, dtype=np.uint8))
    full = fast_walsh(f)
    got = restricted_walsh(f, [0, 3, 127, 3])
    assert got == {w: full[w] for w in (0, 3, 127)}
    with pytest.raises(ValueError):
        restricted_walsh(f, [])


def test_linear_function_profile():
    f = TruthTable.from_monomials(3, [(1,), (2,), (3,)])
    assert f == TruthTable.linear(3, 0b111)
    p = profile(f)
    assert (p.resiliency, p.degree, p.nonlinearity) == (2, 1, 0)


def test_anf_text():
    assert anf(TruthTable.zeros(3)).to_string() == "0"
    assert anf(TruthTable.from_monomials(3, [(3,), (1, 2)])).to_string() == "x1*x2 + x3"
    assert anf(TruthTable.constant(2, 1)).to_string() == "1"
    assert degree(anf(TruthTable.zeros(4))) == -1


def test_bent_profile():
    f = TruthTable.from_monomials(4, [(1, 3), (2, 4)])
    s = fast_walsh(f)
    assert set(np.abs(s.values).tolist()) == {4}
    assert nonlinearity(s) == 6
    assert resiliency_order(s) == -1


def test_almost_optimal_window():
    # n=8: 2^7 - 2^4 <= N < 2^7 - 2^3
    assert is_almost_optimal(8, 112)
    assert is_almost_optimal(8, 119)
    assert not is_almost_optimal(8, 120)
    assert not is_almost_optimal(8, 111)
    assert not is_almost_optimal(7, 56)


def test_masks_up_to_weight():
    assert masks_up_to_weight(3, 1) == [0, 1, 2, 4]


def test_from_function_index_convention():
    # x1 is the least significant bit of the index
    f = TruthTable.from_function(3, lambda x: x[0])
    assert f.bits.tolist() == [0, 1, 0, 1, 0, 1, 0, 1]


def test_table_validation():
    with pytest.raises(ShapeError):
        TruthTable(3, np.zeros(7, dtype=np.uint8))
    with pytest.raises(ShapeError):
        TruthTable(2, np.array([0, 1, 2, 0]))
    with pytest.raises(ShapeError):
        TruthTable.from_monomials(2, [(3,)])
    with pytest.raises(ShapeError):
        TruthTable.zeros(2) ^ TruthTable.zeros(3)


def test_capacity_env(monkeypatch):
    monkeypatch.setenv("RESBOOL_MAX_N", "6")
    with pytest.raises(CapacityError):
        TruthTable.zeros(7)
    monkeypatch.setenv("RESBOOL_MAX_N", "x")
    with pytest.raises(CapacityError):
        TruthTable.zeros(1)


def test_truth_table_is_read_only_and_hashable():
    f = TruthTable.linear(3, 5)
    with pytest.raises(ValueError):
        f.bits[0] = 1
    assert hash(f) == hash(TruthTable.linear(3, 5))
    assert (f ^ f).weight == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_concatenation_spectrum_identity(p, q, seed):
    rng = np.random.default_rng(seed)
    blocks = [TruthTable(p, rng.integers(0, 2, 1 << p, dtype=np.uint8)) for _ in range(1 << q)]
    f = concatenate(blocks)
    block_spec = np.stack([fast_walsh(b).values for b in blocks])
    assert np.array_equal(concatenation_spectrum(block_spec), fast_walsh(f).values)
    # block b sits at the high variables: f(x) = blocks[x >> p](x & (2^p - 1))
    x = int(rng.integers(0, 1 << (p + q)))
    assert f.bits[x] == blocks[x >> p].bits[x & ((1 << p) - 1)]


def test_concatenate_rejects_bad_shapes():
    with pytest.raises(ShapeError):
        concatenate([TruthTable.zeros(2)] * 3)
    with pytest.raises(ShapeError):
        concatenate([TruthTable.zeros(2), TruthTable.zeros(3)])
    with pytest.raises(ShapeError):
        concatenate([])

from math import comb

import numpy as np
import pytest

import oracles
from resbool.errors import CapacityError
from resbool.search import all_profiles, best_nonlinearity, search


@pytest.mark.parametrize("n", [1, 2, 3])
def test_profiles_match_definitions(n):
    prof = all_profiles(n)
    for i, row in enumerate(prof["tables"]):
        bits = row.tolist()
        assert prof["nonlinearity"][i] == oracles.nonlinearity(bits)
        assert prof["degree"][i] == oracles.degree(bits)
        assert prof["resiliency"][i] == oracles.resiliency(bits, n)


def test_four_variable_counts():
    prof = all_profiles(4)
    assert int((prof["resiliency"] >= 0).sum()) == comb(16, 8)
    # bent functions on four variables
    assert int((prof["nonlinearity"] == 6).sum()) == 896
    assert best_nonlinearity(4, 0) == 4
    assert best_nonlinearity(4, 1) == 4
    assert best_nonlinearity(4, 3) == 0


def test_search_results():
    recs = search(4, 0, 4, limit=3)
    assert len(recs) == 3
    for r in recs:
        assert (r.m, r.N) == (0, 4)
        assert oracles.nonlinearity(r.table.bits.tolist()) == 4
        assert oracles.is_balanced(r.table.bits.tolist())
    first = recs[0].table.bits
    assert np.array_equal(first, search(4, 0, 4, limit=1)[0].table.bits)


def test_search_capacity():
    with pytest.raises(CapacityError):
        search(5)

"""Pairing enumerations against independent generation oracles."""

import pytest
from hypothesis import given, strategies as st

from idealbench.pairing import (
    code_unordered,
    comparable,
    decode_unordered,
    is_prefix,
    pair_diag,
    unpair_diag,
)


def diagonal_enumeration(count):
    """Oracle: list ordered pairs by diagonals of constant sum, increasing in b."""
    out = []
    s = 0
    while len(out) < count:
        for b in range(s + 1):
            out.append((s - b, b))
        s += 1
    return out[:count]


def test_pair_diag_matches_diagonal_enumeration():
    oracle = diagonal_enumeration(500)
    for k, (i, b) in enumerate(oracle):
        assert pair_diag(i, b) == k
        assert unpair_diag(k) == (i, b)


@pytest.mark.parametrize(
    "i,b,expected", [(0, 0, 0), (1, 0, 1), (0, 1, 2), (1, 1, 4)]
)
def test_pair_diag_anchor_values(i, b, expected):
    assert pair_diag(i, b) == expected


@pytest.mark.parametrize("k,expected", [(0, (0, 0)), (4, (1, 1)), (5, (0, 2))])
def test_unpair_anchor_values(k, expected):
    assert unpair_diag(k) == expected


def test_pairing_exhaustive_properties():
    codes = {}
    for i in range(101):
        previous = None
        for b in range(101):
            k = pair_diag(i, b)
            assert b <= k
            if previous is not None:
                assert previous < k
            previous = k
            codes[k] = (i, b)
            assert unpair_diag(k) == (i, b)
    assert len(codes) == 101 * 101


@given(st.integers(0, 10**9))
def test_unpair_roundtrip(k):
    i, b = unpair_diag(k)
    assert pair_diag(i, b) == k


@pytest.mark.parametrize("k", [10**18, 10**30 - 1, 10**30, 3**77])
def test_inversions_hold_for_big_codes(k):
    i, b = unpair_diag(k)
    assert pair_diag(i, b) == k
    lo, hi = decode_unordered(k)
    assert code_unordered(lo, hi) == k


@pytest.mark.parametrize("pair,expected", [((0, 1), 0), ((1, 2), 2), ((0, 3), 3)])
def test_code_unordered_values(pair, expected):
    a, b = pair
    assert code_unordered(a, b) == expected
    assert code_unordered(b, a) == expected


def test_code_unordered_bijective_below_50():
    codes = {}
    for a in range(51):
        for b in range(a + 1, 51):
            k = code_unordered(a, b)
            assert k not in codes
            codes[k] = (a, b)
            assert decode_unordered(k) == (a, b)
    assert len(codes) == 51 * 50 // 2


def test_code_unordered_rejects_equal():
    with pytest.raises(ValueError):
        code_unordered(3, 3)


@given(st.integers(0, 10**6))
def test_decode_roundtrip(k):
    lo, hi = decode_unordered(k)
    assert lo < hi
    assert code_unordered(lo, hi) == k


def test_prefix_order():
    assert is_prefix((), (1, 2))
    assert is_prefix((1,), (1, 2))
    assert not is_prefix((2,), (1, 2))
    assert comparable((1,), (1, 2, 3))
    assert not comparable((1, 2), (1, 3))
    # reflexive, antisymmetric, transitive on a small sample
    strings = [(), (0,), (0, 1), (0, 1, 2), (1,), (1, 0)]
    for s in strings:
        assert is_prefix(s, s)
        for t in strings:
            if is_prefix(s, t) and is_prefix(t, s):
                assert s == t
            for u in strings:
                if is_prefix(s, t) and is_prefix(t, u):
                    assert is_prefix(s, u)

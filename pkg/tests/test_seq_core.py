from fractions import Fraction

import pytest
from hypothesis import given

from ccverify.seq_core import ZERO, FiniteSeq, add, basis, inner, norm_sq, scale

from strategies import finite_seqs, small_rationals


def seq(*pairs):
    return FiniteSeq(tuple((n, Fraction(v)) for n, v in pairs))


def test_basis():
    assert basis(1) == seq((1, 1))
    assert basis(5) == seq((5, 1))
    assert add(basis(3), basis(3)) == seq((3, 2))
    with pytest.raises(ValueError):
        basis(0)


def test_add_and_scale():
    assert add(seq((1, 1)), seq((1, -1))) == ZERO
    assert scale(0, seq((1, 3), (7, 2))) == ZERO
    assert add(seq((1, 1), (2, 2)), seq((2, 3))) == seq((1, 1), (2, 5))


def test_inner_and_norm():
    assert inner(basis(1), basis(2)) == 0
    assert inner(seq((1, 2)), seq((1, 3))) == 6
    assert norm_sq(ZERO) == 0
    assert norm_sq(seq((1, 3), (4, 4))) == 25


@pytest.mark.parametrize(
    "entries",
    [((2, 1), (1, 1)), ((1, 1), (1, 2)), ((0, 1),), ((1, 0),)],
)
def test_rejects_non_canonical(entries):
    with pytest.raises(ValueError):
        FiniteSeq(tuple((n, Fraction(v)) for n, v in entries))


def test_json_round_trip_and_strictness():
    x = seq((1, Fraction(-1, 2)), (4, 3))
    assert x.to_json() == {"entries": [[1, "-1/2"], [4, "3/1"]]}
    assert FiniteSeq.from_json(x.to_json()) == x
    for bad in (
        {"entries": [[2, "1/1"], [1, "1/1"]]},
        {"entries": [[1, "2/4"]]},
        {"entries": [[1, "0/1"]]},
        {"entries": [[1, 0.5]]},
        {"entries": [["1", "1/1"]]},
        {"values": []},
    ):
        with pytest.raises(ValueError):
            FiniteSeq.from_json(bad)


@given(finite_seqs(), finite_seqs())
def test_closed_under_operations(x, y):
    for z in (add(x, y), scale(Fraction(3, 7), x), x - y):
        assert FiniteSeq.from_mapping(z.entries) == z
        assert FiniteSeq.from_json(z.to_json()) == z


@given(finite_seqs(), finite_seqs(), finite_seqs(), small_rationals)
def test_bilinearity(x, y, z, c):
    assert inner(add(x, y), z) == inner(x, z) + inner(y, z)
    assert inner(scale(c, x), y) == c * inner(x, y)
    assert inner(x, y) == inner(y, x)


@given(finite_seqs(), finite_seqs(), small_rationals)
def test_norm_identities(x, y, c):
    assert inner(x, x) == norm_sq(x)
    assert norm_sq(scale(c, x)) == c * c * norm_sq(x)
    assert inner(x, y) ** 2 <= norm_sq(x) * norm_sq(y)

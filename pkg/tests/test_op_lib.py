from fractions import Fraction

import pytest
from hypothesis import given

from ccverify.op_lib import (
    adjoint_injectivity_check,
    apply_A,
    apply_A_adjoint,
    dense_range_witness,
    norm_lower_witness,
    norm_upper_bound_check,
    solve_A,
)
from ccverify.seq_core import ZERO, FiniteSeq, add, basis, inner, norm_sq, scale

from strategies import finite_seqs, small_rationals


def seq(*pairs):
    return FiniteSeq(tuple((n, Fraction(v)) for n, v in pairs))


def dense_A_oracle(x: list[Fraction]) -> list[Fraction]:
    """(Ax)_1 = x_1, (Ax)_n = x_n - x_{n-1}, on a plain padded list."""
    padded = list(x) + [Fraction(0)]
    return [padded[0]] + [padded[n] - padded[n - 1] for n in range(1, len(padded))]


def test_apply_examples():
    assert apply_A(basis(1)) == seq((1, 1), (2, -1))
    assert apply_A(seq((1, 1), (2, 1), (3, 1))) == seq((1, 1), (4, -1))
    assert apply_A(ZERO) == ZERO


def test_adjoint_examples():
    assert apply_A_adjoint(basis(1)) == seq((1, 1))
    assert apply_A_adjoint(basis(2)) == seq((1, -1), (2, 1))
    assert inner(apply_A(basis(1)), basis(2)) == -1 == inner(basis(1), apply_A_adjoint(basis(2)))


@given(finite_seqs())
def test_apply_matches_dense_oracle(x):
    m = x.max_index
    dense = dense_A_oracle([x[n] for n in range(1, m + 1)])
    assert apply_A(x) == FiniteSeq.from_mapping((i + 1, v) for i, v in enumerate(dense))
    assert apply_A(x).max_index <= m + 1


@given(finite_seqs(), finite_seqs())
def test_adjoint_identity(x, y):
    assert inner(apply_A(x), y) == inner(x, apply_A_adjoint(y))


@given(finite_seqs(), finite_seqs(), small_rationals)
def test_linearity(x, y, c):
    assert apply_A(add(x, scale(c, y))) == add(apply_A(x), scale(c, apply_A(y)))


def test_norm_upper_examples():
    assert norm_upper_bound_check(basis(1)).witness["ratio"] == 2
    assert norm_upper_bound_check(seq((1, 1), (2, -1))).witness["ratio"] == 3
    with pytest.raises(ValueError):
        norm_upper_bound_check(ZERO)


@given(finite_seqs(min_terms=1))
def test_norm_upper_random(x):
    cert = norm_upper_bound_check(x)
    assert cert.passed and cert.witness["ratio"] <= 4


def test_norm_lower_brute_force():
    for k in range(1, 11):
        x, ratio = norm_lower_witness(k)
        entries = [Fraction((-1) ** (n + 1)) for n in range(1, k + 1)]
        image = dense_A_oracle(entries)
        assert ratio == sum(v * v for v in image) / sum(v * v for v in entries)
        assert ratio == Fraction(4 * k - 2, k)


def test_norm_lower_examples():
    assert norm_lower_witness(1)[1] == 2
    assert norm_lower_witness(2)[1] == 3
    assert norm_lower_witness(100)[1] == Fraction(398, 100)
    ratios = [norm_lower_witness(k)[1] for k in range(1, 60)]
    assert ratios == sorted(ratios)
    # exceeds 4 - eps once k >= 2/eps
    eps = Fraction(1, 25)
    assert norm_lower_witness(50)[1] >= 4 - eps


def test_injectivity():
    assert adjoint_injectivity_check(ZERO).passed
    cert = adjoint_injectivity_check(basis(3))
    assert cert.passed
    assert cert.witness["image"] == seq((2, -1), (3, 1))
    assert cert.witness["contradiction_index"] == 3


@given(finite_seqs(min_terms=1))
def test_injectivity_random(y):
    cert = adjoint_injectivity_check(y)
    assert cert.passed and apply_A_adjoint(y) != ZERO


def test_dense_range_truncations():
    for m in range(1, 51):
        for k in (1, 4, 25):
            x, residual = dense_range_witness(m, k)
            assert residual == Fraction(1, k)
            assert norm_sq(add(apply_A(x), scale(-1, basis(m)))) == residual


@given(finite_seqs())
def test_solve_A_inverts_on_range(x):
    assert solve_A(apply_A(x)) == x


def test_solve_A_rejects_outside_range():
    with pytest.raises(ValueError):
        solve_A(basis(1))

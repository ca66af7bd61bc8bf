import random
from fractions import Fraction

import pytest
import sympy

from ccverify.linsolve import SingularSystem, bareiss_solve, mat_vec, nullspace


def random_matrix(rng, n):
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(n)] for _ in range(n)]


@pytest.mark.parametrize("seed", range(10))
def test_matches_sympy(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    a = random_matrix(rng, n)
    b = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)]
    m = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in a])
    if m.det() == 0:
        pytest.skip("singular draw")
    rhs = sympy.Matrix([sympy.Rational(v.numerator, v.denominator) for v in b])
    expected = [Fraction(int(v.p), int(v.q)) for v in m.LUsolve(rhs)]
    assert bareiss_solve(a, b) == expected
    assert mat_vec(a, expected) == b


def test_pivoting_needed():
    a = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
    assert bareiss_solve(a, [Fraction(2), Fraction(3)]) == [3, 2]


def test_singular():
    a = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    with pytest.raises(SingularSystem):
        bareiss_solve(a, [Fraction(1), Fraction(1)])


def test_nullspace_of_difference_constraints():
    n = 6
    rows = [[Fraction(int(j == k)) - Fraction(int(j == k + 1)) for j in range(n + 1)] for k in range(n)]
    (v,) = nullspace(rows, n + 1)
    assert v == [1] * (n + 1)


def test_nullspace_against_sympy():
    rng = random.Random(4)
    rows = [[Fraction(rng.randint(-3, 3)) for _ in range(5)] for _ in range(3)]
    basis = nullspace(rows, 5)
    m = sympy.Matrix(rows)
    assert len(basis) == len(m.nullspace())
    for v in basis:
        assert mat_vec(rows, v) == [0, 0, 0]

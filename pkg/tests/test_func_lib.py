import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccverify.exact_number import ExactValue, exact_compare, harmonic
from ccverify.func_lib import (
    STANDARD_F,
    IndexTooSmall,
    SeparableQuadratic,
    candidate_subgradient_prefix,
    continuity_gap_witness,
    convexity_margin,
    difference_quotient,
    directional_derivative,
    eval_f,
    eval_f_conj,
    fenchel_young_gap,
    fenchel_young_gap_closed_form,
    improve_conj_point,
    refute_subgradient,
    subdiff_invariance_under_linear_shift,
    witness_not_maximal_monotone,
)
from ccverify.sampling import random_seq
from ccverify.seq_core import ZERO, FiniteSeq, add, basis, inner, norm_sq, scale

from strategies import finite_seqs, small_rationals

F = STANDARD_F


def seq(*pairs):
    return FiniteSeq(tuple((n, Fraction(v)) for n, v in pairs))


def half_zeta2(rat=0):
    return ExactValue.of(rat, {2: Fraction(1, 2)})


def truncated_f_oracle(x: FiniteSeq, terms: int) -> Fraction:
    """Direct partial sum of n^2/2 (x_n - n^-2)^2 over the first ``terms`` indices."""
    return sum(
        (Fraction(n * n, 2) * (x[n] - Fraction(1, n * n)) ** 2 for n in range(1, terms + 1)),
        Fraction(0),
    )


class TestFamily:
    def test_rejects_divergent_members(self):
        with pytest.raises(ValueError):
            SeparableQuadratic(3, 2)
        with pytest.raises(ValueError):
            SeparableQuadratic(0, 2)

    def test_zeta_index(self):
        assert F.zeta_index == 2
        assert SeparableQuadratic(1, 2).zeta_index == 3


class TestEval:
    def test_origin(self):
        assert eval_f(F, ZERO) == half_zeta2()

    def test_first_basis_vector(self):
        assert eval_f(F, basis(1)) == half_zeta2(Fraction(-1, 2))

    def test_first_three_targets(self):
        x = seq((1, 1), (2, Fraction(1, 4)), (3, Fraction(1, 9)))
        assert eval_f(F, x) == half_zeta2(Fraction(-49, 72))

    @settings(max_examples=40)
    @given(finite_seqs(max_index=10))
    def test_matches_truncated_oracle(self, x):
        # value minus the partial sum over 1..M is exactly the tail (zeta(2) - H_M)/2
        m = 12
        diff = eval_f(F, x) - truncated_f_oracle(x, m)
        assert diff == half_zeta2(-harmonic(m) / 2)

    def test_general_member_tail(self):
        q = SeparableQuadratic(1, 2)
        assert eval_f(q, ZERO) == ExactValue.of(0, {3: Fraction(1, 2)})


class TestDirectionalDerivative:
    @pytest.mark.parametrize("n", [1, 2, 7, 100])
    def test_basis_directions_at_origin(self, n):
        assert directional_derivative(F, ZERO, basis(n)) == -1

    def test_examples(self):
        assert directional_derivative(F, basis(1), basis(1)) == 0
        assert directional_derivative(F, ZERO, seq((1, 1), (2, 1))) == -2

    @given(finite_seqs(), finite_seqs(min_terms=1))
    def test_difference_quotients_decrease_to_derivative(self, x, y):
        d = directional_derivative(F, x, y)
        quotients = [difference_quotient(F, x, y, Fraction(1, 2**k)) for k in range(4)]
        curvature = sum((F.weight(n) * v * v for n, v in y.entries), Fraction(0)) / 2
        for k, qk in enumerate(quotients):
            assert qk - d == curvature * Fraction(1, 2**k)
        assert all(a > b > d for a, b in zip(quotients, quotients[1:]))

    @given(finite_seqs(), finite_seqs(), finite_seqs(), small_rationals)
    def test_linear_in_direction(self, x, y, z, c):
        lhs = directional_derivative(F, x, add(y, scale(c, z)))
        assert lhs == directional_derivative(F, x, y) + c * directional_derivative(F, x, z)


class TestContinuityGap:
    def test_examples(self):
        assert continuity_gap_witness(F, ZERO, 4) == Fraction(3, 2)
        assert continuity_gap_witness(F, ZERO, 2) == 1
        assert continuity_gap_witness(F, basis(1), 10) == continuity_gap_witness(F, ZERO, 10)

    def test_closed_form(self):
        # n^2/2 ((2/n - 1/n^2)^2 - 1/n^4) = 2 - 2/n
        for n in range(2, 60):
            assert continuity_gap_witness(F, ZERO, n) == 2 - Fraction(2, n)

    def test_index_errors(self):
        with pytest.raises(IndexTooSmall):
            continuity_gap_witness(F, seq((5, 1)), 5)
        with pytest.raises(IndexTooSmall):
            continuity_gap_witness(F, ZERO, 1)


class TestCandidate:
    def test_examples(self):
        assert candidate_subgradient_prefix(F, ZERO, 3) == seq((1, -1), (2, -1), (3, -1))
        assert candidate_subgradient_prefix(F, basis(1), 2) == seq((2, -1))

    @given(finite_seqs(max_index=8))
    def test_prefix_norm_grows(self, x):
        for n in (10, 50):
            assert norm_sq(candidate_subgradient_prefix(F, x, n)) >= n - len(x)


class TestRefutation:
    def test_zero_candidate_at_origin(self):
        w = refute_subgradient(F, ZERO, ZERO)
        assert (w.index, w.step, w.point, w.margin) == (1, 1, basis(1), Fraction(1, 2))

    def test_default_and_alternative_index(self):
        z = seq((5, 3))
        w = refute_subgradient(F, ZERO, z)
        assert (w.index, w.step, w.margin) == (6, Fraction(1, 36), Fraction(1, 72))
        alt = refute_subgradient(F, ZERO, z, index=5)
        assert (alt.step, alt.margin) == (Fraction(4, 25), Fraction(8, 25))

    def test_index_where_candidate_matches(self):
        with pytest.raises(ValueError):
            refute_subgradient(F, ZERO, seq((1, -1)), index=1)

    @given(finite_seqs(), finite_seqs())
    def test_total_with_closed_form_margin(self, x, z):
        w = refute_subgradient(F, x, z)
        n = w.index
        assert w.margin == (z[n] + 1) ** 2 / (2 * n * n)
        # the subgradient inequality fails at the witness point, checked from scratch
        lhs = eval_f(F, w.point)
        rhs = eval_f(F, x) + inner(z, add(w.point, scale(-1, x)))
        assert exact_compare(lhs, rhs) == -1
        assert (rhs - lhs).as_rational() == w.margin


class TestConjugate:
    def test_examples(self):
        assert eval_f_conj(F, ZERO) == 0
        assert eval_f_conj(F, scale(-1, basis(1))) == Fraction(-1, 2)
        assert eval_f_conj(F, basis(2)) == Fraction(3, 8)

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    @pytest.mark.parametrize("yn", [Fraction(-3), Fraction(-1), Fraction(1, 2), Fraction(2)])
    def test_brute_force_coordinate_supremum(self, n, yn):
        # sup_x y x - n^2/2 (x - n^-2)^2 over the grid k/(2n^2), |x| <= 4
        w, t = Fraction(n * n), Fraction(1, n * n)
        grid = [Fraction(k, 2 * n * n) for k in range(-8 * n * n, 8 * n * n + 1)]
        best = max(yn * x - w * (x - t) ** 2 / 2 for x in grid)
        assert eval_f_conj(F, FiniteSeq(((n, yn),))) == best

    def test_fenchel_young_examples(self):
        assert fenchel_young_gap(F, ZERO, ZERO) == half_zeta2()
        assert fenchel_young_gap(F, ZERO, seq((1, -1), (2, -1))) == half_zeta2(Fraction(-5, 8))

    @settings(max_examples=60)
    @given(finite_seqs(), finite_seqs())
    def test_fenchel_young_closed_form_and_positive(self, x, y):
        gap = fenchel_young_gap(F, x, y)
        assert gap == fenchel_young_gap_closed_form(F, x, y)
        assert exact_compare(gap, 0) == 1

    def test_gap_along_candidate_prefix(self):
        for n in (1, 5, 40):
            y = candidate_subgradient_prefix(F, ZERO, n)
            assert fenchel_young_gap(F, ZERO, y) == half_zeta2(-harmonic(n) / 2)

    def test_improve_examples(self):
        z1, d1 = improve_conj_point(F, ZERO)
        assert (z1, d1) == (seq((1, -1)), Fraction(1, 2))
        z2, d2 = improve_conj_point(F, z1)
        assert (z2, d2) == (seq((1, -1), (2, -1)), Fraction(1, 8))

    @given(finite_seqs())
    def test_improve_decreases_exactly(self, z):
        better, dec = improve_conj_point(F, z)
        m = z.max_index + 1
        assert dec == Fraction(1, 2 * m * m)
        assert eval_f_conj(F, better) == eval_f_conj(F, z) - dec


class TestConvexity:
    @given(finite_seqs(), finite_seqs(), st.fractions(min_value=0, max_value=1, max_denominator=20))
    def test_convexity_margin_nonnegative(self, x, y, lam):
        assert convexity_margin(F, x, y, lam) >= 0

    def test_lsc_probe_along_bumps(self):
        rng = random.Random(3)
        for _ in range(10):
            x = random_seq(rng)
            for k in range(max(2, x.max_index + 1), x.max_index + 30):
                bumped = add(x, scale(Fraction(2, k), basis(k)))
                assert (eval_f(F, bumped) - eval_f(F, x)).as_rational() >= Fraction(1, 4)


class TestShiftAndMonotone:
    def test_shift_by_first_basis_vector(self):
        cert = subdiff_invariance_under_linear_shift(F, basis(1), ZERO, ZERO)
        assert cert.passed
        # z - ell = -e_1 matches the candidate at index 1, so index 2 is used
        assert cert.margin == Fraction(1, 8)
        assert cert.witness["difference_values"] == [1, 0]

    def test_shift_difference_value(self):
        cert = subdiff_invariance_under_linear_shift(F, seq((2, 5)), ZERO)
        assert cert.witness["difference_values"][0] == 5

    def test_shift_rejects_zero(self):
        with pytest.raises(ValueError):
            subdiff_invariance_under_linear_shift(F, ZERO, ZERO)

    @given(finite_seqs(min_terms=1), finite_seqs(), finite_seqs())
    def test_shift_random(self, ell, x, z):
        assert subdiff_invariance_under_linear_shift(F, ell, x, z).passed

    def test_monotone_extension(self):
        assert witness_not_maximal_monotone(F, ZERO, ZERO).passed
        assert witness_not_maximal_monotone(F, basis(1), basis(2)).passed
        rng = random.Random(11)
        sample = [(random_seq(rng), random_seq(rng)) for _ in range(10)]
        cert = witness_not_maximal_monotone(F, basis(1), basis(2), sample)
        assert cert.passed and cert.witness["sample_size"] == 10

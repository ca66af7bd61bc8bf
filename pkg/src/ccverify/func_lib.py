"""Separable quadratics on c_c and the witnesses for their pathologies.

The family is ``f(x) = sum_n w_n/2 (x_n - t_n)^2`` with ``w_n = n^alpha`` and
``t_n = n^-beta``. With ``alpha = beta = 2`` this is the function whose
subdifferential is empty at every point of c_c.

Every value of ``f`` splits into a finite rational part and the tail
``1/2 sum_{n > N} w_n t_n^2 = 1/2 (zeta(s) - H_N^(s))`` with ``s = 2 beta - alpha``,
so results are exact :class:`ExactValue` objects. Differences of values at
points that agree far out are rational; routines that need such a difference
go through :meth:`ExactValue.as_rational`, which raises if the zeta parts did
not cancel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .certificate import Certificate, jsonify
from .exact_number import ExactValue, as_rational, harmonic
from .seq_core import FiniteSeq, ZERO, add, basis, inner, scale


class IndexTooSmall(ValueError):
    """The requested coordinate does not produce the continuity gap."""


@dataclass(frozen=True)
class SeparableQuadratic:
    alpha: int = 2
    beta: int = 2

    def __post_init__(self):
        if self.alpha < 1 or self.beta < 1:
            raise ValueError("exponents must be positive integers")
        if 2 * self.beta - self.alpha < 2:
            raise ValueError(
                f"2*beta - alpha must be >= 2 for a finite value, got {2 * self.beta - self.alpha}"
            )

    @property
    def zeta_index(self) -> int:
        return 2 * self.beta - self.alpha

    def weight(self, n: int) -> Fraction:
        return Fraction(n**self.alpha)

    def target(self, n: int) -> Fraction:
        return Fraction(1, n**self.beta)

    def coefficient_gradient(self, n: int, xn: Fraction) -> Fraction:
        """``w_n (x_n - t_n)``: the only coordinate a subgradient could have."""
        return self.weight(n) * (xn - self.target(n))

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta}


STANDARD_F = SeparableQuadratic(2, 2)


@dataclass(frozen=True)
class RefutationWitness:
    """A point ``y`` with ``f(y) < f(x) + <z, y - x>`` by exactly ``margin``."""

    index: int
    step: Fraction
    point: FiniteSeq
    margin: Fraction

    def __post_init__(self):
        if self.margin <= 0:
            raise ValueError("refutation margin must be strictly positive")

    def to_json(self) -> dict:
        return jsonify({"index": self.index, "step": self.step, "point": self.point, "margin": self.margin})


def eval_f(q: SeparableQuadratic, x: FiniteSeq) -> ExactValue:
    # every coordinate contributes w t^2 / 2 = n^-s / 2 at x_n = 0, which sums to
    # zeta(s)/2; the support only adds w x_n (x_n/2 - t_n) on top of that
    s = q.zeta_index
    finite = sum((q.weight(n) * xn * (xn / 2 - q.target(n)) for n, xn in x.entries), Fraction(0))
    return ExactValue.of(finite, {s: Fraction(1, 2)})


def directional_derivative(q: SeparableQuadratic, x: FiniteSeq, y: FiniteSeq) -> Fraction:
    xd = x.as_dict()
    return sum(
        (q.coefficient_gradient(n, xd.get(n, Fraction(0))) * yn for n, yn in y.entries),
        Fraction(0),
    )


def difference_quotient(q: SeparableQuadratic, x: FiniteSeq, y: FiniteSeq, t) -> Fraction:
    t = as_rational(t)
    if t == 0:
        raise ValueError("step must be nonzero")
    return (eval_f(q, add(x, scale(t, y))) - eval_f(q, x)).as_rational() / t


def continuity_gap_witness(q: SeparableQuadratic, x: FiniteSeq, n: int) -> Fraction:
    """Exact ``f(x + (2/n) e_n) - f(x)``, required to be at least 1/4."""
    if n <= x.max_index or n < 2:
        raise IndexTooSmall(f"index {n} must exceed max support {x.max_index} and be >= 2")
    bumped = add(x, scale(Fraction(2, n), basis(n)))
    gap = (eval_f(q, bumped) - eval_f(q, x)).as_rational()
    if gap < Fraction(1, 4):
        raise IndexTooSmall(f"gap {gap} < 1/4 at index {n}")
    return gap


def candidate_subgradient_prefix(q: SeparableQuadratic, x: FiniteSeq, n_terms: int) -> FiniteSeq:
    if n_terms < 1:
        raise ValueError("prefix length must be positive")
    xd = x.as_dict()
    return FiniteSeq.from_mapping(
        (n, q.coefficient_gradient(n, xd.get(n, Fraction(0)))) for n in range(1, n_terms + 1)
    )


def refute_subgradient(
    q: SeparableQuadratic, x: FiniteSeq, z: FiniteSeq, index: int | None = None
) -> RefutationWitness:
    """Show ``z`` is not a subgradient of ``f`` at ``x``.

    By default the coordinate just past both supports is used; there ``z``
    vanishes while any subgradient would need ``-w_n t_n``. Moving along that
    coordinate by ``t = (z_n - c_n)/w_n`` beats the supporting hyperplane by
    ``(z_n - c_n)^2 / (2 w_n)``. The margin is re-derived from exact values of
    ``f`` and must agree with that formula.
    """
    if index is None:
        index = max(x.max_index, z.max_index) + 1
    w = q.weight(index)
    mismatch = z[index] - q.coefficient_gradient(index, x[index])
    if mismatch == 0:
        raise ValueError(f"z matches the coordinate gradient at index {index}; pick another index")
    step = mismatch / w
    y = FiniteSeq.from_mapping(x.entries + ((index, step),))
    # f is separable, so f(x) - f(y) only sees the moved coordinate
    before = FiniteSeq.from_mapping(((index, x[index]),))
    after = FiniteSeq.from_mapping(((index, y[index]),))
    margin = (eval_f(q, before) - eval_f(q, after)).as_rational() + z[index] * step
    expected = mismatch * mismatch / (2 * w)
    if margin != expected:
        raise AssertionError(f"refutation margin {margin} != closed form {expected}")
    return RefutationWitness(index, step, y, margin)


def eval_f_conj(q: SeparableQuadratic, y: FiniteSeq) -> Fraction:
    """Conjugate, coordinatewise ``y_n^2/(2 w_n) + t_n y_n``."""
    return sum(
        (yn * yn / (2 * q.weight(n)) + q.target(n) * yn for n, yn in y.entries),
        Fraction(0),
    )


def fenchel_young_gap(q: SeparableQuadratic, x: FiniteSeq, y: FiniteSeq) -> ExactValue:
    return eval_f(q, x) + eval_f_conj(q, y) - inner(x, y)


def fenchel_young_gap_closed_form(q: SeparableQuadratic, x: FiniteSeq, y: FiniteSeq) -> ExactValue:
    """``sum_n (y_n - w_n(x_n - t_n))^2 / (2 w_n)`` with the untouched tail as a zeta value."""
    s = q.zeta_index
    m = max(x.max_index, y.max_index)
    xd, yd = x.as_dict(), y.as_dict()
    finite = Fraction(0)
    for n in range(1, m + 1):
        r = yd.get(n, Fraction(0)) - q.coefficient_gradient(n, xd.get(n, Fraction(0)))
        finite += r * r / (2 * q.weight(n))
    return ExactValue.of(finite - harmonic(m, s) / 2, {s: Fraction(1, 2)})


def improve_conj_point(q: SeparableQuadratic, z: FiniteSeq) -> tuple[FiniteSeq, Fraction]:
    """Lower the conjugate by filling the next free coordinate with its minimizer."""
    m = z.max_index + 1
    w, t = q.weight(m), q.target(m)
    better = add(z, scale(-w * t, basis(m)))
    decrease = eval_f_conj(q, z) - eval_f_conj(q, better)
    if decrease != w * t * t / 2 or decrease <= 0:
        raise AssertionError(f"unexpected decrease {decrease} at index {m}")
    return better, decrease


def convexity_margin(q: SeparableQuadratic, x: FiniteSeq, y: FiniteSeq, lam) -> Fraction:
    """``lam f(x) + (1-lam) f(y) - f(lam x + (1-lam) y)``; rational because the tails cancel."""
    lam = as_rational(lam)
    if not 0 <= lam <= 1:
        raise ValueError("lam must lie in [0, 1]")
    mid = add(scale(lam, x), scale(1 - lam, y))
    return (lam * eval_f(q, x) + (1 - lam) * eval_f(q, y) - eval_f(q, mid)).as_rational()


def subdiff_invariance_under_linear_shift(
    q: SeparableQuadratic, ell: FiniteSeq, x: FiniteSeq, z: FiniteSeq = ZERO
) -> Certificate:
    """Adding the bounded functional ``<ell, .>`` keeps the subdifferential empty.

    ``z`` is refuted for ``f + ell`` through ``z - ell`` against ``f``; the
    margin is then checked again directly on ``f + ell``. Since ``f + ell``
    and ``f`` differ by ``<ell, .>``, which is nonconstant, the two functions
    are not equal up to a constant even though both subdifferentials agree.
    """
    if not ell:
        raise ValueError("ell must be nonzero")

    def shifted(p: FiniteSeq) -> ExactValue:
        return eval_f(q, p) + inner(ell, p)

    wit = refute_subgradient(q, x, add(z, scale(-1, ell)))
    direct = (shifted(x) - shifted(wit.point)).as_rational() + inner(z, add(wit.point, scale(-1, x)))
    k = ell.support[0]
    diff_at_ek = (shifted(basis(k)) - eval_f(q, basis(k))).as_rational()
    diff_at_zero = (shifted(ZERO) - eval_f(q, ZERO)).as_rational()
    passed = direct == wit.margin and direct > 0 and diff_at_ek != diff_at_zero
    return Certificate(
        claim="subdifferential of f + <ell,.> is empty, yet f + <ell,.> - f is not constant",
        passed=passed,
        witness={
            "ell": ell,
            "x": x,
            "z": z,
            "refutation": wit,
            "difference_points": [basis(k), ZERO],
            "difference_values": [diff_at_ek, diff_at_zero],
        },
        margin=direct,
    )


def witness_not_maximal_monotone(
    q: SeparableQuadratic,
    x: FiniteSeq,
    z: FiniteSeq,
    sample: list[tuple[FiniteSeq, FiniteSeq]] = (),
) -> Certificate:
    """Every sampled pair lies outside the graph of the subdifferential.

    The sampled graph is therefore empty and ``(x, z)`` extends it
    monotonically, while ``(x, z)`` itself is refuted as a graph point, so the
    extension is proper.
    """
    refutations = [refute_subgradient(q, px, pz) for px, pz in sample]
    own = refute_subgradient(q, x, z)
    return Certificate(
        claim="graph of the subdifferential is empty on the sample; (x, z) is a proper monotone extension",
        passed=all(r.margin > 0 for r in refutations) and own.margin > 0,
        witness={
            "x": x,
            "z": z,
            "sample_size": len(refutations),
            "sampled_graph_points": 0,
            "own_refutation": own,
        },
        margin=min([own.margin] + [r.margin for r in refutations]),
    )

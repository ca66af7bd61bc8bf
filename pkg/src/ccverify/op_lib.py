"""The backward difference operator on c_c and its adjoint.

``(A x)_1 = x_1`` and ``(A x)_n = x_n - x_{n-1}`` for ``n > 1``; the adjoint
on finitely supported vectors is ``(A* y)_n = y_n - y_{n+1}``.
"""

from __future__ import annotations

from fractions import Fraction

from .certificate import Certificate
from .seq_core import FiniteSeq, add, basis, norm_sq, scale


def apply_A(x: FiniteSeq) -> FiniteSeq:
    out: dict[int, Fraction] = {}
    for n, v in x.entries:
        out[n] = out.get(n, Fraction(0)) + v
        out[n + 1] = out.get(n + 1, Fraction(0)) - v
    return FiniteSeq.from_mapping(out)


def apply_A_adjoint(y: FiniteSeq) -> FiniteSeq:
    out: dict[int, Fraction] = {}
    for n, v in y.entries:
        out[n] = out.get(n, Fraction(0)) + v
        if n > 1:
            out[n - 1] = out.get(n - 1, Fraction(0)) - v
    return FiniteSeq.from_mapping(out)


def solve_A(y: FiniteSeq) -> FiniteSeq:
    """Preimage in c_c by partial sums; exists iff the entries of ``y`` sum to zero."""
    if sum((v for _, v in y.entries), Fraction(0)) != 0:
        raise ValueError("only zero-sum sequences lie in the range of A")
    acc = Fraction(0)
    out = []
    prev = 0
    for n, v in y.entries:
        if acc != 0:
            out.extend((k, acc) for k in range(prev, n))
        acc += v
        prev = n
    return FiniteSeq.from_mapping(out)


def norm_upper_bound_check(x: FiniteSeq) -> Certificate:
    if not x:
        raise ValueError("the norm ratio is undefined at x = 0")
    ratio = norm_sq(apply_A(x)) / norm_sq(x)
    return Certificate(
        claim="||Ax||^2 <= 4 ||x||^2",
        passed=ratio <= 4,
        witness={"x": x, "ratio": ratio},
        margin=4 - ratio,
    )


def alternating_vector(k: int) -> FiniteSeq:
    return FiniteSeq(tuple((n, Fraction((-1) ** (n + 1))) for n in range(1, k + 1)))


def norm_lower_witness(k: int) -> tuple[FiniteSeq, Fraction]:
    """Alternating signs on ``1..k``; the ratio ``(4k-2)/k`` tends to 4."""
    if k < 1:
        raise ValueError("k must be positive")
    x = alternating_vector(k)
    return x, norm_sq(apply_A(x)) / norm_sq(x)


def adjoint_injectivity_check(y: FiniteSeq) -> Certificate:
    """Show ``A* y != 0`` for ``y != 0`` by looking at the last support index.

    Back substitution ``y_n = y_{n+1}`` from beyond the support downwards
    forces every entry to vanish; the contradiction shows up at the last
    nonzero entry, where ``(A* y)_m = y_m``.
    """
    image = apply_A_adjoint(y)
    if not y:
        return Certificate(
            claim="A* is injective (vacuous at y = 0)",
            passed=not image,
            witness={"y": y, "image": image},
        )
    m = y.max_index
    return Certificate(
        claim="A* y != 0 for y != 0",
        passed=bool(image) and image[m] == y[m] != 0,
        witness={"y": y, "image": image, "contradiction_index": m, "image_value": image[m]},
        margin=abs(image[m]),
    )


def dense_range_witness(m: int, k: int) -> tuple[FiniteSeq, Fraction]:
    """A point ``x`` in c_c with ``||A x - e_m||^2 = 1/k``.

    ``x`` ramps linearly from 1 at index ``m`` down to 0 after ``k`` steps, so
    ``A x - e_m`` spreads a unit mass over ``k`` coordinates.
    """
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive")
    x = FiniteSeq.from_mapping((m + j, Fraction(k - j, k)) for j in range(k))
    residual = norm_sq(add(apply_A(x), scale(-1, basis(m))))
    return x, residual

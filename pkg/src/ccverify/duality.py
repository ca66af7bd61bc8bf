"""Fenchel pairs built from the catalog, and the duality pathologies they exhibit.

Two pairs matter here. With ``g`` the indicator of the origin and no
operator, the dual has no solution, the sum rule fails and the infimal
convolution of the conjugates is not attained. With ``g = 0`` and the
difference operator ``A``, primal and dual optimal values differ by
``zeta(2)/2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .certificate import Certificate, jsonify
from .exact_number import (
    DEFAULT_BUDGET,
    DEFAULT_PRECISION_BITS,
    Budget,
    Enclosure,
    ExactValue,
    harmonic,
    to_decimal,
    zeta_enclosure,
)
from .func_lib import (
    STANDARD_F,
    SeparableQuadratic,
    convexity_margin,
    directional_derivative,
    eval_f,
    eval_f_conj,
    improve_conj_point,
    refute_subgradient,
)
from .linsolve import SingularSystem, bareiss_solve, mat_vec, nullspace
from .op_lib import adjoint_injectivity_check, apply_A, apply_A_adjoint
from .sampling import random_seq, random_unit_interval
from .seq_core import FiniteSeq, ZERO, inner, norm_sq, scale

KINDS = ("separable_quadratic", "zero", "indicator_origin", "linear")
ALL_OF_CC = "all_of_cc"
ORIGIN_ONLY = "origin_only"
NOWHERE = "nowhere"
EVERYWHERE = "everywhere"


class UnsupportedDescriptor(ValueError):
    pass


class _Infinite:
    """The value +infinity of an extended-real function."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def to_json(self) -> str:
        return "infinite"


INFINITE = _Infinite()


@dataclass(frozen=True)
class ConvexFnDesc:
    kind: str
    quadratic: Optional[SeparableQuadratic] = None
    functional: Optional[FiniteSeq] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedDescriptor(f"unknown function kind {self.kind!r}")
        if (self.kind == "separable_quadratic") != (self.quadratic is not None):
            raise ValueError("a quadratic is required exactly for separable_quadratic")
        if (self.kind == "linear") != (self.functional is not None):
            raise ValueError("a functional is required exactly for linear")

    @property
    def domain_tag(self) -> str:
        return ORIGIN_ONLY if self.kind == "indicator_origin" else ALL_OF_CC

    @property
    def continuity_tag(self) -> str:
        # the indicator is discontinuous at its only finite point
        return NOWHERE if self.kind in ("separable_quadratic", "indicator_origin") else EVERYWHERE

    def to_json(self) -> dict:
        out = {"kind": self.kind, "domain": self.domain_tag, "continuity": self.continuity_tag}
        if self.quadratic is not None:
            out["quadratic"] = self.quadratic.to_json()
        if self.functional is not None:
            out["functional"] = self.functional.to_json()
        return out


def quadratic_fn(q: SeparableQuadratic = STANDARD_F) -> ConvexFnDesc:
    return ConvexFnDesc("separable_quadratic", quadratic=q)


def zero_fn() -> ConvexFnDesc:
    return ConvexFnDesc("zero")


def indicator_origin() -> ConvexFnDesc:
    return ConvexFnDesc("indicator_origin")


def linear_fn(ell: FiniteSeq) -> ConvexFnDesc:
    return ConvexFnDesc("linear", functional=ell)


def evaluate(desc: ConvexFnDesc, x: FiniteSeq):
    """Value at ``x`` as an :class:`ExactValue`, or ``INFINITE``."""
    if desc.kind == "separable_quadratic":
        return eval_f(desc.quadratic, x)
    if desc.kind == "zero":
        return ExactValue()
    if desc.kind == "indicator_origin":
        return ExactValue() if not x else INFINITE
    if desc.kind == "linear":
        return ExactValue(inner(desc.functional, x))
    raise UnsupportedDescriptor(desc.kind)


def conjugate(desc: ConvexFnDesc, y: FiniteSeq):
    """Conjugate at a finitely supported dual vector."""
    if desc.kind == "separable_quadratic":
        return ExactValue(eval_f_conj(desc.quadratic, y))
    if desc.kind == "zero":
        return ExactValue() if not y else INFINITE
    if desc.kind == "indicator_origin":
        return ExactValue()
    if desc.kind == "linear":
        return ExactValue() if y == desc.functional else INFINITE
    raise UnsupportedDescriptor(desc.kind)


def _ext_add(a, b):
    if a is INFINITE or b is INFINITE:
        return INFINITE
    return a + b


@dataclass(frozen=True)
class FenchelPair:
    f_desc: ConvexFnDesc
    g_desc: ConvexFnDesc
    use_operator: bool = False

    def _op(self, x: FiniteSeq) -> FiniteSeq:
        return apply_A(x) if self.use_operator else x

    def _op_adj(self, y: FiniteSeq) -> FiniteSeq:
        return apply_A_adjoint(y) if self.use_operator else y

    def primal(self, x: FiniteSeq):
        return _ext_add(evaluate(self.f_desc, self._op(x)), evaluate(self.g_desc, x))

    def dual(self, y: FiniteSeq):
        """``-f*(y) - g*(-A* y)``; ``None`` stands for minus infinity."""
        total = _ext_add(conjugate(self.f_desc, y), conjugate(self.g_desc, scale(-1, self._op_adj(y))))
        return None if total is INFINITE else -total

    def to_json(self) -> dict:
        return {"f": self.f_desc.to_json(), "g": self.g_desc.to_json(), "operator": "A" if self.use_operator else "identity"}


SUM_RULE_PAIR = FenchelPair(quadratic_fn(), indicator_origin(), use_operator=False)
GAP_PAIR = FenchelPair(quadratic_fn(), zero_fn(), use_operator=True)


def dd_f_compose_A(x: FiniteSeq, y: FiniteSeq, q: SeparableQuadratic = STANDARD_F) -> Fraction:
    return directional_derivative(q, apply_A(x), apply_A(y))


def _convexity_sweep_compose_A(rng: random.Random, pairs: int, q: SeparableQuadratic) -> Fraction:
    worst = None
    for _ in range(pairs):
        x, y = random_seq(rng), random_seq(rng)
        lam = random_unit_interval(rng)
        m = convexity_margin(q, apply_A(x), apply_A(y), lam)
        worst = m if worst is None else min(worst, m)
    return worst if worst is not None else Fraction(0)


def certify_primal_min_at_zero(
    seed: int = 0,
    directions: int = 100,
    pairs: int = 50,
    digits: int = 6,
    budget: Budget = DEFAULT_BUDGET,
) -> Certificate:
    """Zero minimizes ``f o A``: a vanishing directional derivative plus convexity."""
    rng = random.Random(seed)
    dds = [dd_f_compose_A(ZERO, random_seq(rng)) for _ in range(directions)]
    worst_convexity = _convexity_sweep_compose_A(rng, pairs, STANDARD_F)
    value = eval_f(STANDARD_F, apply_A(ZERO))
    text, enc = to_decimal(value, digits, budget)
    return Certificate(
        claim="0 minimizes f(Ax) with value zeta(2)/2",
        passed=all(d == 0 for d in dds) and worst_convexity >= 0 and value == ExactValue.of(0, {2: Fraction(1, 2)}),
        witness={
            "directions_checked": directions,
            "nonzero_directional_derivatives": sum(1 for d in dds if d != 0),
            "convexity_pairs": pairs,
            "min_convexity_margin": worst_convexity,
            "primal_value": value,
            "primal_decimal": text,
        },
        margin=worst_convexity,
        enclosure=enc,
    )


def _dense_A(rows: int, cols: int) -> list[list[Fraction]]:
    m = [[Fraction(0)] * cols for _ in range(rows)]
    for j in range(cols):
        m[j][j] = Fraction(1)
        if j + 1 < rows:
            m[j + 1][j] = Fraction(-1)
    return m


def solve_truncated_primal(
    n: int, use_operator: bool = True, q: SeparableQuadratic = STANDARD_F
) -> tuple[FiniteSeq, ExactValue]:
    """Minimize ``f(Ax)`` (or ``f(x)``) over ``x`` supported on ``1..n``.

    The stationarity conditions ``B^T D (B x - t) = 0`` are assembled with
    ``B`` the ``(n+1) x n`` block of ``A`` (or the identity), ``D`` the
    weights and ``t`` the targets, and solved exactly. Coordinates beyond
    ``n + 1`` do not depend on ``x`` and only contribute the zeta tail.
    """
    if n < 1:
        raise ValueError("truncation must be positive")
    rows = n + 1 if use_operator else n
    b = _dense_A(rows, n) if use_operator else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    w = [q.weight(i + 1) for i in range(rows)]
    t = [q.target(i + 1) for i in range(rows)]
    normal = [
        [sum((b[k][i] * w[k] * b[k][j] for k in range(rows)), Fraction(0)) for j in range(n)]
        for i in range(n)
    ]
    rhs = [sum((b[k][i] * w[k] * t[k] for k in range(rows)), Fraction(0)) for i in range(n)]
    try:
        sol = bareiss_solve(normal, rhs)
    except SingularSystem as exc:  # pragma: no cover - positive definite by construction
        raise AssertionError("normal equations of a positive definite system were singular") from exc
    residual = [a - r for a, r in zip(mat_vec(normal, sol), rhs)]
    if any(residual):
        raise AssertionError(f"nonzero residual {residual}")
    x = FiniteSeq.from_mapping((i + 1, v) for i, v in enumerate(sol))
    value = eval_f(q, apply_A(x) if use_operator else x)
    return x, value


def normal_equations_residual(x: FiniteSeq, n: int, q: SeparableQuadratic = STANDARD_F) -> list[Fraction]:
    """Gradient of ``x -> f(Ax)`` on coordinates ``1..n``, i.e. ``A* grad f(Ax)`` truncated."""
    ax = apply_A(x)
    grad = FiniteSeq.from_mapping((k, q.coefficient_gradient(k, ax[k])) for k in range(1, n + 2))
    back = apply_A_adjoint(grad)
    return [back[i] for i in range(1, n + 1)]


def solve_truncated_dual(n: int, q: SeparableQuadratic = STANDARD_F) -> tuple[FiniteSeq, Fraction]:
    """Maximize ``-f*(y)`` over ``y`` on ``1..n+1`` with ``(A* y)_k = 0`` for ``k <= n``.

    The constraint kernel is computed by exact elimination; it is the line of
    constant vectors, along which the concave objective is maximized in
    closed form.
    """
    if n < 1:
        raise ValueError("truncation must be positive")
    cols = n + 1
    constraints = [[Fraction(0)] * cols for _ in range(n)]
    for k in range(n):
        constraints[k][k] = Fraction(1)
        constraints[k][k + 1] = Fraction(-1)
    kernel = nullspace(constraints, cols)
    if len(kernel) != 1:
        raise AssertionError(f"expected a one-dimensional kernel, got {len(kernel)}")
    v = kernel[0]
    curvature = sum((v[i] ** 2 / q.weight(i + 1) for i in range(cols)), Fraction(0))
    slope = sum((q.target(i + 1) * v[i] for i in range(cols)), Fraction(0))
    c = -slope / curvature
    y = FiniteSeq.from_mapping((i + 1, c * v[i]) for i in range(cols))
    return y, -eval_f_conj(q, y)


@dataclass(frozen=True)
class GapReport:
    primal_value: ExactValue
    dual_value: ExactValue
    gap_enclosure: Enclosure
    truncation_table: tuple[tuple[int, Fraction], ...]
    certificates: tuple[Certificate, ...] = ()

    @property
    def passed(self) -> bool:
        table_ok = all(a[1] <= b[1] for a, b in zip(self.truncation_table, self.truncation_table[1:]))
        return (
            self.gap_enclosure.lo > 0
            and table_ok
            and all(v <= self.gap_enclosure.hi for _, v in self.truncation_table)
            and all(c.passed for c in self.certificates)
        )

    def to_json(self) -> dict:
        return {
            "primal_value": self.primal_value.to_json(),
            "dual_value": self.dual_value.to_json(),
            "gap_enclosure": self.gap_enclosure.to_json(),
            "truncation_table": [[n, jsonify(v)] for n, v in self.truncation_table],
            "certificates": [c.to_json() for c in self.certificates],
            "passed": self.passed,
        }


def truncation_table(max_n: int, q: SeparableQuadratic = STANDARD_F) -> tuple[tuple[int, Fraction], ...]:
    return tuple((n, solve_truncated_dual(n, q)[1]) for n in range(1, max_n + 1))


def certify_duality_gap(
    zeta_n: int = 10**4,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    truncation_max: int = 64,
    seed: int = 0,
    samples: int = 20,
) -> GapReport:
    """Primal value ``zeta(2)/2`` against dual value 0 for ``min f(Ax) + 0``.

    ``g = 0`` has ``g* = indicator of {0}``, so only ``y`` with ``A* y = 0``
    are dual feasible, and injectivity of ``A*`` leaves ``y = 0``.
    """
    rng = random.Random(seed)
    primal_value = GAP_PAIR.primal(ZERO)
    dual_value = GAP_PAIR.dual(ZERO)
    injectivity = [adjoint_injectivity_check(random_seq(rng, min_terms=1)) for _ in range(samples)]
    infeasible = []
    for _ in range(samples):
        y = random_seq(rng, min_terms=1)
        infeasible.append(GAP_PAIR.dual(y) is None)
    gap = primal_value - dual_value
    enc = gap.enclose(zeta_n, precision_bits)
    table = truncation_table(truncation_max)
    primal_lo = primal_value.enclose(zeta_n, precision_bits).lo
    weak = Certificate(
        claim="truncated dual values stay below the primal value",
        passed=all(v < primal_lo for _, v in table),
        witness={"largest_truncated_dual": table[-1][1] if table else None, "primal_lower_bound": primal_lo},
        margin=primal_lo - table[-1][1] if table else None,
    )
    feasible = Certificate(
        claim="the only dual feasible point is y = 0",
        passed=all(c.passed for c in injectivity) and all(infeasible),
        witness={"injectivity_samples": len(injectivity), "infeasible_samples": sum(infeasible)},
    )
    return GapReport(primal_value, dual_value, enc, table, (feasible, weak))


def no_gap_evidence(
    max_n: int = 64, zeta_n: int = 10**4, precision_bits: int = DEFAULT_PRECISION_BITS
) -> Certificate:
    """Numerical evidence that ``min f + indicator`` has no duality gap.

    The dual objective is ``-f*(y)`` (the indicator's conjugate vanishes) and
    its value at the truncated candidate ``(-1, ..., -1)`` is ``H_N/2``. The
    residual against the primal value ``zeta(2)/2`` shrinks like ``1/(2N)``.
    This is evidence, not a proof that the supremum equals the primal value.
    """
    primal = SUM_RULE_PAIR.primal(ZERO)
    rows = []
    for n in range(1, max_n + 1):
        y = FiniteSeq.from_mapping((k, -1) for k in range(1, n + 1))
        d = SUM_RULE_PAIR.dual(y)
        rows.append((n, d.as_rational(), (primal - d).enclose(zeta_n, precision_bits)))
    residuals = [r[2] for r in rows]
    shrinking = all(b.hi <= a.hi for a, b in zip(residuals, residuals[1:]))
    return Certificate(
        claim="evidence: sup of the dual approaches the primal value for min f + indicator(0)",
        passed=shrinking and residuals[-1].lo > 0,
        witness={"rows": [[n, d, r] for n, d, r in rows[-5:]], "evidence_only": True},
        enclosure=residuals[-1],
    )


def certify_sum_rule_failure(
    z: FiniteSeq, seed: int = 0, probes: int = 10, q: SeparableQuadratic = STANDARD_F
) -> Certificate:
    """``z`` lies in the subdifferential of ``f + indicator(0)`` at 0 but not in ``f``'s.

    For ``f + indicator`` the defining inequality is infinite on the right at
    every ``y != 0`` and reads ``f(0) >= f(0)`` at ``y = 0``.
    """
    rng = random.Random(seed)
    pair = SUM_RULE_PAIR
    at_zero = pair.primal(ZERO)
    binding_margin = (at_zero - at_zero).as_rational()
    probe_points = [random_seq(rng, min_terms=1) for _ in range(probes)]
    off_origin_infinite = all(pair.primal(y) is INFINITE for y in probe_points)
    wit = refute_subgradient(q, ZERO, z)
    return Certificate(
        claim="z in d(f + indicator)(0) while z not in df(0)",
        passed=binding_margin == 0 and off_origin_infinite and wit.margin > 0,
        witness={
            "z": z,
            "membership_margin_at_origin": binding_margin,
            "off_origin_probes_infinite": len(probe_points),
            "refutation": wit,
        },
        margin=wit.margin,
    )


def certify_chain_rule_failure(
    z: FiniteSeq, seed: int = 0, directions: int = 20, pairs: int = 10, q: SeparableQuadratic = STANDARD_F
) -> Certificate:
    """``d(f o A)(0) = {0}`` whereas ``A* df(0)`` is empty."""
    rng = random.Random(seed)
    dds = [dd_f_compose_A(ZERO, random_seq(rng)) for _ in range(directions)]
    worst_convexity = _convexity_sweep_compose_A(rng, pairs, q)
    zero_member = all(d == 0 for d in dds) and worst_convexity >= 0
    witness: dict = {
        "z": z,
        "zero_directional_derivatives": directions,
        "min_convexity_margin": worst_convexity,
    }
    if z:
        # <z, z> > 0 = (f o A)'(0; z) rules out z; a concrete point confirms it
        slope_margin = norm_sq(z) - dd_f_compose_A(ZERO, z, q)
        az = apply_A(z)
        curvature = sum((q.weight(n) * v * v for n, v in az.entries), Fraction(0))
        t = norm_sq(z) / curvature
        point = scale(t, z)
        gap = (eval_f(q, apply_A(ZERO)) - eval_f(q, apply_A(point))).as_rational() + inner(z, point)
        member_ok = slope_margin > 0 and gap == norm_sq(z) ** 2 / (2 * curvature) and gap > 0
        witness.update({"direction": z, "slope_margin": slope_margin, "point": point, "point_margin": gap})
        margin = slope_margin
    else:
        member_ok = True
        margin = Fraction(0)
    refutation = refute_subgradient(q, apply_A(ZERO), z)
    witness["outer_refutation"] = refutation
    return Certificate(
        claim="d(f o A)(0) = {0} but A* df(A0) is empty",
        passed=zero_member and member_ok and refutation.margin > 0,
        witness=witness,
        margin=margin,
    )


def infimal_convolution_enclosure(
    y: FiniteSeq,
    n: int,
    zeta_n: int = 10**4,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    q: SeparableQuadratic = STANDARD_F,
) -> Enclosure:
    """Enclose ``inf_z f*(z) + g*(y - z)`` for ``g`` the indicator of the origin.

    ``g*`` vanishes, so the value is ``inf f* = -zeta(2)/2`` for every ``y``.
    The truncated minimizer ``(-1, ..., -1)`` gives the upper end, the zeta
    enclosure the lower end.
    """
    if n < 1:
        raise ValueError("truncation must be positive")
    if q.zeta_index != 2 or q != STANDARD_F:
        raise ValueError("only the alpha = beta = 2 instance is supported")
    del y  # the value does not depend on y
    z_n = FiniteSeq.from_mapping((k, -q.weight(k) * q.target(k)) for k in range(1, n + 1))
    upper = eval_f_conj(q, z_n)
    lower = -zeta_enclosure(2, zeta_n, precision_bits).hi / 2
    return Enclosure(lower, upper)


def certify_inf_conv_not_exact(candidates: list[FiniteSeq], q: SeparableQuadratic = STANDARD_F) -> Certificate:
    decreases = [improve_conj_point(q, z)[1] for z in candidates]
    return Certificate(
        claim="f* has no minimizer, so the infimal convolution is not attained",
        passed=all(d > 0 for d in decreases),
        witness={"candidates": len(candidates), "min_decrease": min(decreases) if decreases else None},
        margin=min(decreases) if decreases else None,
    )


def _indicator_finite(xk: Fraction) -> bool:
    return xk == 0


def _grid(lo: int, hi: int, den: int) -> list[Fraction]:
    return [Fraction(k, den) for k in range(lo * den, hi * den + 1)]


def conj_of_sum_oracle(
    y: FiniteSeq,
    n: int = 20,
    zeta_n: int = 10**4,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    grid_den: int = 8,
) -> dict:
    """Brute-force both sides of the conjugate-of-sum identity at ``y``.

    Each of the first ``n`` coordinates is optimized by exhaustive search on
    a rational grid (which contains the exact optimizers), and the remaining
    coordinates contribute ``-(zeta(2) - H_n)/2`` through a zeta enclosure.
    ``(f + indicator)*`` is a supremum over ``x`` restricted to the origin in
    each coordinate; the infimal convolution is an infimum of ``f*`` since
    the indicator's conjugate is zero. Both come out negative.
    """
    q = STANDARD_F
    grid = _grid(-2, 2, grid_den)
    sup_sum = Fraction(0)
    inf_conv = Fraction(0)
    for k in range(1, n + 1):
        w, t, yk = q.weight(k), q.target(k), y[k]
        finite = [yk * xk - w * (xk - t) ** 2 / 2 for xk in grid if _indicator_finite(xk)]
        sup_sum += max(finite)
        inf_conv += min(zk * zk / (2 * w) + t * zk for zk in grid)
    tail = (zeta_enclosure(2, zeta_n, precision_bits) - harmonic(n)).scale(Fraction(-1, 2))
    lhs = tail + sup_sum
    rhs = tail + inf_conv
    mirrored = lhs.scale(-1)
    return {
        "conjugate_of_sum": lhs,
        "infimal_convolution": rhs,
        "agree": lhs.intersects(rhs),
        "sign": -1 if lhs.hi < 0 and rhs.hi < 0 else (1 if lhs.lo > 0 and rhs.lo > 0 else 0),
        "positive_value_excluded": not lhs.intersects(mirrored),
    }


def check_constraint_qualifications(pair: FenchelPair) -> Certificate:
    """Catalog-level qualification check for ``min f(Ax) + g(x)``.

    Continuity condition: some ``x0`` in ``dom g`` with ``f`` continuous at
    ``A x0``. Algebraic condition: ``0`` in the core of ``A dom g - dom f``.
    The range of ``A`` is the zero-sum subspace, a proper subspace, so
    ``A c_c - {0}`` has empty core.
    """
    for d in (pair.f_desc, pair.g_desc):
        if not isinstance(d, ConvexFnDesc) or d.kind not in KINDS:
            raise UnsupportedDescriptor(repr(d))
    f, g = pair.f_desc, pair.g_desc
    continuity = f.continuity_tag == EVERYWHERE
    if f.domain_tag == ALL_OF_CC:
        algebraic = True
    elif g.domain_tag == ALL_OF_CC and not pair.use_operator:
        algebraic = True
    else:
        algebraic = False
    note = ""
    if algebraic and not continuity:
        note = "algebraic condition holds, continuity fails: completeness is the missing hypothesis"
    return Certificate(
        claim="constraint qualifications",
        passed=True,
        witness={
            "pair": pair,
            "continuity_condition": continuity,
            "algebraic_condition": algebraic,
            "note": note,
        },
    )

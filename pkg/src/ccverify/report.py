"""Verification suites and the reports they produce.

Reports carry no timestamps or timings, so two runs with the same seed and
budget serialize to identical bytes.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

from . import duality as du
from .certificate import Certificate, jsonify
from .exact_number import Budget, ExactValue, Undecidable, to_decimal, zeta_enclosure
from .func_lib import (
    STANDARD_F,
    candidate_subgradient_prefix,
    continuity_gap_witness,
    convexity_margin,
    difference_quotient,
    directional_derivative,
    eval_f,
    improve_conj_point,
    refute_subgradient,
    subdiff_invariance_under_linear_shift,
    witness_not_maximal_monotone,
)
from .sampling import random_seq, random_unit_interval
from .seq_core import ZERO, FiniteSeq, add, basis, norm_sq, scale

SUITES = (
    "theorem-a",
    "theorem-b",
    "theorem-c",
    "theorem-d",
    "sum-rule",
    "chain-rule",
    "duality-gap",
    "inf-conv",
    "qualifications",
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


@dataclass(frozen=True)
class SuiteBudget:
    zeta_n: int = 10**4
    precision_bits: int = 128
    truncation_max: int = 64
    max_zeta_n: int = 10**6
    digits: int = 6

    def __post_init__(self):
        if self.zeta_n < 1 or self.truncation_max < 1 or self.max_zeta_n < self.zeta_n:
            raise ValueError("invalid budget")

    @property
    def refinement(self) -> Budget:
        return Budget(max_n=self.max_zeta_n, precision_bits=self.precision_bits)


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    seed: int
    budget: SuiteBudget
    certificates: tuple[Certificate, ...]

    @property
    def verdict(self) -> str:
        if any(not c.passed and not c.inconclusive for c in self.certificates):
            return "fail"
        if any(c.inconclusive for c in self.certificates):
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[self.verdict]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "budget": asdict(self.budget),
            "certificates": [c.to_json() for c in self.certificates],
            "verdict": self.verdict,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def render_text(self) -> str:
        lines = [
            f"suite: {self.suite}",
            f"seed: {self.seed}",
            "budget: " + " ".join(f"{k}={v}" for k, v in asdict(self.budget).items()),
        ]
        for c in self.certificates:
            status = "INCONCLUSIVE" if c.inconclusive else ("PASS" if c.passed else "FAIL")
            line = f"[{status}] {c.claim}"
            if c.margin is not None:
                line += f" | margin {_short(c.margin)}"
            if c.enclosure is not None:
                line += f" | enclosure [{_decimal_out(c.enclosure.lo, -1)}, {_decimal_out(c.enclosure.hi, 1)}]"
            lines.append(line)
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"

    def first_failure(self) -> Certificate | None:
        return next((c for c in self.certificates if not c.passed), None)


def _decimal_out(q: Fraction, direction: int, digits: int = 12) -> str:
    """Decimal rounded away from the enclosed value (down for lo, up for hi)."""
    scaled = q * 10**digits
    units = scaled.numerator // scaled.denominator
    if direction > 0 and units * scaled.denominator != scaled.numerator:
        units += 1
    sign = "-" if units < 0 else ""
    whole, frac = divmod(abs(units), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _short(value) -> str:
    text = str(jsonify(value)) if not isinstance(value, ExactValue) else str(value)
    if isinstance(value, Fraction) and len(text) > 40:
        return "~" + _decimal_out(value, -1)
    return text


def _theorem_a(rng: random.Random, budget: SuiteBudget) -> list[Certificate]:
    q = STANDARD_F
    points = [random_seq(rng) for _ in range(50)]
    values = [eval_f(q, x) for x in points]
    well_defined = all(v.zeta_coeffs == {2: Fraction(1, 2)} for v in values)
    enc = zeta_enclosure(2, budget.zeta_n, budget.precision_bits)
    finite = Certificate(
        claim="f is finite on c_c: finite part plus (zeta(2) - H_N)/2",
        passed=well_defined and enc.hi < 2,
        witness={"points": len(points), "sample_value": values[0]},
        enclosure=enc,
    )
    margins = []
    for _ in range(100):
        x, y = random_seq(rng), random_seq(rng)
        margins.append(convexity_margin(q, x, y, random_unit_interval(rng)))
    convex = Certificate(
        claim="f is convex (midpoint probe on seeded pairs)",
        passed=min(margins) >= 0,
        witness={"pairs": len(margins)},
        margin=min(margins),
    )
    lsc_gaps = []
    for x in points[:20]:
        m = x.max_index
        for k in range(max(m + 1, 2), max(m + 1, 2) + 20):
            bumped = add(x, scale(Fraction(2, k), basis(k)))
            lsc_gaps.append((eval_f(q, bumped) - eval_f(q, x)).as_rational())
    lsc = Certificate(
        claim="along x + (2/k) e_k -> x the values stay >= f(x) + 1/4",
        passed=min(lsc_gaps) >= Fraction(1, 4),
        witness={"sequences": 20, "terms_each": 20},
        margin=min(lsc_gaps) - Fraction(1, 4),
    )
    return [finite, convex, lsc]


def _theorem_b(rng: random.Random, budget: SuiteBudget) -> list[Certificate]:
    q = STANDARD_F
    gaps = []
    for _ in range(20):
        x = random_seq(rng, min_terms=1)
        m = x.max_index
        gaps.extend(continuity_gap_witness(q, x, n) for n in range(m + 1, m + 51))
    return [
        Certificate(
            claim="f(x + (2/n) e_n) - f(x) >= 1/4 while ||(2/n) e_n||^2 = 4/n^2 -> 0",
            passed=min(gaps) >= Fraction(1, 4),
            witness={"points": 20, "indices_each": 50},
            margin=min(gaps) - Fraction(1, 4),
        )
    ]


def _theorem_c(rng: random.Random, budget: SuiteBudget) -> list[Certificate]:
    q = STANDARD_F
    ok = True
    checked = 0
    for _ in range(30):
        x = random_seq(rng)
        n = rng.randint(1, 16)
        limit = directional_derivative(q, x, basis(n))
        quotients = [difference_quotient(q, x, basis(n), Fraction(1, 2**k)) for k in range(11)]
        ok &= limit == q.weight(n) * x[n] - 1
        ok &= all(a > b > limit for a, b in zip(quotients, quotients[1:]))
        ok &= all(d - limit == q.weight(n) * Fraction(1, 2**k) / 2 for k, d in enumerate(quotients))
        checked += 1
    quotient_cert = Certificate(
        claim="difference quotients decrease to n^2 x_n - 1",
        passed=ok,
        witness={"pairs": checked, "steps": "2^-k, k=0..10"},
    )
    x = random_seq(rng)
    start = x.max_index + 1
    ratios = []
    for k in (1, 10, 100, 1000):
        y = FiniteSeq(tuple((n, Fraction(1)) for n in range(start, start + k)))
        d = directional_derivative(q, x, y)
        ratios.append(d * d / norm_sq(y))
    unbounded = Certificate(
        claim="f'(x; .) is unbounded: |f'(x;y)|^2 / ||y||^2 = k on blocks of k unit entries",
        passed=ratios == [1, 10, 100, 1000],
        witness={"x": x, "squared_ratios": ratios},
    )
    return [quotient_cert, unbounded]


def _theorem_d(rng: random.Random, budget: SuiteBudget) -> list[Certificate]:
    q = STANDARD_F
    margins = []
    formula_ok = True
    for _ in range(100):
        x, z = random_seq(rng), random_seq(rng)
        w = refute_subgradient(q, x, z)
        formula_ok &= w.margin == (z[w.index] + 1) ** 2 / (2 * w.index**2)
        margins.append(w.margin)
    refutations = Certificate(
        claim="no finite candidate is a subgradient (100/100 refutations)",
        passed=formula_ok and len(margins) == 100 and min(margins) > 0,
        witness={"refuted": len(margins), "attempted": 100},
        margin=min(margins),
    )
    x = random_seq(rng)
    growth = [norm_sq(candidate_subgradient_prefix(q, x, n)) for n in (10, 100, 1000)]
    escape = Certificate(
        claim="the coordinatewise candidate is not square summable",
        passed=all(g >= n - len(x) for g, n in zip(growth, (10, 100, 1000))),
        witness={"x": x, "prefix_norm_sq": growth},
    )
    sample = [(random_seq(rng), random_seq(rng)) for _ in range(10)]
    monotone = witness_not_maximal_monotone(q, random_seq(rng), random_seq(rng), sample)
    ell = random_seq(rng, min_terms=1)
    shift = subdiff_invariance_under_linear_shift(q, ell, random_seq(rng), random_seq(rng))
    return [refutations, escape, monotone, shift]


def _sum_rule(rng: random.Random, budget: SuiteBudget) -> list[Certificate]:
    certs = [du.certify_sum_rule_failure(random_seq(rng), seed=rng.randrange(2**32)) for _ in range(20)]
    passed = all(c.passed for c in certs)
    summary = Certificate(
        claim="sum rule fails at 0 for f + indicator(0) (20 seeded z)",
        passed=passed,
        witness={"checked": len(certs)},
        margin=min(c.margin for c in certs),
    )
    improvements = [improve_conj_point(STANDARD_F, random_seq(rng))[1] for _ in range(20)]
    no_dual_solution = Certificate(
        claim="the dual of min f + indicator(0) has no solution: every y is improved",
        passed=all(d > 0 for d in improvements),
        witness={"checked": len(improvements)},
        margin=min(improvements),
    )
    evidence = du.no_gap_evidence(budget.truncation_max, budget.zeta_n, budget.precision_bits)
    return [summary, no_dual_solution, evidence]


def _chain_rule(rng: random.Random, budget: SuiteBudget) -> list[Certificate]:
    zs = [ZERO] + [random_seq(rng, min_terms=1) for _ in range(19)]
    certs = [du.certify_chain_rule_failure(z, seed=rng.randrange(2**32)) for z in zs]
    chain = Certificate(
        claim="d(f o A)(0) = {0} while A* df(0) is empty (20 seeded z)",
        passed=all(c.passed for c in certs),
        witness={"checked": len(certs)},
        margin=min(c.margin for c in certs[1:]),
    )
    primal = du.certify_primal_min_at_zero(
        seed=rng.randrange(2**32), digits=budget.digits, budget=budget.refinement
    )
    return [chain, primal]


def _duality_gap(rng: random.Random, budget: SuiteBudget) -> list[Certificate]:
    rep = du.certify_duality_gap(
        zeta_n=budget.zeta_n,
        precision_bits=budget.precision_bits,
        truncation_max=budget.truncation_max,
        seed=rng.randrange(2**32),
    )
    gap = Certificate(
        claim="positive duality gap: primal zeta(2)/2, dual 0",
        passed=rep.passed and rep.dual_value.is_rational() and rep.dual_value.rat == 0,
        witness={
            "primal_value": rep.primal_value,
            "dual_value": rep.dual_value,
            "truncation_max": budget.truncation_max,
            "last_truncated_dual": rep.truncation_table[-1][1],
        },
        margin=rep.gap_enclosure.lo,
        enclosure=rep.gap_enclosure,
    )
    truncated = [du.solve_truncated_primal(n) for n in range(1, 9)]
    primal = Certificate(
        claim="truncated primal problems are all solved by x = 0",
        passed=all(not x and v == rep.primal_value for x, v in truncated),
        witness={"truncations": 8},
    )
    return [gap, primal, *rep.certificates]


def _inf_conv(rng: random.Random, budget: SuiteBudget) -> list[Certificate]:
    candidates = [random_seq(rng) for _ in range(100)]
    not_exact = du.certify_inf_conv_not_exact(candidates)
    enc = du.infimal_convolution_enclosure(ZERO, budget.zeta_n, budget.zeta_n, budget.precision_bits).rounded_out()
    enclosure = Certificate(
        claim="inf f* = -zeta(2)/2 enclosed by truncated minimizers",
        passed=enc.hi < 0 and enc.width <= Fraction(1, 1000),
        witness={"truncation": budget.zeta_n},
        enclosure=enc,
    )
    y = random_seq(rng)
    oracle = du.conj_of_sum_oracle(y, 20, budget.zeta_n, budget.precision_bits)
    sign = Certificate(
        claim="(f + indicator)* and f* (+) indicator* agree, and the common value is negative",
        passed=oracle["agree"] and oracle["sign"] == -1 and oracle["positive_value_excluded"],
        witness={"y": y, "sign": oracle["sign"], "infimal_convolution": oracle["infimal_convolution"]},
        enclosure=oracle["conjugate_of_sum"],
    )
    return [not_exact, enclosure, sign]


QUALIFICATION_CASES = (
    ("f + indicator(0)", du.SUM_RULE_PAIR, False, True),
    ("f o A + 0", du.GAP_PAIR, False, True),
    ("0 + 0", du.FenchelPair(du.zero_fn(), du.zero_fn()), True, True),
)


def _qualifications(rng: random.Random, budget: SuiteBudget) -> list[Certificate]:
    out = []
    for name, pair, cont, alg in QUALIFICATION_CASES:
        c = du.check_constraint_qualifications(pair)
        got = (c.witness["continuity_condition"], c.witness["algebraic_condition"])
        out.append(
            Certificate(
                claim=f"qualifications for {name}: continuity={cont}, algebraic={alg}",
                passed=got == (cont, alg),
                witness=c.witness,
            )
        )
    return out


SUITE_RUNNERS: dict[str, Callable[[random.Random, SuiteBudget], list[Certificate]]] = {
    "theorem-a": _theorem_a,
    "theorem-b": _theorem_b,
    "theorem-c": _theorem_c,
    "theorem-d": _theorem_d,
    "sum-rule": _sum_rule,
    "chain-rule": _chain_rule,
    "duality-gap": _duality_gap,
    "inf-conv": _inf_conv,
    "qualifications": _qualifications,
}


def _run_one(name: str, seed: int, budget: SuiteBudget) -> list[Certificate]:
    # every suite draws from its own stream so "all" matches the individual runs
    rng = random.Random(f"{seed}:{name}")
    try:
        certs = SUITE_RUNNERS[name](rng, budget)
    except Undecidable as exc:
        certs = [Certificate(claim=f"{name}: {exc}", passed=False, inconclusive=True)]
    return [
        Certificate(f"{name}: {c.claim}", c.passed, c.witness, c.margin, c.enclosure, c.inconclusive)
        for c in certs
    ]


def run_suite(suite: str, seed: int = 0, budget: SuiteBudget | None = None) -> VerificationReport:
    budget = budget or SuiteBudget()
    if suite == "all":
        names = SUITES
    elif suite in SUITE_RUNNERS:
        names = (suite,)
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    certs: list[Certificate] = []
    for name in names:
        certs.extend(_run_one(name, seed, budget))
    return VerificationReport(suite, seed, budget, tuple(certs))


def gap_table_rows(budget: SuiteBudget) -> list[dict]:
    """Rows ``N, truncated dual value, its decimal, primal minus it``."""
    primal = du.GAP_PAIR.primal(ZERO)
    rows = []
    for n, value in du.truncation_table(budget.truncation_max):
        text, _ = to_decimal(value, budget.digits)
        gap_text, gap_enc = to_decimal(primal - value, budget.digits, budget.refinement)
        rows.append({"N": n, "dual_value": value, "dual_decimal": text, "gap_decimal": gap_text, "gap_enclosure": gap_enc})
    return rows

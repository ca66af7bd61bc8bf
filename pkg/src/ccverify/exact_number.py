"""Exact numbers of the form ``a + sum_s b_s * zeta(s)`` with rational a, b_s.

Zeta values are never approximated by floats. Whenever a comparison or a
decimal rendering needs one, a rational :class:`Enclosure` is built from a
partial sum plus the integral tail brackets

    1/((s-1)(N+1)^(s-1)) <= sum_{n>N} n^(-s) <= 1/((s-1) N^(s-1)),

with the partial sum accumulated in outward-rounded dyadic fixed point so
that denominators stay bounded.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

Rational = Fraction

DEFAULT_MAX_N = 10**6
DEFAULT_PRECISION_BITS = 128
DEFAULT_DIGITS_CAP = 12

_RATIONAL_RE = re.compile(r"^(-?)(\d+)/(\d+)$")


class Undecidable(ArithmeticError):
    """Raised when an enclosure cannot be made tight enough within budget."""


def as_rational(value: Union[int, Fraction, str]) -> Fraction:
    if type(value) is Fraction:
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    """Canonical ``"p/q"`` form; integers keep an explicit ``/1``."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse a canonical ``"p/q"`` string.

    Non-canonical input (missing denominator, zero denominator, common
    factors, ``-0``) is rejected with :class:`ValueError`.
    """
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"rational must look like 'p/q': {text!r}")
    sign, num, den = m.group(1), int(m.group(2)), int(m.group(3))
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    q = Fraction(-num if sign else num, den)
    if format_rational(q) != text:
        raise ValueError(f"rational not in canonical form: {text!r}")
    return q


@dataclass(frozen=True)
class Budget:
    """Refinement policy for zeta enclosures."""

    max_n: int = DEFAULT_MAX_N
    precision_bits: int = DEFAULT_PRECISION_BITS
    start_n: int = 64

    def __post_init__(self):
        if self.max_n < 1 or self.start_n < 1:
            raise ValueError("budget truncation levels must be positive")
        if self.precision_bits < 8:
            raise ValueError("precision_bits must be at least 8")


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, q) -> "Enclosure":
        q = as_rational(q)
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q) -> bool:
        q = as_rational(q)
        return self.lo <= q <= self.hi

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo + other.lo, self.hi + other.hi)
        q = as_rational(other)
        return Enclosure(self.lo + q, self.hi + q)

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Enclosure":
        c = as_rational(c)
        if c >= 0:
            return Enclosure(c * self.lo, c * self.hi)
        return Enclosure(c * self.hi, c * self.lo)

    def rounded_out(self, bits: int = 96) -> "Enclosure":
        """Outward rounding to multiples of ``2**-bits``; keeps serialized endpoints short."""
        scale = 1 << bits
        lo = self.lo * scale
        hi = self.hi * scale
        return Enclosure(
            Fraction(lo.numerator // lo.denominator, scale),
            Fraction(-((-hi.numerator) // hi.denominator), scale),
        )

    def to_json(self) -> list:
        return [format_rational(self.lo), format_rational(self.hi)]

    @classmethod
    def from_json(cls, data) -> "Enclosure":
        lo, hi = data
        return cls(parse_rational(lo), parse_rational(hi))


def _required_bits(s: int, n: int, precision_bits: int) -> int:
    # keep n rounding ulps below half the analytic width (~ n^(-s-1))
    return max(precision_bits, (s + 1) * n.bit_length() + n.bit_length() + 4)


@lru_cache(maxsize=256)
def _dyadic_partial_sum(s: int, n: int, bits: int) -> tuple[int, int]:
    """Return integers (lo, hi) with lo/2^bits <= sum_{k<=n} k^-s <= hi/2^bits."""
    one = 1 << bits
    lo = hi = 0
    for k in range(1, n + 1):
        q, r = divmod(one, k**s)
        lo += q
        hi += q + (1 if r else 0)
    return lo, hi


def zeta_enclosure(s: int, n: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> Enclosure:
    """Certified rational enclosure of zeta(s) from the first ``n`` terms."""
    if not isinstance(s, int) or s < 2:
        raise ValueError(f"zeta index must be an integer >= 2, got {s!r}")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"truncation level must be a positive integer, got {n!r}")
    bits = _required_bits(s, n, precision_bits)
    lo, hi = _dyadic_partial_sum(s, n, bits)
    scale = 1 << bits
    tail_lo = Fraction(1, (s - 1) * (n + 1) ** (s - 1))
    tail_hi = Fraction(1, (s - 1) * n ** (s - 1))
    return Enclosure(Fraction(lo, scale) + tail_lo, Fraction(hi, scale) + tail_hi)


def harmonic(n: int, s: int = 2) -> Fraction:
    """Exact generalized harmonic number sum_{k<=n} k^-s."""
    return _harmonic(n, s)


@lru_cache(maxsize=4096)
def _harmonic(n: int, s: int) -> Fraction:
    if n <= 0:
        return Fraction(0)
    # one common denominator; summing Fractions term by term is quadratic
    den = 1
    for k in range(1, n + 1):
        p = k**s
        den = den * p // math.gcd(den, p)
    return Fraction(sum(den // k**s for k in range(1, n + 1)), den)


@dataclass(frozen=True)
class ExactValue:
    """``rat + sum(coeff * zeta(s))`` with exact rational coefficients."""

    rat: Fraction = Fraction(0)
    zeta: tuple[tuple[int, Fraction], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "rat", as_rational(self.rat))
        items = dict(self.zeta)
        cleaned = []
        for s, c in sorted(items.items()):
            if not isinstance(s, int) or isinstance(s, bool) or s < 2:
                raise ValueError(f"zeta index must be an integer >= 2, got {s!r}")
            c = as_rational(c)
            if c != 0:
                cleaned.append((s, c))
        object.__setattr__(self, "zeta", tuple(cleaned))

    @classmethod
    def of(cls, rat=0, zeta: Mapping[int, object] | None = None) -> "ExactValue":
        return cls(as_rational(rat), tuple((zeta or {}).items()))

    @property
    def zeta_coeffs(self) -> dict[int, Fraction]:
        return dict(self.zeta)

    def is_rational(self) -> bool:
        return not self.zeta

    def as_rational(self) -> Fraction:
        """Return the value as a plain rational; zeta parts must have cancelled."""
        if self.zeta:
            raise ValueError(f"zeta parts did not cancel: {self}")
        return self.rat

    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        coeffs = self.zeta_coeffs
        for s, c in other.zeta:
            coeffs[s] = coeffs.get(s, Fraction(0)) + c
        return ExactValue(self.rat + other.rat, tuple(coeffs.items()))

    __radd__ = __add__

    def __neg__(self):
        return ExactValue(-self.rat, tuple((s, -c) for s, c in self.zeta))

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, c):
        if isinstance(c, ExactValue) or isinstance(c, bool):
            return NotImplemented
        c = as_rational(c)
        return ExactValue(c * self.rat, tuple((s, c * b) for s, b in self.zeta))

    __rmul__ = __mul__

    def enclose(self, n: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> Enclosure:
        enc = Enclosure.point(self.rat)
        for s, c in self.zeta:
            enc = enc + zeta_enclosure(s, n, precision_bits).scale(c)
        return enc

    def to_json(self) -> dict:
        return {
            "rat": format_rational(self.rat),
            "zeta": {str(s): format_rational(c) for s, c in self.zeta},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ExactValue":
        zeta = {}
        for key, val in data.get("zeta", {}).items():
            if not key.isdigit():
                raise ValueError(f"bad zeta index {key!r}")
            c = parse_rational(val)
            if c == 0:
                raise ValueError("zero zeta coefficient is not canonical")
            zeta[int(key)] = c
        return cls.of(parse_rational(data["rat"]), zeta)

    def __str__(self):
        parts = [format_rational(self.rat)]
        parts += [f"{format_rational(c)}*zeta({s})" for s, c in self.zeta]
        return " + ".join(parts)


def _lift(value):
    if isinstance(value, ExactValue):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return ExactValue(Fraction(value))
    return NotImplemented


def _width_estimate(v: ExactValue, n: int) -> Fraction:
    return sum(
        (abs(c) * (Fraction(1, (s - 1) * n ** (s - 1)) - Fraction(1, (s - 1) * (n + 1) ** (s - 1)))
         for s, c in v.zeta),
        Fraction(0),
    )


def _refinement_levels(v: ExactValue, budget: Budget):
    n = min(budget.start_n, budget.max_n)
    while True:
        yield n
        if n >= budget.max_n:
            return
        n = min(4 * n, budget.max_n)


def exact_compare(u, v, budget: Budget = DEFAULT_BUDGET) -> int:
    """Sign of ``u - v`` as -1, 0 or 1.

    Zero is only ever returned when the difference is exactly rational zero;
    differing zeta parts that cannot be separated raise :class:`Undecidable`.
    """
    d = _lift(u) - _lift(v)
    if d.is_rational():
        return (d.rat > 0) - (d.rat < 0)
    for n in _refinement_levels(d, budget):
        enc = d.enclose(n, budget.precision_bits)
        if enc.lo > 0:
            return 1
        if enc.hi < 0:
            return -1
    raise Undecidable(f"cannot separate {d} from 0 with N <= {budget.max_n}")


def enclose_to_width(v: ExactValue, width: Fraction, budget: Budget = DEFAULT_BUDGET) -> Enclosure:
    """Smallest-effort enclosure of ``v`` whose width is at most ``width``."""
    v = _lift(v)
    if v.is_rational():
        return Enclosure.point(v.rat)
    n = min(budget.start_n, budget.max_n)
    while True:
        enc = v.enclose(n, budget.precision_bits)
        if enc.width <= width:
            return enc
        if n >= budget.max_n:
            raise Undecidable(f"width {width} unreachable for {v} with N <= {budget.max_n}")
        # the analytic width decays like N^-s; jump close to the needed level
        est = _width_estimate(v, n)
        ratio = est / width
        s_min = min(s for s, _ in v.zeta)
        guess = int(n * 1.05 * float(ratio) ** (1.0 / s_min)) + 1
        n = min(max(2 * n, guess), budget.max_n)


def _round_half_even(q: Fraction, digits: int) -> int:
    scaled = q * 10**digits
    floor = scaled.numerator // scaled.denominator
    rem = scaled - floor
    if rem > Fraction(1, 2) or (rem == Fraction(1, 2) and floor % 2 == 1):
        floor += 1
    return floor


def _render_fixed(units: int, digits: int) -> str:
    sign = "-" if units < 0 else ""
    units = abs(units)
    whole, frac = divmod(units, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def to_decimal(
    v,
    digits: int = 6,
    budget: Budget = DEFAULT_BUDGET,
    cap: int = DEFAULT_DIGITS_CAP,
) -> tuple[str, Enclosure]:
    """Render ``v`` with ``digits`` decimals plus the enclosure backing it.

    The rendered number is the midpoint of an enclosure of width at most
    ``10**-digits``, rounded half-even; it is therefore within ``10**-digits``
    of the true value.
    """
    if not isinstance(digits, int) or digits < 0:
        raise ValueError("digits must be a non-negative integer")
    if digits > cap:
        raise ValueError(f"digits {digits} exceeds the cap of {cap}")
    v = _lift(v)
    enc = enclose_to_width(v, Fraction(1, 10**digits), budget)
    return _render_fixed(_round_half_even(enc.midpoint, digits), digits), enc


ZETA2_HALF = ExactValue.of(0, {2: Fraction(1, 2)})

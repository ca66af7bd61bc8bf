"""Finitely supported sequences of exact rationals (elements of c_c).

Indices start at 1. Only nonzero entries are stored, in strictly
increasing index order, so two equal sequences always compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Mapping

from .exact_number import as_rational, format_rational, parse_rational

_ZERO_Q = Fraction(0)


@dataclass(frozen=True)
class FiniteSeq:
    entries: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        entries = tuple((n, as_rational(v)) for n, v in self.entries)
        prev = 0
        for n, v in entries:
            if not isinstance(n, int) or isinstance(n, bool):
                raise TypeError(f"index must be an int, got {n!r}")
            if n <= prev:
                raise ValueError(f"indices must be >= 1 and strictly increasing, got {n} after {prev}")
            if v == 0:
                raise ValueError(f"zero value stored at index {n}")
            prev = n
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_mapping(cls, data: Mapping[int, object] | Iterable[tuple[int, object]]) -> "FiniteSeq":
        """Canonicalize arbitrary (index, value) data, summing repeats and dropping zeros."""
        items = data.items() if isinstance(data, Mapping) else data
        acc: dict[int, Fraction] = {}
        for n, v in items:
            if n < 1:
                raise ValueError(f"indices start at 1, got {n}")
            acc[n] = acc.get(n, Fraction(0)) + as_rational(v)
        return cls(tuple((n, v) for n, v in sorted(acc.items()) if v != 0))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.entries)

    @property
    def max_index(self) -> int:
        """Largest stored index, 0 for the zero sequence."""
        return self.entries[-1][0] if self.entries else 0

    @cached_property
    def _lookup(self) -> dict[int, Fraction]:
        return dict(self.entries)

    def __getitem__(self, n: int) -> Fraction:
        return self._lookup.get(n, _ZERO_Q)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __bool__(self):
        return bool(self.entries)

    def __add__(self, other: "FiniteSeq") -> "FiniteSeq":
        return add(self, other)

    def __sub__(self, other: "FiniteSeq") -> "FiniteSeq":
        return add(self, scale(-1, other))

    def __neg__(self) -> "FiniteSeq":
        return scale(-1, self)

    def __rmul__(self, c) -> "FiniteSeq":
        return scale(c, self)

    def to_json(self) -> dict:
        return {"entries": [[n, format_rational(v)] for n, v in self.entries]}

    @classmethod
    def from_json(cls, data) -> "FiniteSeq":
        """Strict parse of ``{"entries": [[n, "p/q"], ...]}``."""
        if not isinstance(data, dict) or set(data) != {"entries"}:
            raise ValueError('sequence must be an object with exactly the key "entries"')
        raw = data["entries"]
        if not isinstance(raw, list):
            raise ValueError('"entries" must be a list')
        pairs = []
        for item in raw:
            if not (isinstance(item, list) and len(item) == 2):
                raise ValueError(f"entry must be [index, 'p/q'], got {item!r}")
            n, v = item
            if not isinstance(n, int) or isinstance(n, bool):
                raise ValueError(f"index must be an integer, got {n!r}")
            if not isinstance(v, str):
                raise ValueError(f"value must be a 'p/q' string, got {v!r}")
            pairs.append((n, parse_rational(v)))
        return cls(tuple(pairs))

    def __repr__(self):
        body = ", ".join(f"({n},{format_rational(v)})" for n, v in self.entries)
        return f"FiniteSeq({{{body}}})"


ZERO = FiniteSeq()


def basis(n: int) -> FiniteSeq:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"basis index must be >= 1, got {n!r}")
    return FiniteSeq(((n, Fraction(1)),))


def add(x: FiniteSeq, y: FiniteSeq) -> FiniteSeq:
    return FiniteSeq.from_mapping(list(x.entries) + list(y.entries))


def scale(c, x: FiniteSeq) -> FiniteSeq:
    c = as_rational(c)
    if c == 0:
        return ZERO
    return FiniteSeq(tuple((n, c * v) for n, v in x.entries))


def inner(x: FiniteSeq, y: FiniteSeq) -> Fraction:
    if len(x) > len(y):
        x, y = y, x
    yd = y.as_dict()
    return sum((v * yd[n] for n, v in x.entries if n in yd), Fraction(0))


def norm_sq(x: FiniteSeq) -> Fraction:
    return sum((v * v for _, v in x.entries), Fraction(0))

"""Seeded generators of exact test inputs."""

from __future__ import annotations

import random
from fractions import Fraction

from .seq_core import FiniteSeq


def random_rational(rng: random.Random, max_num: int = 9, max_den: int = 9, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
        if q != 0 or not nonzero:
            return q


def random_seq(
    rng: random.Random,
    max_index: int = 12,
    max_terms: int = 5,
    min_terms: int = 0,
    max_num: int = 9,
    max_den: int = 9,
) -> FiniteSeq:
    k = rng.randint(min_terms, min(max_terms, max_index))
    idx = sorted(rng.sample(range(1, max_index + 1), k))
    return FiniteSeq(tuple((n, random_rational(rng, max_num, max_den, nonzero=True)) for n in idx))


def random_unit_interval(rng: random.Random, max_den: int = 16) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den), den)

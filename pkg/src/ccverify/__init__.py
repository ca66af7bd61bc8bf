"""Exact certificates for a convex, finite, lower semicontinuous function on the
space of finitely supported sequences whose subdifferential is empty everywhere."""

from .exact_number import Budget, Enclosure, ExactValue, Undecidable, exact_compare, to_decimal, zeta_enclosure
from .func_lib import STANDARD_F, SeparableQuadratic, eval_f, eval_f_conj, refute_subgradient
from .seq_core import FiniteSeq, basis

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "Enclosure",
    "ExactValue",
    "FiniteSeq",
    "STANDARD_F",
    "SeparableQuadratic",
    "Undecidable",
    "basis",
    "eval_f",
    "eval_f_conj",
    "exact_compare",
    "refute_subgradient",
    "to_decimal",
    "zeta_enclosure",
]

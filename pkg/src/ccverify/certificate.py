"""Structured verdicts shared by every checking routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact_number import Enclosure, ExactValue, format_rational
from .seq_core import FiniteSeq


def jsonify(value: Any) -> Any:
    """Convert exact objects to JSON-ready data; rationals become ``"p/q"``."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (ExactValue, Enclosure, FiniteSeq)):
        return value.to_json()
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonify(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


@dataclass(frozen=True)
class Certificate:
    claim: str
    passed: bool
    witness: dict = field(default_factory=dict)
    margin: Fraction | ExactValue | None = None
    enclosure: Enclosure | None = None
    inconclusive: bool = False

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "passed": self.passed,
            "inconclusive": self.inconclusive,
            "margin": jsonify(self.margin),
            "enclosure": jsonify(self.enclosure),
            "witness": jsonify(self.witness),
        }

"""Pass/fail records produced by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional

from .scalars import INF


def jsonable(x: Any) -> Any:
    """Exact values to JSON-safe form: Fractions become "a/b", INF becomes "inf"."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if x == INF:
            return "inf"
        raise TypeError("floating point values are not allowed in reports")
    if isinstance(x, int):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


@dataclass
class Report:
    name: str
    passed: bool
    params: Dict[str, Any] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[Any] = None

    def __bool__(self):
        return self.passed

    def as_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "params": jsonable(self.params),
            "details": jsonable(self.details),
            "witness": jsonable(self.witness),
        }

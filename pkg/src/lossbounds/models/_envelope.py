from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class BoundEnvelope:
    """A (lower, upper) pair for a loss probability."""

    lower: float
    upper: float
    regime: str
    terms: dict = field(default_factory=dict)
    saturated: bool = False
    warnings: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "regime": self.regime,
            "terms": dict(self.terms),
            "saturated": self.saturated,
            "warnings": list(self.warnings),
            "details": dict(self.details),
        }


def finish(lower: float, upper: float, regime: str, terms=None, warnings=(), details=None) -> BoundEnvelope:
    """Clamp an asymptotic envelope into [0, 1], flagging any saturation."""
    notes = list(warnings)
    saturated = False
    if not math.isfinite(upper) or upper > 1.0 or upper < 0.0:
        # a nonpositive denominator means the asymptotic form has left its range
        notes.append(f"upper bound {upper!r} saturated to 1")
        upper, saturated = 1.0, True
    if not math.isfinite(lower) or lower < 0.0 or lower > 1.0:
        clamped = 0.0 if not math.isfinite(lower) or lower < 0.0 else 1.0
        notes.append(f"lower bound {lower!r} saturated to {clamped}")
        lower, saturated = clamped, True
    if lower > upper:
        notes.append(f"lower bound {lower!r} exceeds upper bound {upper!r}")
    return BoundEnvelope(lower, upper, regime, dict(terms or {}), saturated, tuple(notes), dict(details or {}))

"""Result records shared by every constraint channel."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .cslcore import STANDARD_LAMBDA, CslParams
from .units import RATE, Qty

BoundKind = Literal["lower", "upper"]

# flags understood by the scanner
FLAG_DUBIOUS = "dubious"
FLAG_UPPER_ESTIMATE = "upper_estimate"
FLAG_OVER_BOUND = "over_bound"
FLAG_SUPERSEDED = "superseded"
FLAG_COMPONENT = "component"

# channels carrying any of these never enter the combined verdict
NON_COMBINING_FLAGS = frozenset({FLAG_DUBIOUS, FLAG_UPPER_ESTIMATE, FLAG_SUPERSEDED, FLAG_COMPONENT})


@dataclass(frozen=True)
class Observable:
    """A named intermediate quantity worth reporting next to the bound."""

    name: str
    value: Qty
    unit: str

    def magnitude(self) -> float:
        return self.value.to(self.unit)


@dataclass(frozen=True)
class ChannelResult:
    """One evaluated constraint.

    ``lambda_bound`` is the smallest (lower) or largest (upper) value of
    lambda compatible with the observation at the evaluated r_C.
    ``factor_vs_input`` is that bound divided by the lambda the channel was
    evaluated with, so it halves when the input lambda doubles.
    """

    channel_id: str
    kind: BoundKind
    lambda_bound: Qty
    evaluated_at: CslParams
    uncertainty_decades: float = 0.0
    notes: str = ""
    refs: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()
    observables: tuple[Observable, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in ("lower", "upper"):
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if self.lambda_bound.dim != RATE:
            raise ValueError("lambda_bound must be a rate")
        if self.uncertainty_decades < 0:
            raise ValueError("uncertainty_decades must be non-negative")

    @property
    def multiplier_vs_standard(self) -> float:
        return float(self.lambda_bound / STANDARD_LAMBDA)

    @property
    def factor_vs_input(self) -> float:
        return float(self.lambda_bound / self.evaluated_at.lam)

    @property
    def log10_multiplier(self) -> float:
        m = self.multiplier_vs_standard
        return math.log10(m) if m > 0 else -math.inf

    def observable(self, name: str) -> Qty:
        for obs in self.observables:
            if obs.name == name:
                return obs.value
        raise KeyError(name)

    def is_flagged(self) -> bool:
        return FLAG_DUBIOUS in self.flags

    @property
    def combines(self) -> bool:
        return not NON_COMBINING_FLAGS.intersection(self.flags)

    def band(self) -> tuple[float, float]:
        """lambda_bound spread by the decade uncertainty, in s^-1."""
        b = self.lambda_bound.value
        u = 10.0**self.uncertainty_decades
        return b / u, b * u

    def as_dict(self) -> dict:
        return {
            "channel": self.channel_id,
            "kind": self.kind,
            "lambda_s_inv": self.evaluated_at.lam.value,
            "r_c_cm": self.evaluated_at.r_C.value,
            "bound_s_inv": self.lambda_bound.value,
            "multiplier": self.multiplier_vs_standard,
            "factor_vs_input": self.factor_vs_input,
            "uncertainty_decades": self.uncertainty_decades,
            "flags": list(self.flags),
            "notes": self.notes,
            "refs": list(self.refs),
            "observables": {o.name: {"value": o.magnitude(), "unit": o.unit} for o in self.observables},
        }

"""Dimensioned quantities on a CGS + Kelvin base and a small constants catalog.

Every value is stored in base units (cm, g, s, K).  Electromagnetic coupling
only ever enters through the dimensionless fine-structure constant, so no
charge dimension is carried.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "Dim",
    "Qty",
    "DimensionError",
    "DIMENSIONLESS",
    "LENGTH",
    "MASS",
    "TIME",
    "TEMPERATURE",
    "RATE",
    "ENERGY",
    "POWER",
    "unit",
    "q",
    "convert",
    "assert_dim",
    "Constants",
    "CONST",
    "UNITS",
]


class DimensionError(ValueError):
    """Raised when quantities with incompatible dimensions are combined."""


@dataclass(frozen=True)
class Dim:
    length_exp: int = 0
    mass_exp: int = 0
    time_exp: int = 0
    temperature_exp: int = 0

    def __mul__(self, other: Dim) -> Dim:
        return Dim(
            self.length_exp + other.length_exp,
            self.mass_exp + other.mass_exp,
            self.time_exp + other.time_exp,
            self.temperature_exp + other.temperature_exp,
        )

    def __truediv__(self, other: Dim) -> Dim:
        return Dim(
            self.length_exp - other.length_exp,
            self.mass_exp - other.mass_exp,
            self.time_exp - other.time_exp,
            self.temperature_exp - other.temperature_exp,
        )

    def __pow__(self, p: int) -> Dim:
        if not isinstance(p, int):
            raise TypeError("dimension exponents must stay integral")
        return Dim(
            self.length_exp * p,
            self.mass_exp * p,
            self.time_exp * p,
            self.temperature_exp * p,
        )

    def half(self) -> Dim:
        exps = self.as_tuple()
        if any(e % 2 for e in exps):
            raise DimensionError(f"cannot take square root of {self}")
        return Dim(*(e // 2 for e in exps))

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.length_exp, self.mass_exp, self.time_exp, self.temperature_exp)

    @property
    def dimensionless(self) -> bool:
        return self.as_tuple() == (0, 0, 0, 0)

    def __str__(self) -> str:
        parts = []
        for sym, e in zip(("cm", "g", "s", "K"), self.as_tuple()):
            if e == 1:
                parts.append(sym)
            elif e:
                parts.append(f"{sym}^{e}")
        return " ".join(parts) or "1"


DIMENSIONLESS = Dim()
LENGTH = Dim(1, 0, 0, 0)
MASS = Dim(0, 1, 0, 0)
TIME = Dim(0, 0, 1, 0)
TEMPERATURE = Dim(0, 0, 0, 1)
RATE = Dim(0, 0, -1, 0)
ENERGY = Dim(2, 1, -2, 0)
POWER = Dim(2, 1, -3, 0)


def _coerce(other) -> Qty:
    if isinstance(other, Qty):
        return other
    if isinstance(other, (int, float)):
        return Qty(float(other))
    return NotImplemented


@dataclass(frozen=True)
class Qty:
    """A finite scalar with a dimension, stored in CGS base units."""

    value: float
    dim: Dim = DIMENSIONLESS

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError(f"non-finite quantity value {self.value!r}")
        object.__setattr__(self, "value", v)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.dim != self.dim:
            raise DimensionError(f"cannot add {self.dim} and {other.dim}")
        return Qty(self.value + other.value, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.dim != self.dim:
            raise DimensionError(f"cannot subtract {other.dim} from {self.dim}")
        return Qty(self.value - other.value, self.dim)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Qty(-self.value, self.dim)

    def __abs__(self):
        return Qty(abs(self.value), self.dim)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Qty(self.value * other.value, self.dim * other.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Qty(self.value / other.value, self.dim / other.dim)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, p: int):
        if not isinstance(p, int):
            raise TypeError("use .sqrt() for half powers; other fractional powers are not supported")
        return Qty(self.value**p, self.dim**p)

    def sqrt(self) -> Qty:
        if self.value < 0:
            raise ValueError("square root of a negative quantity")
        return Qty(math.sqrt(self.value), self.dim.half())

    def _cmp_value(self, other) -> float:
        other = _coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare Qty with {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(f"cannot compare {self.dim} with {other.dim}")
        return other.value

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def __float__(self):
        if not self.dim.dimensionless:
            raise DimensionError(f"only dimensionless quantities convert to float, got {self.dim}")
        return self.value

    # units ------------------------------------------------------------
    def to(self, target: str | Qty) -> float:
        """Magnitude of this quantity expressed in ``target`` units."""
        return convert(self, target)

    def __str__(self) -> str:
        return f"{self.value:.6g} {self.dim}"


# --- unit catalog ------------------------------------------------------

_CM = Qty(1.0, LENGTH)
_G = Qty(1.0, MASS)
_S = Qty(1.0, TIME)
_K = Qty(1.0, TEMPERATURE)

_EV_ERG = 1.602176634e-12
_PC_CM = 3.0856775814913673e18
_JULIAN_YEAR_S = 365.25 * 86400.0

UNITS: dict[str, Qty] = {
    "1": Qty(1.0),
    "rad": Qty(1.0),
    "cm": _CM,
    "m": 100.0 * _CM,
    "km": 1e5 * _CM,
    "micron": 1e-4 * _CM,
    "nm": 1e-7 * _CM,
    "angstrom": 1e-8 * _CM,
    "pc": _PC_CM * _CM,
    "Mpc": 1e6 * _PC_CM * _CM,
    "g": _G,
    "kg": 1e3 * _G,
    "s": _S,
    "ms": 1e-3 * _S,
    "fs": 1e-15 * _S,
    "min": 60.0 * _S,
    "hr": 3600.0 * _S,
    "day": 86400.0 * _S,
    "yr": _JULIAN_YEAR_S * _S,
    "Gyr": 1e9 * _JULIAN_YEAR_S * _S,
    "K": _K,
    "erg": Qty(1.0, ENERGY),
    "J": Qty(1e7, ENERGY),
    "eV": Qty(_EV_ERG, ENERGY),
    "keV": Qty(1e3 * _EV_ERG, ENERGY),
    "MeV": Qty(1e6 * _EV_ERG, ENERGY),
    "GeV": Qty(1e9 * _EV_ERG, ENERGY),
    "Hz": Qty(1.0, RATE),
}

_TOKEN = re.compile(r"([A-Za-z_]+|1)(?:\^(-?\d+))?$")


@lru_cache(maxsize=256)
def unit(expr: str) -> Qty:
    """Parse a unit expression such as ``"eV/s"``, ``"erg g^-1 s^-1"`` or ``"km/s/Mpc"``.

    Factors are separated by whitespace or ``*``; each ``/`` inverts the
    single factor that follows it.
    """
    text = expr.replace("*", " ").replace("/", " / ").split()
    if not text:
        raise ValueError("empty unit expression")
    result = Qty(1.0)
    invert_next = False
    for tok in text:
        if tok == "/":
            invert_next = True
            continue
        m = _TOKEN.match(tok)
        if m is None or m.group(1) not in UNITS:
            raise ValueError(f"unknown unit token {tok!r} in {expr!r}")
        p = int(m.group(2)) if m.group(2) else 1
        if invert_next:
            p = -p
            invert_next = False
        result = result * UNITS[m.group(1)] ** p
    if invert_next:
        raise ValueError(f"dangling '/' in {expr!r}")
    return result


def q(value: float, expr: str = "1") -> Qty:
    """Shorthand constructor: ``q(1e-5, "cm")``."""
    return float(value) * unit(expr)


def convert(quantity: Qty, target: str | Qty) -> float:
    """Return the magnitude of ``quantity`` in ``target`` units.

    Raises DimensionError when the dimensions disagree.
    """
    tgt = unit(target) if isinstance(target, str) else target
    if tgt.dim != quantity.dim:
        raise DimensionError(f"cannot convert {quantity.dim} to {tgt.dim}")
    return quantity.value / tgt.value


def assert_dim(quantity: Qty, expected: Dim) -> bool:
    """True iff ``quantity`` carries exactly ``expected`` dimensions."""
    return isinstance(quantity, Qty) and quantity.dim == expected


# --- constants -----------------------------------------------------------


@dataclass(frozen=True)
class Constants:
    """CODATA 2018 values in CGS.  ``alpha_fs`` is pinned to 1/137.04."""

    hbar: Qty = Qty(1.054571817e-27, ENERGY * TIME)
    h: Qty = Qty(6.62607015e-27, ENERGY * TIME)
    c: Qty = Qty(2.99792458e10, LENGTH / TIME)
    k_B: Qty = Qty(1.380649e-16, ENERGY / TEMPERATURE)
    # nucleon mass taken as the proton mass
    m_N: Qty = Qty(1.67262192369e-24, MASS)
    m_e: Qty = Qty(9.1093837015e-28, MASS)
    amu: Qty = Qty(1.66053906660e-24, MASS)
    alpha_fs: float = 1.0 / 137.04
    eV: Qty = Qty(_EV_ERG, ENERGY)
    year: Qty = Qty(_JULIAN_YEAR_S, TIME)
    day: Qty = Qty(86400.0, TIME)

    @property
    def hbar_c(self) -> Qty:
        return self.hbar * self.c

    @property
    def e_squared(self) -> float:
        """Natural-unit (Heaviside-Lorentz) charge squared, 4*pi*alpha."""
        return 4.0 * math.pi * self.alpha_fs


CONST = Constants()

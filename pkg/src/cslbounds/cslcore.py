"""CSL parameter algebra and the master rate formulas.

Rates produced here:

* reduction rate of an off-diagonal position-space density-matrix element,
* secular centre-of-mass heating of a body of mass M,
* the photon spectrum radiated by a free charge driven by the collapse noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .units import CONST, ENERGY, LENGTH, MASS, RATE, Qty, q

__all__ = [
    "CslParams",
    "MassConfig",
    "STANDARD_LAMBDA",
    "STANDARD_RC",
    "reduction_rate",
    "heating_rate",
    "mean_square_acceleration",
    "mean_square_acceleration_qmupl",
    "radiated_power_spectrum",
    "radiated_power",
    "photon_rate_in_bin",
    "neutralization_correction",
]

STANDARD_LAMBDA = q(2.2e-17, "s^-1")
STANDARD_RC = q(1e-5, "cm")

EllMode = Literal["exact", "small", "saturated"]
Convention = Literal["density_matrix", "variance"]


@dataclass(frozen=True)
class CslParams:
    lam: Qty
    r_C: Qty

    def __post_init__(self):
        if self.lam.dim != RATE:
            raise ValueError(f"lambda must be a rate, got {self.lam.dim}")
        if self.r_C.dim != LENGTH:
            raise ValueError(f"r_C must be a length, got {self.r_C.dim}")
        if self.lam.value <= 0 or self.r_C.value <= 0:
            raise ValueError("lambda and r_C must be positive")

    @classmethod
    def standard(cls) -> CslParams:
        return cls(STANDARD_LAMBDA, STANDARD_RC)

    @classmethod
    def from_values(cls, lam: float, r_C: float) -> CslParams:
        """Build from plain numbers in s^-1 and cm."""
        return cls(q(lam, "s^-1"), q(r_C, "cm"))

    @classmethod
    def from_gamma(cls, gamma: Qty, r_C: Qty) -> CslParams:
        return cls(gamma / (8.0 * math.pi**1.5 * r_C**3), r_C)

    @property
    def alpha(self) -> Qty:
        return 1.0 / self.r_C**2

    @property
    def gamma(self) -> Qty:
        return 8.0 * math.pi**1.5 * self.r_C**3 * self.lam

    @property
    def eta(self) -> Qty:
        return self.lam / (2.0 * self.r_C**2)

    def with_lambda(self, lam: float | Qty) -> CslParams:
        lam = lam if isinstance(lam, Qty) else q(lam, "s^-1")
        return CslParams(lam, self.r_C)

    def with_rc(self, r_C: float | Qty) -> CslParams:
        r_C = r_C if isinstance(r_C, Qty) else q(r_C, "cm")
        return CslParams(self.lam, r_C)


@dataclass(frozen=True)
class MassConfig:
    """Groups of nucleons displaced by ``ell``.

    ``n`` nucleons move coherently inside one correlation volume, ``N`` such
    groups sit further apart than r_C, and ``mass_ratio`` rescales the
    coupling for particles other than nucleons.
    """

    n: float
    N: float = 1
    mass_ratio: float = 1.0
    ell: Qty | None = None
    ell_mode: EllMode = "saturated"

    def __post_init__(self):
        if self.n <= 0 or self.N <= 0:
            raise ValueError("n and N must be positive")
        if self.mass_ratio <= 0:
            raise ValueError("mass_ratio must be positive")
        if self.ell_mode not in ("exact", "small", "saturated"):
            raise ValueError(f"unknown ell_mode {self.ell_mode!r}")
        if self.ell_mode != "saturated":
            if self.ell is None or self.ell.dim != LENGTH or self.ell.value < 0:
                raise ValueError("a non-negative displacement ell is required")


def reduction_rate(p: CslParams, m: MassConfig, convention: Convention = "density_matrix") -> Qty:
    """Decay rate of the off-diagonal element between configurations ``ell`` apart.

    ``convention="variance"`` returns the rate defined by the decay of the
    coordinate variance, which is exactly twice the density-matrix rate.
    """
    base = p.lam * (m.n**2 * m.N * m.mass_ratio**2)
    if m.ell_mode == "saturated":
        rate = base
    else:
        u = float((m.ell / p.r_C) ** 2) / 4.0
        if m.ell_mode == "small":
            if m.ell > p.r_C:
                raise ValueError("small-displacement expansion requested with ell > r_C")
            rate = base * u
        else:
            rate = base * -math.expm1(-u)
    if convention == "variance":
        return 2.0 * rate
    if convention != "density_matrix":
        raise ValueError(f"unknown convention {convention!r}")
    return rate


def heating_rate(p: CslParams, total_mass: Qty) -> Qty:
    """Secular centre-of-mass energy gain, erg/s."""
    if total_mass.dim != MASS or total_mass.value <= 0:
        raise ValueError("total_mass must be a positive mass")
    return 0.75 * p.lam * CONST.hbar**2 * total_mass / (p.r_C**2 * CONST.m_N**2)


def mean_square_acceleration(p: CslParams) -> Qty:
    """E[(d^2x/dt^2)^2] dt for any mass-proportionally coupled particle, cm^2 s^-3.

    The particle mass cancels: the 1/m from force-to-acceleration meets the
    m/m_N in the noise coupling.
    """
    return 1.5 * CONST.hbar**2 * p.lam / (CONST.m_N**2 * p.r_C**2)


def mean_square_acceleration_qmupl(p: CslParams) -> Qty:
    """Same quantity from the linear (small-displacement) model, three axes."""
    return 3.0 * (CONST.hbar / CONST.m_N) ** 2 * p.eta


def _spectrum_from_acceleration(acc2_dt: Qty, k_photon: Qty) -> Qty:
    # Larmor in Gaussian units with q^2 = alpha hbar c; 1/dt -> (1/pi) \int_0^inf d omega.
    # Photon number per unit photon energy: dP/domega / (hbar omega) / hbar.
    a, hbar, c = CONST.alpha_fs, CONST.hbar, CONST.c
    omega = k_photon / hbar
    dP_domega = (2.0 * a * hbar / (3.0 * c**2)) * acc2_dt / math.pi
    return dP_domega / (hbar * omega) / hbar


def radiated_power_spectrum(p: CslParams, k_photon: Qty) -> Qty:
    """Photons per second per unit photon energy (s^-1 erg^-1) for one free charge.

    Computed from the noise-induced mean-square acceleration and checked
    against the linear-model acceleration and the closed form
    ``alpha lambda (hbar c)^2 / (pi r_C^2 (m_N c^2)^2 k)``.
    """
    if k_photon.dim != ENERGY or k_photon.value <= 0:
        raise ValueError("photon energy must be positive")
    spec = _spectrum_from_acceleration(mean_square_acceleration(p), k_photon)
    via_qmupl = _spectrum_from_acceleration(mean_square_acceleration_qmupl(p), k_photon)
    closed = (
        CONST.alpha_fs * p.lam * CONST.hbar_c**2
        / (math.pi * p.r_C**2 * (CONST.m_N * CONST.c**2) ** 2 * k_photon)
    )
    for other in (via_qmupl, closed):
        if not math.isclose(spec.value, other.value, rel_tol=1e-12):
            raise AssertionError("radiation routes disagree")
    return spec


def photon_rate_in_bin(p: CslParams, k_center: Qty, width: Qty) -> Qty:
    """Bin-centre estimate of the photon emission rate in ``[k - w/2, k + w/2]``."""
    return radiated_power_spectrum(p, k_center) * width


def radiated_power(p: CslParams, k_max: Qty) -> Qty:
    """Total radiated power with the spectrum cut off at ``k_max`` (erg/s)."""
    # \int_0^kmax k dGamma/dk dk; k dGamma/dk is flat in k
    flat = radiated_power_spectrum(p, k_max) * k_max
    return flat * k_max


def neutralization_correction(a0: Qty, v_over_c: float, p: CslParams) -> float:
    """Residual fraction of the free-electron radiation left after core cancellation.

    Sum of the finite-size term (a0/r_C)^2, the retardation term (v/c)^2 and
    their cross term.
    """
    if a0.dim != LENGTH or a0.value < 0:
        raise ValueError("a0 must be a non-negative length")
    if a0 >= p.r_C:
        raise ValueError("core radius must be below r_C")
    if not 0 <= v_over_c < 1:
        raise ValueError("v/c must lie in [0, 1)")
    x = float(a0 / p.r_C)
    return x * x + v_over_c * v_over_c + x * v_over_c

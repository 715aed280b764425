"""Reduction driven by lattice phonons: hot-electron slow-down, ion emission, thermal noise.

A phonon of frequency omega spread over a block of mass M displaces every
site by l^2 = hbar / (M omega).  Inserting that into the small-displacement
reduction rate makes the group count drop out, leaving a per-mode factor
f(omega) = hbar n / (4 r_C^2 m_N omega).  Phonons shorter than r_C move
less than a full correlation volume coherently, which the factor
G(omega) = min(1, (2 pi c_s / (r_C omega))^3) accounts for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .cslcore import CslParams
from .quadrature import QuadratureSpec, integrate_1d
from .units import CONST, MASS, Qty, q

__all__ = [
    "LatticeModel",
    "CarrierModel",
    "ELECTRON",
    "BROMIDE_ION",
    "mode_displacement_sq",
    "coherence_factor",
    "phonon_mode_rate_factor",
    "slowdown_f_tot",
    "electron_slowdown_reduction",
    "ion_emission_suppression",
    "log10_ion_emission_suppression",
    "leading_coherence_average",
    "debye_coherence_average",
    "thermal_fluctuation_bound",
]

PHONON_SPEC = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-10, max_depth=200)


@dataclass(frozen=True)
class LatticeModel:
    c_s: Qty = q(3e5, "cm/s")
    omega_D: Qty = q(3e13, "s^-1")
    atom_mass: Qty = 100.0 * CONST.m_N
    nucleon_density: Qty = q(1e24, "cm^-3")
    T: Qty = q(300.0, "K")

    def __post_init__(self):
        for name in ("c_s", "omega_D", "atom_mass", "nucleon_density"):
            if getattr(self, name).value <= 0:
                raise ValueError(f"{name} must be positive")
        if self.T.value < 0:
            raise ValueError("temperature must be non-negative")
        if not self.debye_wavelength > self.lattice_spacing:
            raise ValueError("Debye wavelength must exceed the lattice spacing")

    @property
    def debye_wavelength(self) -> Qty:
        return 2.0 * math.pi * self.c_s / self.omega_D

    @property
    def lattice_spacing(self) -> Qty:
        """Mean inter-atomic distance implied by the atom number density."""
        atoms = self.nucleon_density * CONST.m_N / self.atom_mass
        return q(float(atoms * q(1.0, "cm^3")) ** (-1.0 / 3.0), "cm")

    def nucleons_per_volume(self, r_C: Qty) -> float:
        return float(self.nucleon_density * r_C**3)


@dataclass(frozen=True)
class CarrierModel:
    """A quasi-particle with quadratic dispersion E = (hbar k)^2 / 2 m*."""

    effective_mass: Qty
    k0: float = math.inf  # initial wave number, cm^-1

    def __post_init__(self):
        if self.effective_mass.dim != MASS or self.effective_mass.value <= 0:
            raise ValueError("effective mass must be a positive mass")
        if not self.k0 > 0:
            raise ValueError("k0 must be positive")

    def k_th(self, lattice: LatticeModel) -> float:
        """Mean thermal wave number, cm^-1."""
        return (3.0 * self.effective_mass * CONST.k_B * lattice.T).sqrt().value / CONST.hbar.value

    def k_min(self, lattice: LatticeModel) -> float:
        """Threshold wave number for emitting an acoustic phonon, cm^-1."""
        return float(self.effective_mass * lattice.c_s / CONST.hbar * q(1.0, "cm"))

    def with_k0(self, k0: float) -> CarrierModel:
        return CarrierModel(self.effective_mass, k0)


ELECTRON = CarrierModel(CONST.m_e)
# the lightest ion leaving the grain; it has the least suppressed emission
BROMIDE_ION = CarrierModel(80.0 * CONST.m_N)


def mode_displacement_sq(block_mass: Qty, omega: Qty) -> Qty:
    """Mean square site displacement for one phonon quantum spread over the block."""
    return CONST.hbar / (block_mass * omega)


def coherence_factor(p: CslParams, lattice: LatticeModel, omega: Qty) -> float:
    if omega.value <= 0:
        raise ValueError("omega must be positive")
    return min(1.0, float(2.0 * math.pi * lattice.c_s / (p.r_C * omega)) ** 3)


def phonon_mode_rate_factor(
    p: CslParams, lattice: LatticeModel, n: float, omega: Qty, with_coherence: bool = False
) -> float:
    """Reduction rate per unit lambda from one emitted phonon of frequency omega."""
    if omega.value <= 0:
        raise ValueError("omega must be positive")
    f = float(CONST.hbar * n / (4.0 * p.r_C**2 * CONST.m_N * omega))
    return f * coherence_factor(p, lattice, omega) if with_coherence else f


def _slowdown_prefactor(p: CslParams, lattice: LatticeModel, n: float) -> float:
    # hbar n / (r_C^2 m_N c_s), in cm^-1
    return float(CONST.hbar * n / (p.r_C**2 * CONST.m_N * lattice.c_s) * q(1.0, "cm"))


def _analytic_f_tot(C: float, k_th: float, k0: float, qs: float | None) -> float:
    if qs is None:
        return (5.0 / 32.0) * C * (1.0 / k_th - 1.0 / k0)

    def primitive(k: float) -> float:
        # antiderivative of (5C/64) k^-4 * inner(k), valid for 2k >= qs
        if math.isinf(k):
            return 0.0
        return (5.0 * C / 64.0) * (-0.5 * qs * qs / k**3 + qs**3 / (8.0 * k**4))

    kc = qs / 2.0
    total = 0.0
    if k_th < kc:
        hi = min(k0, kc)
        # inner = 2 k^2 below the coherence edge
        total += (5.0 / 32.0) * C * (1.0 / k_th - 1.0 / hi)
        lo = kc
    else:
        lo = k_th
    if k0 > lo:
        total += primitive(k0) - primitive(lo)
    return total


def _numeric_f_tot(C: float, k_th: float, k0: float, qs: float | None, sigma: float) -> float:
    def R(k: float, qq: float) -> float:
        return (5.0 / 16.0) * sigma * qq * qq / k

    def f(qq: float) -> float:
        # f(c_s q) up to the common prefactor: C / (4 q)
        return C / (4.0 * qq)

    def G(qq: float) -> float:
        return 1.0 if qs is None or qq <= qs else (qs / qq) ** 3

    # work in x = k / k_th, y = q / k_th to keep the integrands O(1)
    def inner(x: float) -> float:
        k = x * k_th
        val, _ = integrate_1d(
            lambda y: R(k, y * k_th) * f(y * k_th) * G(y * k_th) * k_th,
            0.0,
            2.0 * x,
            PHONON_SPEC,
            points=None if qs is None else [qs / k_th],
        )
        return val / (sigma * k**3) * k_th

    x0 = k0 / k_th
    val, _ = integrate_1d(inner, 1.0, x0, PHONON_SPEC, points=None if qs is None else [qs / (2.0 * k_th)])
    return val


def slowdown_f_tot(
    p: CslParams,
    lattice: LatticeModel,
    carrier: CarrierModel,
    n: float,
    with_coherence: bool = False,
    method: Literal["analytic", "numeric"] = "analytic",
    sigma: float = 1.0,
) -> float:
    """Integrated per-lambda reduction from a carrier slowing from k0 to thermal.

    ``analytic`` uses the closed form of the double integral, exactly
    including the coherence factor when requested; ``numeric`` evaluates the
    double integral by nested adaptive quadrature.  The energy-loss constant
    ``sigma`` cancels between emission rate and time change.
    """
    k_th = carrier.k_th(lattice)
    k0 = carrier.k0
    if not k0 >= k_th:
        raise ValueError("k0 must not be below the thermal wave number")
    if not k_th > carrier.k_min(lattice):
        raise ValueError("thermal wave number must exceed the phonon emission threshold")
    if k0 == k_th:
        return 0.0
    C = _slowdown_prefactor(p, lattice, n)
    qs = 2.0 * math.pi / p.r_C.value if with_coherence else None
    if method == "analytic":
        return _analytic_f_tot(C, k_th, k0, qs)
    if method == "numeric":
        return _numeric_f_tot(C, k_th, k0, qs, sigma)
    raise ValueError(f"unknown method {method!r}")


def leading_coherence_average(p: CslParams, k_th: float) -> float:
    """Large-k0, k_th >> 2 pi / r_C limit of the coherence suppression."""
    return (math.pi / (p.r_C.value * k_th)) ** 2


def electron_slowdown_reduction(
    p: CslParams,
    lattice: LatticeModel = LatticeModel(),
    carrier: CarrierModel = ELECTRON,
    n: float = 1e9,
    with_coherence: bool = False,
    method: Literal["analytic", "numeric"] = "analytic",
) -> Qty:
    return p.lam * slowdown_f_tot(p, lattice, carrier, n, with_coherence, method)


def ion_emission_suppression(carrier: CarrierModel = BROMIDE_ION, lattice: LatticeModel = LatticeModel()) -> float:
    """Fraction of a thermal population above the phonon emission threshold."""
    k_th = carrier.k_th(lattice)
    if k_th == 0:
        return 0.0
    ratio = carrier.k_min(lattice) / k_th
    return math.exp(-1.5 * ratio * ratio)


def log10_ion_emission_suppression(carrier: CarrierModel = BROMIDE_ION, lattice: LatticeModel = LatticeModel()) -> float:
    """log10 of the suppression, usable where the value underflows."""
    ratio = carrier.k_min(lattice) / carrier.k_th(lattice)
    return -1.5 * ratio * ratio / math.log(10.0)


def debye_coherence_average(
    p: CslParams, lattice: LatticeModel = LatticeModel(), method: Literal["analytic", "numeric"] = "analytic"
) -> float:
    """Coherence factor averaged over the thermal Debye spectrum.

    Each mode contributes k_B T / (M omega^2) to l^2 and the density of
    states goes as omega^2, so the weight is flat in omega on (0, omega_D].
    ``analytic`` returns the leading term 3 pi c_s / (r_C omega_D).
    """
    wc = float(2.0 * math.pi * lattice.c_s / p.r_C * q(1.0, "s"))
    wd = lattice.omega_D.value
    if method == "analytic":
        return 1.5 * wc / wd
    if method != "numeric":
        raise ValueError(f"unknown method {method!r}")
    val, _ = integrate_1d(
        lambda w: min(1.0, (wc / w) ** 3) if w > 0 else 1.0, 0.0, wd, PHONON_SPEC, points=[wc] if wc < wd else None
    )
    return val / wd


def thermal_fluctuation_bound(
    p: CslParams,
    lattice: LatticeModel = LatticeModel(),
    n: float = 1e9,
    N: float = 1,
    with_coherence: bool = True,
    method: Literal["analytic", "numeric"] = "analytic",
) -> Qty:
    """Reduction rate from thermal lattice motion, ignoring cancellations.

    Twice the Debye-integrated thermal displacement is used in place of the
    difference between branches, so this over-bounds the true rate.
    """
    if n <= 0 or N <= 0:
        raise ValueError("n and N must be positive")
    f_tot = (
        2.25 * CONST.k_B * lattice.T * n * n * N
        / (p.r_C**2 * lattice.atom_mass * lattice.omega_D**2)
    )
    rate = 2.0 * p.lam * float(f_tot)
    if with_coherence:
        rate = rate * debye_coherence_average(p, lattice, method)
    return rate

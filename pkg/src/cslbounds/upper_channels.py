"""Upper bounds on lambda from diffraction, persistence, excitation, radiation and heating.

Every channel is linear in lambda, so the bound follows from one evaluation
at the supplied parameters: lambda_max = lambda * limit / predicted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Literal

from scipy import integrate

from .cslcore import CslParams, MassConfig, heating_rate, neutralization_correction, photon_rate_in_bin, reduction_rate
from .results import FLAG_COMPONENT, FLAG_DUBIOUS, FLAG_SUPERSEDED, ChannelResult, Observable
from .units import CONST, LENGTH, MASS, RATE, TEMPERATURE, Qty, q

__all__ = [
    "Cosmology",
    "IgmState",
    "ExcitationTarget",
    "HYDROGEN",
    "PROTON_CONSTITUENT",
    "PROTON_CURRENT",
    "GERMANIUM_NUCLEUS",
    "GE_QUASI_FREE_ELECTRONS",
    "fullerene_bound",
    "fullerene_washout_n",
    "supercurrent_decay_rate",
    "supercurrent_bound",
    "excitation_rate",
    "excitation_bound",
    "radiation_bound",
    "cmb_budget_bound",
    "lookback_derivative",
    "universe_age",
    "igm_cooling_rate",
    "igm_bound",
    "igm_combined_bound",
    "dust_emission",
    "dust_grain_bound",
    "planetary_bound",
]

# Quasi-free electrons per germanium atom contributing to the x-ray spectrum.
GE_QUASI_FREE_ELECTRONS = 4
GE_ATOMS_PER_KG = q(8.3e24, "kg^-1")
GE_XRAY_LIMIT = q(0.05, "keV^-1 kg^-1 day^-1")
# Dissipative molecular collisions in a planet outpace collapse heating at
# the IGM-limited lambda by this many decades (external estimate).
COLLISIONAL_DOMINANCE_DECADES = 28.0
# Quoted enhancement bound from a quadrupole nuclear-excitation analysis.
NUCLEAR_QUADRUPOLE_MULTIPLIER = 1e14


def _bound(cid, p, predicted, limit, **kw) -> ChannelResult:
    """Upper bound from a prediction that is linear in lambda."""
    ratio = float(limit / predicted) if predicted.value > 0 else math.inf
    return ChannelResult(channel_id=cid, kind="upper", lambda_bound=p.lam * ratio, evaluated_at=p, **kw)


# --- molecular diffraction ------------------------------------------------


def fullerene_bound(
    p: CslParams, n: int = 1000, grating: Qty = q(2.5e-5, "cm"), transit: Qty = q(1e-2, "s")
) -> ChannelResult:
    if n <= 0 or grating.value <= 0 or transit.value <= 0:
        raise ValueError("n, grating and transit must be positive")
    rate = reduction_rate(p, MassConfig(n=n, N=1, ell=grating, ell_mode="exact"))
    return _bound(
        "fullerene",
        p,
        rate * transit,
        q(1.0),
        uncertainty_decades=0.5,
        notes="interference survives while the transit reduction exponent stays below one",
        refs=("C60/C70 interferometry",),
        observables=(Observable("reduction_rate", rate, "s^-1"),),
    )


def fullerene_washout_n(p: CslParams, grating: Qty = q(2.5e-5, "cm"), transit: Qty = q(1e-2, "s")) -> float:
    """Nucleon count at which the transit reduction exponent reaches one."""
    per_n2 = reduction_rate(p, MassConfig(n=1, N=1, ell=grating, ell_mode="exact"))
    return 1.0 / math.sqrt(float(per_n2 * transit))


# --- supercurrent persistence ------------------------------------------------


def supercurrent_decay_rate(p: CslParams, k_F: Qty) -> Qty:
    x = float(p.r_C * k_F)
    if x <= 1.0:
        raise ValueError("k_F r_C must exceed 1 for the indistinguishability factor")
    return p.lam / x * float(CONST.m_e / CONST.m_N) ** 2


def supercurrent_bound(
    p: CslParams, k_F: Qty = q(1.0 / 0.6e-8, "cm^-1"), decay_limit: Qty = q(3e-13, "s^-1")
) -> ChannelResult:
    rate = supercurrent_decay_rate(p, k_F)
    return _bound(
        "supercurrent",
        p,
        rate,
        decay_limit,
        uncertainty_decades=0.5,
        notes="electron-mass coupling with Fermi-sea indistinguishability; pair recombination neglected",
        refs=("persistent-current experiments",),
        observables=(Observable("decay_rate", rate, "s^-1"),),
    )


# --- internal excitation --------------------------------------------------------


@dataclass(frozen=True)
class ExcitationTarget:
    label: str
    a0: Qty
    constituent_mass: Qty
    rate_limit: Qty
    selection_suppression: float = 1.0
    number_density_per_kg: Qty | None = None

    def __post_init__(self):
        if self.a0.dim != LENGTH or self.a0.value <= 0:
            raise ValueError("a0 must be a positive length")
        if self.constituent_mass.dim != MASS:
            raise ValueError("constituent_mass must be a mass")
        if not 0 < self.selection_suppression <= 1:
            raise ValueError("selection_suppression must lie in (0, 1]")


HYDROGEN = ExcitationTarget(
    "hydrogen",
    a0=q(1e-8, "cm"),
    constituent_mass=CONST.m_e,
    rate_limit=1.0 / q(4e17, "s"),
)

_PROTON_LIMIT = q(0.3e-40, "s^-1")
_PROTON_SUPPRESSION = float(CONST.m_N * CONST.c**2 / q(250.0, "GeV")) ** 4  # Lambda = 250 GeV

PROTON_CONSTITUENT = ExcitationTarget(
    "proton_constituent",
    a0=q(1e-13, "cm"),
    constituent_mass=CONST.m_N / 3.0,
    rate_limit=_PROTON_LIMIT,
    selection_suppression=_PROTON_SUPPRESSION,
)

PROTON_CURRENT = ExcitationTarget(
    "proton_current",
    a0=q(1e-13, "cm"),
    constituent_mass=q(10.0, "MeV") / CONST.c**2,
    rate_limit=_PROTON_LIMIT,
    selection_suppression=_PROTON_SUPPRESSION,
)

GERMANIUM_NUCLEUS = ExcitationTarget(
    "germanium_nucleus",
    a0=q(1.4e-13 * 73 ** (1.0 / 3.0), "cm"),
    constituent_mass=CONST.m_N,
    rate_limit=GE_XRAY_LIMIT * q(1.0, "keV"),
    number_density_per_kg=GE_ATOMS_PER_KG,
)


def excitation_rate(p: CslParams, t: ExcitationTarget, suppressed: bool = True) -> Qty:
    """Excitation probability per unit time of one bound system of size a0."""
    if not t.a0 < p.r_C:
        raise ValueError("excitation formula needs a0 < r_C")
    rate = p.lam * float(t.constituent_mass / CONST.m_N) ** 2 * float(t.a0 / p.r_C) ** 4
    return rate * t.selection_suppression if suppressed else rate


def excitation_bound(p: CslParams, t: ExcitationTarget = GERMANIUM_NUCLEUS) -> ChannelResult:
    rate = excitation_rate(p, t)
    predicted = rate * t.number_density_per_kg if t.number_density_per_kg is not None else rate
    notes = ""
    if t is GERMANIUM_NUCLEUS or t.label == "germanium_nucleus":
        notes = "a published germanium analysis quotes a bound 10^3 higher than this evaluation"
    elif t.selection_suppression < 1:
        notes = "includes the (m_N / Lambda)^4 baryon-number selection suppression"
    return _bound(
        f"excitation_{t.label}",
        p,
        predicted,
        t.rate_limit,
        uncertainty_decades=1.0,
        notes=notes,
        refs=("bound-state excitation",),
        observables=(
            Observable("excitation_rate", excitation_rate(p, t, suppressed=False), "s^-1"),
            Observable("suppressed_rate", rate, "s^-1"),
        ),
    )


# --- spontaneous x-ray emission --------------------------------------------------


def radiation_bound(
    p: CslParams,
    k_center: Qty = q(11.0, "keV"),
    width: Qty = q(1.0, "keV"),
    electrons_per_atom: int = GE_QUASI_FREE_ELECTRONS,
    atoms_per_kg: Qty = GE_ATOMS_PER_KG,
    rate_limit: Qty = GE_XRAY_LIMIT,
    neutralized: bool = True,
    a0: Qty = q(1e-8, "cm"),
    v_over_c: float = 0.3e-3,
) -> ChannelResult:
    """Bound from the germanium x-ray background.

    With ``neutralized`` the free-electron spectrum is multiplied by the
    residual left after cancellation against the nuclear charge in the same
    correlation volume.
    """
    per_electron = photon_rate_in_bin(p, k_center, width)
    predicted = per_electron * electrons_per_atom * atoms_per_kg
    observables = [Observable("free_electron_rate_per_kg", predicted, "kg^-1 s^-1")]
    cid = "radiation_free"
    flags: tuple[str, ...] = (FLAG_SUPERSEDED,)
    if neutralized:
        flags = ()
        corr = neutralization_correction(a0, v_over_c, p)
        predicted = predicted * corr
        observables.append(Observable("neutralization", q(corr), "1"))
        cid = "radiation"
    return _bound(
        cid,
        p,
        predicted,
        rate_limit * width,
        uncertainty_decades=1.0 if neutralized else 0.3,
        notes=f"{electrons_per_atom} quasi-free electrons per atom, spectrum at bin centre",
        refs=("germanium x-ray spectrum",),
        flags=flags,
        observables=tuple(observables),
    )


# --- cosmological energy budgets ------------------------------------------------


@dataclass(frozen=True)
class Cosmology:
    H0: Qty = q(71.0, "km/s/Mpc")
    Omega_m: float = 0.26
    Omega_L: float = 0.74

    def __post_init__(self):
        if self.H0.dim != RATE or self.H0.value <= 0:
            raise ValueError("H0 must be a positive rate")
        if abs(self.Omega_m + self.Omega_L - 1.0) > 1e-12:
            raise ValueError("only flat cosmologies are supported")

    def E(self, z: float) -> float:
        return math.sqrt(self.Omega_m * (1.0 + z) ** 3 + self.Omega_L)


@dataclass(frozen=True)
class IgmState:
    z: float
    T: Qty
    log10_T_decades: float = 0.0

    def __post_init__(self):
        if self.z < 0:
            raise ValueError("redshift must be non-negative")
        if self.T.dim != TEMPERATURE or self.T.value <= 0:
            raise ValueError("T must be a positive temperature")


IGM_Z3 = IgmState(z=3.0, T=q(2e4, "K"))
IGM_Z0 = IgmState(z=0.06, T=q(10**3.7, "K"), log10_T_decades=0.5)

UNIVERSE_AGE_BUDGET = q(3.15e17, "s")


def lookback_derivative(c: Cosmology, z: float) -> Qty:
    """|dt/dz| for a flat matter plus Lambda universe."""
    if z < 0:
        raise ValueError("redshift must be non-negative")
    return 1.0 / (c.H0 * ((1.0 + z) * c.E(z)))


@lru_cache(maxsize=64)
def universe_age(c: Cosmology, z: float = 0.0) -> Qty:
    """Cosmic time elapsed up to redshift z."""
    val, _ = integrate.quad(lambda zz: 1.0 / ((1.0 + zz) * c.E(zz)), z, math.inf)
    return val / c.H0


def cmb_budget_bound(
    p: CslParams,
    photon_per_baryon: float = 1e9,
    fraction: float = 0.1,
    photon_energy: Qty = q(2.6e-4, "eV"),
    age: Qty = UNIVERSE_AGE_BUDGET,
) -> ChannelResult:
    """Accumulated proton heating must stay below a fraction of the photon energy per baryon."""
    gained = heating_rate(p, CONST.m_N) * age
    budget = fraction * photon_per_baryon * photon_energy
    return _bound(
        "cmb",
        p,
        gained,
        budget,
        uncertainty_decades=1.0,
        notes="energy deposited per proton over the cosmic age versus the radiation energy per baryon",
        refs=("CMB spectral distortion budget",),
        observables=(Observable("energy_per_proton", gained, "eV"),),
    )


def igm_cooling_rate(c: Cosmology, s: IgmState) -> Qty:
    """Adiabatic energy loss per proton for T scaling as (1+z)^2."""
    kT = CONST.k_B * s.T
    return 3.0 * kT / ((1.0 + s.z) * lookback_derivative(c, s.z))


def igm_bound(
    p: CslParams,
    c: Cosmology = Cosmology(),
    s: IgmState = IGM_Z3,
    mode: Literal["cooling", "accumulated"] | None = None,
) -> ChannelResult:
    """IGM thermal balance.

    ``cooling`` balances proton heating against adiabatic cooling at
    redshift z.  ``accumulated`` (the default near z = 0) requires the
    energy deposited over the cosmic age to stay below (3/2) k_B T.
    """
    if mode is None:
        mode = "accumulated" if s.z < 0.5 else "cooling"
    heat = heating_rate(p, CONST.m_N)
    if mode == "cooling":
        cooling = igm_cooling_rate(c, s)
        return _bound(
            "igm_z3",
            p,
            heat,
            cooling,
            uncertainty_decades=0.3,
            notes="recombination cooling ignored (conservative by at most a factor of about 6)",
            refs=("Lyman-alpha forest temperatures",),
            flags=(FLAG_COMPONENT,),
            observables=(
                Observable("cooling_rate", cooling, "eV/s"),
                Observable("dt_dz", lookback_derivative(c, s.z), "yr"),
            ),
        )
    if mode != "accumulated":
        raise ValueError(f"unknown IGM mode {mode!r}")
    age = universe_age(c)
    thermal = 1.5 * CONST.k_B * s.T
    return _bound(
        "igm_z0",
        p,
        heat * age,
        thermal,
        uncertainty_decades=s.log10_T_decades,
        notes="heating accumulated over the cosmic age versus the present thermal energy",
        refs=("low-redshift IGM temperatures",),
        flags=(FLAG_COMPONENT,),
        observables=(Observable("thermal_energy", thermal, "eV"), Observable("age", age, "Gyr")),
    )


def igm_combined_bound(
    p: CslParams, c: Cosmology = Cosmology(), high: IgmState = IGM_Z3, low: IgmState = IGM_Z0
) -> ChannelResult:
    """Geometric mean of the high- and low-redshift bounds with a one-decade band."""
    hi = igm_bound(p, c, high, mode="cooling")
    lo = igm_bound(p, c, low, mode="accumulated")
    bound = (hi.lambda_bound * lo.lambda_bound).sqrt()
    return ChannelResult(
        channel_id="igm",
        kind="upper",
        lambda_bound=bound,
        evaluated_at=p,
        uncertainty_decades=1.0,
        notes="overall IGM verdict",
        refs=hi.refs + lo.refs,
        observables=(
            Observable("z3_bound", hi.lambda_bound, "s^-1"),
            Observable("z0_bound", lo.lambda_bound, "s^-1"),
        ),
    )


def dust_emission(T_g: Qty, kappa_prime: float) -> Qty:
    """Power radiated per unit volume by grains with a nu^5-weighted opacity."""
    if T_g.value <= 0:
        raise ValueError("T_g must be positive")
    kT = CONST.k_B * T_g
    # 24.9 = Gamma(5) zeta(5)
    return 32.0 * math.pi * 24.9 * CONST.c * kT**5 / (CONST.h * CONST.c) ** 4 * kappa_prime


def dust_grain_bound(
    p: CslParams,
    T_g: Qty = q(20.0, "K"),
    kappa_prime: float = 0.05,
    nucleon_density: Qty = q(1e24, "cm^-3"),
) -> ChannelResult:
    W = dust_emission(T_g, kappa_prime)
    heat = heating_rate(p, CONST.m_N) * nucleon_density
    return _bound(
        "dust",
        p,
        heat,
        W,
        uncertainty_decades=1.0,
        notes="grain emissivity does not follow Stefan-Boltzmann",
        refs=("interstellar dust energy balance",),
        observables=(
            Observable("emission", W, "eV s^-1 cm^-3"),
            Observable("volumetric_heating", heat, "eV s^-1 cm^-3"),
        ),
    )


def planetary_bound(p: CslParams, L_over_M: Qty = q(4e-8, "erg g^-1 s^-1")) -> ChannelResult:
    if L_over_M.value <= 0:
        raise ValueError("L/M must be positive")
    per_gram = heating_rate(p, q(1.0, "g")) / q(1.0, "g")
    return _bound(
        "planetary",
        p,
        per_gram,
        L_over_M,
        uncertainty_decades=0.5,
        notes=(
            "dubious: dissipative equilibration; collisional decoherence dominates by "
            f"about {COLLISIONAL_DOMINANCE_DECADES:g} decades, so heating need not accumulate"
        ),
        refs=("planetary heat flow",),
        flags=(FLAG_DUBIOUS,),
        observables=(Observable("heating_per_gram", per_gram, "erg g^-1 s^-1"),),
    )


def baryon_selection_suppression(scale: Qty) -> float:
    """(m_N c^2 / Lambda)^4 for a baryon-number violating scale Lambda."""
    return float(CONST.m_N * CONST.c**2 / scale) ** 4


def with_limit(t: ExcitationTarget, rate_limit: Qty) -> ExcitationTarget:
    return replace(t, rate_limit=rate_limit)

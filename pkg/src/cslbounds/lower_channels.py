"""Lower bounds on lambda from the requirement that a latent image forms in time.

A measurement is taken as complete once a latent record exists: a silver
speck in a photographic grain, or a lattice-distortion track in an etched
detector.  Each channel returns the smallest lambda for which the reduction
rate of that record keeps pace with its formation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

from scipy import integrate

from .cslcore import CslParams, MassConfig, reduction_rate
from .results import FLAG_UPPER_ESTIMATE, ChannelResult, Observable
from .units import CONST, LENGTH, RATE, TIME, Qty, q

__all__ = [
    "EmulsionModel",
    "TrackModel",
    "photographic_lower_bound",
    "photographic_side_estimates",
    "etched_track_lower_bound",
    "vision_estimates",
    "photoreceptor_rate",
    "photoreceptor_tradeoff",
    "TradeoffExponents",
]


@dataclass(frozen=True)
class EmulsionModel:
    atoms_per_speck: int = 30
    grains_per_track: int = 20
    ag_weight: int = 108
    br_weight: int = 80
    grain_diameter: Qty = q(1e-5, "cm")
    gelatine_diffusion_range: Qty = q(1e-4, "cm")
    speck_formation_rate: Qty = q(30.0, "s^-1")
    formation_rate_decades: float = 2.0

    def __post_init__(self):
        for name in ("atoms_per_speck", "grains_per_track", "ag_weight", "br_weight"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.grain_diameter.dim != LENGTH or self.gelatine_diffusion_range.dim != LENGTH:
            raise ValueError("grain_diameter and gelatine_diffusion_range are lengths")
        if self.speck_formation_rate.dim != RATE or self.speck_formation_rate.value < 0:
            raise ValueError("speck_formation_rate must be a non-negative rate")

    @property
    def nucleons_per_speck(self) -> int:
        return self.atoms_per_speck * (self.ag_weight + self.br_weight)


@lru_cache(maxsize=1024)
def _mean_exact_factor(range_over_rc: float) -> float:
    """Average of 1 - exp(-(x R)^2 / 4) for x uniform on [0, 1]."""
    if range_over_rc == 0:
        return 0.0
    val, _ = integrate.quad(lambda x: -math.expm1(-((x * range_over_rc) ** 2) / 4.0), 0.0, 1.0)
    return val


def photographic_rate(
    p: CslParams, e: EmulsionModel, expansion: Literal["exact", "small"] = "exact"
) -> Qty:
    """Reduction rate of a track of grains each holding one developable speck.

    While r_C is below the grain size the whole speck moves coherently
    inside one correlation volume.  Above it the silver ions travel at most
    a grain diameter and the bromide ions spread into the gelatine with
    displacements uniform up to the diffusion range, so each species gets
    its own displacement suppression.  ``expansion="small"`` uses the
    leading-order forms (d/2r_C)^2 and 1/12 (R/r_C)^2 instead.
    """
    r = p.r_C
    if r <= e.grain_diameter:
        m = MassConfig(n=e.nucleons_per_speck, N=e.grains_per_track)
        return reduction_rate(p, m)
    n_ag = e.atoms_per_speck * e.ag_weight
    n_br = e.atoms_per_speck * e.br_weight
    d = float(e.grain_diameter / r)
    R = float(e.gelatine_diffusion_range / r)
    if expansion == "small":
        ag, br = d * d / 4.0, R * R / 12.0
    elif expansion == "exact":
        ag, br = -math.expm1(-d * d / 4.0), _mean_exact_factor(R)
    else:
        raise ValueError(f"unknown expansion {expansion!r}")
    return p.lam * e.grains_per_track * (n_ag**2 * ag + n_br**2 * br)


def photographic_lower_bound(
    p: CslParams, e: EmulsionModel = EmulsionModel(), expansion: Literal["exact", "small"] = "exact"
) -> ChannelResult:
    rate = photographic_rate(p, e, expansion)
    factor = float(e.speck_formation_rate / rate)
    saturated = p.r_C <= e.grain_diameter
    return ChannelResult(
        channel_id="photographic",
        kind="lower",
        lambda_bound=p.lam * factor,
        evaluated_at=p,
        uncertainty_decades=e.formation_rate_decades,
        notes=(
            "speck moves coherently inside one correlation volume"
            if saturated
            else "per-species displacement suppression: Ag within the grain, Br spread into gelatine"
        ),
        refs=("latent-image silver speck", "Gurney-Mott ion transport"),
        observables=(
            Observable("reduction_rate", rate, "s^-1"),
            Observable("formation_rate", e.speck_formation_rate, "s^-1"),
        ),
    )


def photographic_side_estimates(
    p: CslParams, photon_energy: Qty, elapsed: Qty, N: float
) -> list[tuple[str, Qty]]:
    """Reduction rates of the whole-detector recoil and of the ion back-motion.

    Both are returned with the supplied group count ``N`` already divided out.
    """
    if photon_energy.value < 0:
        raise ValueError("photon energy must be non-negative")
    if N <= 0:
        raise ValueError("N must be positive")
    momentum = photon_energy / CONST.c
    ell_over_rc = momentum * elapsed / (CONST.m_N * p.r_C)
    recoil = p.lam / (4.0 * N) * float(ell_over_rc) ** 2
    # one silver ion's worth of mass (108 nucleons) displaced by r_C must be
    # compensated by N n nucleons moving 108 r_C/(N n); the small-ell rate
    # then loses all n dependence
    back_motion = p.lam * 108.0**2 / (4.0 * N)
    return [("recoil", recoil), ("ion_back_motion", back_motion)]


@dataclass(frozen=True)
class TrackModel:
    distortion_radius: Qty = q(1e-6, "cm")
    track_length: Qty = q(1e-3, "cm")
    nucleon_density: Qty = q(1e24, "cm^-3")
    equilibrium_criterion: Literal["chemical", "thermal"] = "chemical"
    thermal_time: Qty = q(1e-9, "s")
    chemical_time: Qty = q(3e-8, "s")

    def __post_init__(self):
        if self.thermal_time.dim != TIME or self.chemical_time.dim != TIME:
            raise ValueError("equilibration times must be times")
        if not self.thermal_time < self.chemical_time:
            raise ValueError("thermal_time must be shorter than chemical_time")
        if self.equilibrium_criterion not in ("chemical", "thermal"):
            raise ValueError(f"unknown criterion {self.equilibrium_criterion!r}")

    @property
    def criterion_time(self) -> Qty:
        return self.chemical_time if self.equilibrium_criterion == "chemical" else self.thermal_time


def track_mass_config(p: CslParams, t: TrackModel) -> MassConfig:
    """Nucleons in a distortion cylinder one correlation length long.

    The distortion radius doubles as the displacement of those nucleons.
    """
    n = float(t.nucleon_density * math.pi * t.distortion_radius**2 * p.r_C)
    N = float(t.track_length / p.r_C)
    mode = "small" if t.distortion_radius < p.r_C else "exact"
    return MassConfig(n=n, N=N, ell=t.distortion_radius, ell_mode=mode)


def etched_track_lower_bound(p: CslParams, t: TrackModel = TrackModel()) -> ChannelResult:
    m = track_mass_config(p, t)
    rate = reduction_rate(p, m)
    factor = 1.0 / float(t.criterion_time * rate)
    return ChannelResult(
        channel_id=f"etched_track_{t.equilibrium_criterion}",
        kind="lower",
        lambda_bound=p.lam * factor,
        evaluated_at=p,
        uncertainty_decades=1.5 if t.equilibrium_criterion == "thermal" else 0.5,
        notes="upper estimate of the required enhancement ('or less'); excluded from the combined verdict",
        refs=("etched-track detectors",),
        flags=(FLAG_UPPER_ESTIMATE,),
        observables=(
            Observable("reduction_rate", rate, "s^-1"),
            Observable("n", q(m.n), "1"),
            Observable("N", q(m.N), "1"),
        ),
    )


def vision_estimates(p: CslParams) -> list[ChannelResult]:
    """Reduction in a single rhodopsin flip and across a rod amplification chain.

    Each result's bound is the lambda that makes the reduction time equal to
    the process time (200 fs for the flip, 300 ms for the rod response).
    """
    rhodopsin = MassConfig(n=4e4, N=1, ell=q(4e-7, "cm"), ell_mode="small")
    rod = MassConfig(n=300 * 3000 * 23, N=1)
    out = []
    for cid, m, window in (
        ("vision_rhodopsin", rhodopsin, q(2e-13, "s")),
        ("vision_rod_chain", rod, q(0.3, "s")),
    ):
        rate = reduction_rate(p, m)
        out.append(
            ChannelResult(
                channel_id=cid,
                kind="lower",
                lambda_bound=p.lam / float(rate * window),
                evaluated_at=p,
                notes="estimate only; not a constraint on the parameter plane",
                refs=("visual transduction",),
                observables=(
                    Observable("reduction_rate", rate, "s^-1"),
                    Observable("process_time", window, "s"),
                ),
            )
        )
    return out


def photoreceptor_rate(p: CslParams, ell: Qty, n_at_rc: float = 1e9) -> Qty:
    """Response rate of one detector element of diameter ``ell``.

    Below r_C the displaced nucleon count grows linearly with ``ell`` and the
    small-displacement rate applies; above it the count per correlation
    volume is fixed and the number of groups grows linearly instead.
    """
    if ell.dim != LENGTH or ell.value <= 0:
        raise ValueError("ell must be a positive length")
    x = float(ell / p.r_C)
    if x < 1.0:
        m = MassConfig(n=n_at_rc * x, N=1, ell=ell, ell_mode="small")
    else:
        m = MassConfig(n=n_at_rc, N=x)
    return reduction_rate(p, m)


@dataclass(frozen=True)
class TradeoffExponents:
    rate_exponent: int
    resolution_exponent: int
    at_crossover: bool


def photoreceptor_tradeoff(ell: Qty, r_C: Qty) -> TradeoffExponents:
    """Power-law exponents of response rate and resolution in the element size."""
    if ell.value <= 0:
        raise ValueError("ell must be positive")
    at_crossover = math.isclose(ell.value, r_C.value, rel_tol=1e-9)
    return TradeoffExponents(4 if ell < r_C else 1, -2, at_crossover)

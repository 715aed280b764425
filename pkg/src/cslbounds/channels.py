"""Registry mapping channel ids to evaluators driven by the config ``models`` section."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

from . import lower_channels as lo
from . import upper_channels as up
from .config import load_defaults
from .cslcore import CslParams
from .results import ChannelResult
from .units import CONST, q

Models = dict


class UnknownChannelError(KeyError):
    pass


@dataclass(frozen=True)
class Channel:
    id: str
    sections: tuple[str, ...]
    build: Callable[[CslParams, Models], ChannelResult]


def emulsion_from(m: Models) -> lo.EmulsionModel:
    e = m["photographic"]
    return lo.EmulsionModel(
        atoms_per_speck=e["atoms_per_speck"],
        grains_per_track=e["grains_per_track"],
        grain_diameter=q(e["grain_diameter"], "cm"),
        gelatine_diffusion_range=q(e["gelatine_diffusion_range"], "cm"),
        speck_formation_rate=q(e["speck_formation_rate"], "s^-1"),
        formation_rate_decades=e["formation_rate_decades"],
    )


def _track(m: Models, criterion: str) -> lo.TrackModel:
    t = m["etched_track"]
    return lo.TrackModel(
        distortion_radius=q(t["distortion_radius"], "cm"),
        track_length=q(t["track_length"], "cm"),
        nucleon_density=q(t["nucleon_density"], "cm^-3"),
        equilibrium_criterion=criterion,
        thermal_time=q(t["thermal_time"], "s"),
        chemical_time=q(t["chemical_time"], "s"),
    )


def cosmology_from(m: Models) -> up.Cosmology:
    c = m["cosmology"]
    return up.Cosmology(H0=q(c["H0"], "km/s/Mpc"), Omega_m=c["Omega_m"], Omega_L=c["Omega_L"])


def igm_states(m: Models) -> tuple[up.IgmState, up.IgmState]:
    g = m["igm"]
    high = up.IgmState(z=g["z_high"], T=q(g["T_high"], "K"))
    low = up.IgmState(z=g["z_low"], T=q(10.0 ** g["log10_T_low"], "K"), log10_T_decades=g["log10_T_low_decades"])
    return high, low


def excitation_targets(m: Models) -> dict[str, up.ExcitationTarget]:
    x = m["excitation"]
    supp = up.baryon_selection_suppression(q(x["proton_scale"], "GeV"))
    return {
        "hydrogen": up.with_limit(up.HYDROGEN, 1.0 / q(x["hydrogen_lifetime"], "s")),
        "proton": up.ExcitationTarget(
            "proton_constituent",
            a0=q(1e-13, "cm"),
            constituent_mass=CONST.m_N / 3.0,
            rate_limit=q(x["proton_limit"], "s^-1"),
            selection_suppression=supp,
        ),
        "proton_current": up.ExcitationTarget(
            "proton_current",
            a0=q(1e-13, "cm"),
            constituent_mass=q(10.0, "MeV") / CONST.c**2,
            rate_limit=q(x["proton_limit"], "s^-1"),
            selection_suppression=supp,
        ),
        "germanium": up.ExcitationTarget(
            "germanium_nucleus",
            a0=up.GERMANIUM_NUCLEUS.a0,
            constituent_mass=CONST.m_N,
            rate_limit=q(x["ge_rate_limit"], "keV^-1 kg^-1 day^-1") * q(1.0, "keV"),
            number_density_per_kg=q(x["ge_atoms_per_kg"], "kg^-1"),
        ),
    }


def _radiation(p: CslParams, m: Models, neutralized: bool) -> ChannelResult:
    r, x = m["radiation"], m["excitation"]
    return up.radiation_bound(
        p,
        k_center=q(r["k_center"], "keV"),
        width=q(r["width"], "keV"),
        electrons_per_atom=r["electrons_per_atom"],
        atoms_per_kg=q(x["ge_atoms_per_kg"], "kg^-1"),
        rate_limit=q(x["ge_rate_limit"], "keV^-1 kg^-1 day^-1"),
        neutralized=neutralized,
        a0=q(r["a0"], "cm"),
        v_over_c=r["v_over_c"],
    )


def _rename(result: ChannelResult, cid: str) -> ChannelResult:
    return replace(result, channel_id=cid)


def _excitation(key: str) -> Callable[[CslParams, Models], ChannelResult]:
    def build(p: CslParams, m: Models) -> ChannelResult:
        return _rename(up.excitation_bound(p, excitation_targets(m)[key]), f"excitation_{key}")

    return build


def _fullerene(p, m):
    f = m["fullerene"]
    return up.fullerene_bound(p, n=f["n"], grating=q(f["grating"], "cm"), transit=q(f["transit"], "s"))


def _supercurrent(p, m):
    s = m["supercurrent"]
    return up.supercurrent_bound(p, k_F=q(s["k_F"], "cm^-1"), decay_limit=q(s["decay_limit"], "s^-1"))


def _cmb(p, m):
    c = m["cmb"]
    return up.cmb_budget_bound(
        p,
        photon_per_baryon=c["photon_per_baryon"],
        fraction=c["fraction"],
        photon_energy=q(c["photon_energy"], "eV"),
        age=q(c["age"], "s"),
    )


def _igm_part(which: str) -> Callable[[CslParams, Models], ChannelResult]:
    def build(p: CslParams, m: Models) -> ChannelResult:
        high, low = igm_states(m)
        if which == "high":
            return up.igm_bound(p, cosmology_from(m), high, mode="cooling")
        return up.igm_bound(p, cosmology_from(m), low, mode="accumulated")

    return build


def _igm(p, m):
    high, low = igm_states(m)
    return up.igm_combined_bound(p, cosmology_from(m), high, low)


def _dust(p, m):
    d = m["dust"]
    return up.dust_grain_bound(
        p, T_g=q(d["Tg"], "K"), kappa_prime=d["kappa"], nucleon_density=q(d["nucleon_density"], "cm^-3")
    )


def _planetary(p, m):
    return up.planetary_bound(p, q(m["planetary"]["L_over_M"], "erg g^-1 s^-1"))


def _photographic(p, m):
    return lo.photographic_lower_bound(p, emulsion_from(m), m["photographic"]["expansion"])


CHANNELS: dict[str, Channel] = {
    c.id: c
    for c in (
        Channel("photographic", ("photographic",), _photographic),
        Channel(
            "etched_track_chemical", ("etched_track",), lambda p, m: lo.etched_track_lower_bound(p, _track(m, "chemical"))
        ),
        Channel(
            "etched_track_thermal", ("etched_track",), lambda p, m: lo.etched_track_lower_bound(p, _track(m, "thermal"))
        ),
        Channel("fullerene", ("fullerene",), _fullerene),
        Channel("supercurrent", ("supercurrent",), _supercurrent),
        Channel("excitation_hydrogen", ("excitation",), _excitation("hydrogen")),
        Channel("excitation_proton", ("excitation",), _excitation("proton")),
        Channel("excitation_proton_current", ("excitation",), _excitation("proton_current")),
        Channel("excitation_germanium", ("excitation",), _excitation("germanium")),
        Channel("radiation", ("radiation", "excitation"), lambda p, m: _radiation(p, m, True)),
        Channel("radiation_free", ("radiation", "excitation"), lambda p, m: _radiation(p, m, False)),
        Channel("cmb", ("cmb",), _cmb),
        Channel("igm_z3", ("igm", "cosmology"), _igm_part("high")),
        Channel("igm_z0", ("igm", "cosmology"), _igm_part("low")),
        Channel("igm", ("igm", "cosmology"), _igm),
        Channel("dust", ("dust",), _dust),
        Channel("planetary", ("planetary",), _planetary),
    )
}


def get_channel(cid: str) -> Channel:
    try:
        return CHANNELS[cid]
    except KeyError:
        raise UnknownChannelError(cid) from None


def evaluate(cid: str, p: CslParams, models: Models | None = None) -> ChannelResult:
    models = models if models is not None else load_defaults()["models"]
    return get_channel(cid).build(p, models)


def evaluate_many(cids, p: CslParams, models: Models | None = None) -> list[ChannelResult]:
    models = models if models is not None else load_defaults()["models"]
    return [evaluate(c, p, models) for c in cids]


def is_finite_bound(r: ChannelResult) -> bool:
    return math.isfinite(r.lambda_bound.value)

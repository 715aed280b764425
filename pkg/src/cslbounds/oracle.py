"""Independent numerical recomputation of the closed-form rates.

The rates in ``cslcore`` are closed forms for the Gaussian kernel.  Here the
same quantities are rebuilt from the kernel itself: G(y) by radial
quadrature, its curvature by finite differences, and the off-diagonal decay
by integrating the pure-decoherence master equation on a position grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.integrate import solve_ivp

from . import correlation as corr
from .cslcore import CslParams, MassConfig, heating_rate, reduction_rate
from .quadrature import QuadratureSpec
from .units import CONST, LENGTH, Qty, q

__all__ = [
    "DecayFit",
    "GridSpec",
    "decoherence_rate_from_kernel",
    "heating_from_kernel",
    "grid_decay_fit",
    "oracle_report",
]


def _check_kind(p: CslParams, kind: corr.CorrelationKind) -> None:
    if not math.isclose(kind.r_C.value, p.r_C.value, rel_tol=1e-12):
        raise ValueError("kernel scale differs from the parameter r_C")


def decoherence_rate_from_kernel(
    p: CslParams, kind: corr.CorrelationKind, separation: Qty, spec: QuadratureSpec = corr.CONVOLUTION_SPEC
) -> Qty:
    """gamma [G(0) - G(separation)] with both G values from quadrature."""
    if separation.dim != LENGTH or separation.value < 0:
        raise ValueError("separation must be a non-negative length")
    _check_kind(p, kind)
    if separation.value == 0:
        return 0.0 * p.lam
    g0, _ = corr.self_convolve_numeric(kind, 0.0 * separation, spec)
    gy, _ = corr.self_convolve_numeric(kind, separation, spec)
    return p.gamma * (g0 - gy)


def heating_from_kernel(
    p: CslParams,
    kind: corr.CorrelationKind,
    mass: Qty,
    route: Literal["finite_difference", "gradient"] = "finite_difference",
) -> Qty:
    """(hbar^2 gamma / 2 m_N^2) M (-Laplacian G(0)) with the curvature taken numerically."""
    if mass.value <= 0:
        raise ValueError("mass must be positive")
    _check_kind(p, kind)
    if route == "finite_difference":
        curvature, _ = corr.laplacian_at_origin_fd(kind)
    elif route == "gradient":
        curvature = corr.squared_gradient_integral(kind)
    else:
        raise ValueError(f"unknown route {route!r}")
    return CONST.hbar**2 * p.gamma / (2.0 * CONST.m_N**2) * mass * curvature


@dataclass(frozen=True)
class DecayFit:
    rate: Qty
    r_squared: float
    e_folds: float

    def __post_init__(self):
        if not 0.0 <= self.r_squared <= 1.0:
            raise ValueError("r_squared must lie in [0, 1]")


@dataclass(frozen=True)
class GridSpec:
    """Uniform 1-D grid in units of r_C."""

    start: float = -3.0
    stop: float = 3.0
    num: int = 13

    def __post_init__(self):
        if self.num < 2 or not self.stop > self.start:
            raise ValueError("grid needs at least two increasing points")

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


def _snap(grid: np.ndarray, s: float) -> int:
    i = int(np.argmin(np.abs(grid - s)))
    step = grid[1] - grid[0]
    if abs(grid[i] - s) > 1e-9 * max(1.0, abs(step)):
        raise ValueError(f"position {s:g} r_C is not on the grid")
    return i


def grid_decay_fit(
    p: CslParams,
    kind: corr.CorrelationKind,
    grid: GridSpec = GridSpec(),
    pair: tuple[Qty, Qty] = (q(-1.5e-5, "cm"), q(1.5e-5, "cm")),
    convention: Literal["density_matrix", "variance"] = "density_matrix",
    e_folds: float = 4.0,
    samples: int = 41,
) -> DecayFit:
    """Evolve a grid density matrix under pure decoherence and fit the pair's decay.

    Every element obeys d rho_ab/dt = -c gamma [G(0) - G(x_a - x_b)] rho_ab
    (c = 1, or 2 for the variance convention).  The free Hamiltonian is left
    out since it only rotates phases.  The integration horizon covers
    ``e_folds`` e-foldings of the requested pair.
    """
    _check_kind(p, kind)
    xs = grid.points()
    ia = _snap(xs, float(pair[0] / p.r_C))
    ib = _snap(xs, float(pair[1] / p.r_C))
    scale = {"density_matrix": 1.0, "variance": 2.0}[convention]

    # kernel decay matrix, evaluated once per distinct separation
    seps = np.abs(xs[:, None] - xs[None, :])
    uniq, inv = np.unique(np.round(seps, 12), return_inverse=True)
    g0, _ = corr.self_convolve_numeric(kind, 0.0 * p.r_C)
    rates_u = np.array(
        [0.0 if u == 0 else (p.gamma * (g0 - corr.self_convolve_numeric(kind, u * p.r_C)[0])).value for u in uniq]
    )
    D = scale * rates_u[inv].reshape(seps.shape)

    target = D[ia, ib]
    horizon = e_folds / target if target > 0 else 1.0 / p.lam.value
    psi = np.full(len(xs), 1.0 / math.sqrt(len(xs)))
    rho0 = np.outer(psi, psi).ravel()
    flat = D.ravel()
    t_eval = np.linspace(0.0, horizon, samples)
    sol = solve_ivp(
        lambda t, y: -flat * y,
        (0.0, horizon),
        rho0,
        t_eval=t_eval,
        method="LSODA",
        rtol=1e-11,
        atol=1e-16,
    )
    if not sol.success:
        raise RuntimeError(f"master-equation integration failed: {sol.message}")
    trace = np.abs(sol.y[ia * len(xs) + ib])
    log_r = np.log(trace / trace[0])
    slope, intercept = np.polyfit(sol.t, log_r, 1)
    resid = log_r - (slope * sol.t + intercept)
    ss_tot = float(np.sum((log_r - log_r.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - float(np.sum(resid**2)) / ss_tot)
    achieved = max(0.0, -float(log_r[-1])) + 0.0
    if target > 0 and achieved < 2.0:
        raise RuntimeError(f"only {achieved:.2f} e-folds of decay within the horizon")
    return DecayFit(rate=q(0.0 if slope >= 0 else -float(slope), "s^-1"), r_squared=r2, e_folds=achieved)


def oracle_report(p: CslParams | None = None) -> list[dict]:
    """Closed form versus kernel route for the checks the test suite relies on."""
    p = p or CslParams.standard()
    gauss = corr.gaussian(p.r_C)
    expo = corr.exponential(p.r_C)
    rows = []

    def row(name, oracle_value, reference, tol):
        rel = abs(oracle_value / reference - 1.0) if reference != 0 else abs(oracle_value)
        rows.append(
            {"check": name, "oracle": oracle_value, "reference": reference, "rel_err": rel, "tol": tol, "pass": rel <= tol}
        )

    for s in (0.1, 1.0, 3.0):
        ell = s * p.r_C
        kr = decoherence_rate_from_kernel(p, gauss, ell).value
        cf = reduction_rate(p, MassConfig(n=1, ell=ell, ell_mode="exact")).value
        row(f"gaussian_decoherence_s{s:g}", kr, cf, 1e-5)
    for s in (0.0, 0.5, 1.0, 2.0, 5.0):
        y = s * p.r_C
        num = corr.self_convolve_numeric(expo, y)[0].value
        row(f"exponential_G_s{s:g}", num, corr.self_convolve(expo, y).value, 1e-6)
    row(
        "gaussian_heating",
        heating_from_kernel(p, gauss, CONST.m_N).value,
        heating_rate(p, CONST.m_N).value,
        1e-5,
    )
    row(
        "exponential_curvature",
        corr.laplacian_at_origin_fd(expo)[0].value,
        corr.curvature_at_origin(expo).value,
        1e-5,
    )
    fit = grid_decay_fit(p, gauss, pair=(-1.5 * p.r_C, 1.5 * p.r_C))
    row("grid_decay_gaussian_3rc", fit.rate.value, p.lam.value * -math.expm1(-9.0 / 4.0), 1e-5)
    return rows

"""Noise correlation kernels g(x) and their self-convolution G(y).

Kernels are radial, so everything is carried in the dimensionless radius
``s = |x| / r_C`` with a profile ``p(s)`` normalised as
``4 pi \\int s^2 p(s) ds = 1``; then ``g(x) = p(|x|/r_C) / r_C^3``.

The 3-D convolution is reduced analytically to a single radial integral::

    G(u) = (2 pi / u) \\int_0^inf t p(t) [Q(|u - t|) - Q(u + t)] dt

with the tail function ``Q(s) = \\int_s^inf t p(t) dt``.  Both analytic
kernels have closed-form ``Q``; tabulated profiles use the exact integral of
their piecewise-linear interpolant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from os import PathLike
from typing import Literal

import numpy as np

from .quadrature import QuadratureError, QuadratureSpec, integrate_1d
from .units import LENGTH, Qty

__all__ = [
    "RadialProfile",
    "CorrelationKind",
    "ConvolutionResult",
    "gaussian",
    "exponential",
    "custom",
    "load_profile",
    "eval_g",
    "self_convolve",
    "self_convolve_numeric",
    "curvature_at_origin",
    "laplacian_at_origin_fd",
    "squared_gradient_integral",
    "convolution_summary",
    "small_s_coefficients",
    "TRUNCATION_RADIUS",
]

TRUNCATION_RADIUS = 12.0  # in units of r_C

# default spec for the radial convolution integral, in units of 1/r_C^3;
# G(0) is O(1e-2) for both analytic kernels so this is tighter than 1e-9 G(0)
CONVOLUTION_SPEC = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12, max_depth=400)

_GAUSS_NORM = (2.0 * math.pi) ** -1.5
_EXP_NORM = 1.0 / (8.0 * math.pi)


class RadialProfile:
    """Piecewise-linear radial profile tabulated on ``s = r / r_C``.

    The profile is cut at ``TRUNCATION_RADIUS``; the mass discarded by the
    cut is kept in ``truncated_mass`` (relative to the total).
    """

    def __init__(self, s, values):
        s = np.asarray(s, dtype=float)
        v = np.asarray(values, dtype=float)
        if s.ndim != 1 or s.shape != v.shape or len(s) < 2:
            raise ValueError("profile needs two equal-length 1-D columns with >= 2 rows")
        if s[0] != 0.0 or np.any(np.diff(s) <= 0):
            raise ValueError("profile radii must start at 0 and increase strictly")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValueError("profile values must be finite and non-negative")

        full_mass = self._shell_mass(s, v)
        if full_mass <= 0:
            raise ValueError("profile has zero integral")
        if s[-1] > TRUNCATION_RADIUS:
            cut = np.interp(TRUNCATION_RADIUS, s, v)
            keep = s < TRUNCATION_RADIUS
            s = np.append(s[keep], TRUNCATION_RADIUS)
            v = np.append(v[keep], cut)
        kept = self._shell_mass(s, v)
        self.truncated_mass = (full_mass - kept) / full_mass
        self.s = s
        self.values = v / kept
        self._slopes = np.diff(self.values) / np.diff(self.s)
        # tail integral of t p(t) from each node to the end
        seg = np.array(
            [self._seg_moment1(i, self.s[i], self.s[i + 1]) for i in range(len(self.s) - 1)]
        )
        self._tail_at_node = np.append(np.cumsum(seg[::-1])[::-1], 0.0)

    @staticmethod
    def _shell_mass(s, v) -> float:
        # exact 4 pi \int s^2 f ds for a linear interpolant
        total = 0.0
        for a, b, fa, fb in zip(s[:-1], s[1:], v[:-1], v[1:]):
            m = (fb - fa) / (b - a)
            c0 = fa - m * a
            total += c0 * (b**3 - a**3) / 3.0 + m * (b**4 - a**4) / 4.0
        return 4.0 * math.pi * total

    def _seg_moment1(self, i: int, lo: float, hi: float) -> float:
        m = self._slopes[i]
        c0 = self.values[i] - m * self.s[i]
        return c0 * (hi**2 - lo**2) / 2.0 + m * (hi**3 - lo**3) / 3.0

    @property
    def s_max(self) -> float:
        return float(self.s[-1])

    def __call__(self, t: float) -> float:
        if t >= self.s[-1]:
            return 0.0
        return float(np.interp(t, self.s, self.values))

    def derivative(self, t: float) -> float:
        if t >= self.s[-1]:
            return 0.0
        i = min(int(np.searchsorted(self.s, t, side="right")) - 1, len(self._slopes) - 1)
        return float(self._slopes[i])

    def tail(self, t: float) -> float:
        if t >= self.s[-1]:
            return 0.0
        i = int(np.searchsorted(self.s, t, side="right")) - 1
        return float(self._seg_moment1(i, t, self.s[i + 1]) + self._tail_at_node[i + 1])


@dataclass(frozen=True)
class CorrelationKind:
    variant: Literal["gaussian", "exponential", "custom"]
    r_C: Qty
    profile: RadialProfile | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.variant not in ("gaussian", "exponential", "custom"):
            raise ValueError(f"unknown kernel variant {self.variant!r}")
        if self.r_C.dim != LENGTH:
            raise ValueError("r_C must be a length")
        if self.r_C.value <= 0:
            raise ValueError("r_C must be positive")
        if (self.variant == "custom") != (self.profile is not None):
            raise ValueError("a tabulated profile is required for, and only for, custom kernels")

    # dimensionless profile pieces
    def p(self, t: float) -> float:
        if self.variant == "gaussian":
            return _GAUSS_NORM * math.exp(-0.5 * t * t)
        if self.variant == "exponential":
            return _EXP_NORM * math.exp(-t)
        return self.profile(t)

    def dp(self, t: float) -> float:
        if self.variant == "gaussian":
            return -t * _GAUSS_NORM * math.exp(-0.5 * t * t)
        if self.variant == "exponential":
            return -_EXP_NORM * math.exp(-t)
        return self.profile.derivative(t)

    def tail(self, t: float) -> float:
        if self.variant == "gaussian":
            return _GAUSS_NORM * math.exp(-0.5 * t * t)
        if self.variant == "exponential":
            return _EXP_NORM * (1.0 + t) * math.exp(-t)
        return self.profile.tail(t)

    @property
    def support(self) -> float:
        if self.variant == "custom":
            return self.profile.s_max
        return 40.0 if self.variant == "gaussian" else 80.0

    def knots(self) -> list[float]:
        return [] if self.variant != "custom" else list(self.profile.s)


@dataclass(frozen=True)
class ConvolutionResult:
    G0: Qty
    curvature: Qty
    samples: list[tuple[float, float]]


def gaussian(r_C: Qty) -> CorrelationKind:
    return CorrelationKind("gaussian", r_C)


def exponential(r_C: Qty) -> CorrelationKind:
    return CorrelationKind("exponential", r_C)


def custom(r_C: Qty, s, values) -> CorrelationKind:
    return CorrelationKind("custom", r_C, RadialProfile(s, values))


def load_profile(path: str | PathLike, r_C: Qty) -> CorrelationKind:
    """Load a two-column text file (radius / r_C, profile value)."""
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns, found {data.shape[1]}")
    return custom(r_C, data[:, 0], data[:, 1])


def _check_len(x: Qty) -> None:
    if x.dim != LENGTH:
        raise ValueError(f"expected a length, got {x.dim}")


def eval_g(kind: CorrelationKind, x: Qty) -> Qty:
    _check_len(x)
    r = kind.r_C
    return kind.p(abs(x.value) / r.value) / r**3


def _g_hat_closed(kind: CorrelationKind, u: float) -> float:
    if kind.variant == "gaussian":
        return (4.0 * math.pi) ** -1.5 * math.exp(-0.25 * u * u)
    if kind.variant == "exponential":
        return (1.0 + u + u * u / 3.0) * math.exp(-u) / (64.0 * math.pi)
    raise ValueError("no closed form for tabulated kernels")


def _g_hat_numeric(kind: CorrelationKind, u: float, spec: QuadratureSpec) -> tuple[float, float]:
    u = abs(u)
    end = kind.support
    if u == 0.0:
        return integrate_1d(lambda t: 4.0 * math.pi * t * t * kind.p(t) ** 2, 0.0, end, spec, kind.knots())

    def integrand(t: float) -> float:
        return t * kind.p(t) * (kind.tail(abs(u - t)) - kind.tail(u + t))

    pts = [u] + kind.knots() + [abs(k - u) for k in kind.knots()]
    val, err = integrate_1d(integrand, 0.0, end, spec, pts)
    pref = 2.0 * math.pi / u
    return pref * val, pref * err


def self_convolve(kind: CorrelationKind, y: Qty) -> Qty:
    """G(y) in cm^-3: closed form for the analytic kernels, quadrature otherwise."""
    _check_len(y)
    u = abs(y.value) / kind.r_C.value
    if kind.variant == "custom":
        val, _ = _g_hat_numeric(kind, u, CONVOLUTION_SPEC)
    else:
        val = _g_hat_closed(kind, u)
    return val / kind.r_C**3


def self_convolve_numeric(
    kind: CorrelationKind, y: Qty, spec: QuadratureSpec = CONVOLUTION_SPEC
) -> tuple[Qty, Qty]:
    """G(y) by radial quadrature regardless of kernel; returns ``(G, error_estimate)``."""
    _check_len(y)
    val, err = _g_hat_numeric(kind, abs(y.value) / kind.r_C.value, spec)
    return val / kind.r_C**3, err / kind.r_C**3


def laplacian_at_origin_fd(
    kind: CorrelationKind,
    spec: QuadratureSpec = CONVOLUTION_SPEC,
    steps: tuple[float, ...] = (0.2, 0.1, 0.05, 0.025),
) -> tuple[Qty, Qty]:
    """-Laplacian of G at the origin from numerically convolved values.

    Second differences ``D(h) = 2 (G(h) - G(0)) / h^2`` are combined by
    Richardson extrapolation on successive halvings of ``h``; the step pair
    whose extrapolants agree best is kept and their spread is returned as the
    error estimate.
    """
    g0, _ = _g_hat_numeric(kind, 0.0, spec)
    d = [2.0 * (_g_hat_numeric(kind, h, spec)[0] - g0) / (h * h) for h in steps]
    rich = [(4.0 * d[i + 1] - d[i]) / 3.0 for i in range(len(d) - 1)]
    best_i = min(range(len(rich) - 1), key=lambda i: abs(rich[i + 1] - rich[i]))
    second = rich[best_i + 1]
    err = abs(rich[best_i + 1] - rich[best_i])
    if not math.isfinite(second) or second >= 0:
        raise QuadratureError("finite-difference Laplacian failed", second, err)
    # radial function: Laplacian at 0 equals 3 G''(0)
    r5 = kind.r_C**5
    return (-3.0 * second) / r5, (3.0 * err) / r5


def curvature_at_origin(kind: CorrelationKind) -> Qty:
    """-Laplacian of G at the origin, cm^-5."""
    r = kind.r_C
    if kind.variant == "gaussian":
        # (3 / 2 r_C^2) * G(0)
        return 1.5 * (4.0 * math.pi) ** -1.5 / r**5
    if kind.variant == "exponential":
        # G/G(0) = 1 - s^2/6 + ...  =>  -Lap G(0) = G(0) / r_C^2
        return 1.0 / (64.0 * math.pi) / r**5
    return laplacian_at_origin_fd(kind)[0]


def squared_gradient_integral(kind: CorrelationKind, spec: QuadratureSpec = CONVOLUTION_SPEC) -> Qty:
    """\\int |grad g|^2 d^3x by radial quadrature (equals curvature_at_origin)."""
    val, _ = integrate_1d(
        lambda t: 4.0 * math.pi * t * t * kind.dp(t) ** 2, 0.0, kind.support, spec, kind.knots()
    )
    return val / kind.r_C**5


def convolution_summary(kind: CorrelationKind, s_values=(0.0, 0.5, 1.0, 2.0, 5.0)) -> ConvolutionResult:
    r = kind.r_C
    samples = []
    for s in s_values:
        g = self_convolve(kind, s * r)
        samples.append((float(s), (g * r**3).value))
    return ConvolutionResult(
        G0=self_convolve(kind, 0.0 * r),
        curvature=curvature_at_origin(kind),
        samples=samples,
    )


def small_s_coefficients(
    kind: CorrelationKind, s_max: float = 0.3, degree: int = 6, samples: int = 61
) -> np.ndarray:
    """Power-series coefficients of G(s)/G(0) fitted on [0, s_max] from quadrature values.

    Index k holds the s^k coefficient.  Radial kernels give no s^1 term and
    the Gaussian none of odd order at all.
    """
    if degree < 3 or samples <= degree:
        raise ValueError("need degree >= 3 and more samples than the degree")
    s = np.linspace(0.0, s_max, samples)
    g = np.array([_g_hat_numeric(kind, float(u), CONVOLUTION_SPEC)[0] for u in s])
    fit = np.polynomial.Polynomial.fit(s, g / g[0], degree)
    return fit.convert().coef

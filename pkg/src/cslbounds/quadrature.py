"""Adaptive quadrature with an explicit, enforced error contract."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy import integrate


class QuadratureError(RuntimeError):
    def __init__(self, message: str, value: float, error: float):
        super().__init__(f"{message} (value={value:.6g}, achieved error={error:.3g})")
        self.value = value
        self.error = error


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_depth: int = 200

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")

    def allowed(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


def integrate_1d(
    fn: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = QuadratureSpec(),
    points: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Integrate ``fn`` over [a, b] and return ``(value, error_estimate)``.

    Raises QuadratureError if the achieved error exceeds the requested tolerance.
    """
    kwargs = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_depth)
    if points is not None and math.isinf(b):
        # QUADPACK takes break points on finite ranges only
        pts = sorted(p for p in points if a < p)
        if pts:
            head, e1 = integrate_1d(fn, a, pts[-1], spec, pts[:-1])
            tail, e2 = integrate_1d(fn, pts[-1], b, spec)
            return head + tail, e1 + e2
    if points is not None:
        pts = sorted(p for p in points if a < p < b)
        if pts:
            kwargs["points"] = pts
            kwargs["limit"] = max(spec.max_depth, 4 * len(pts) + 50)
    # QUADPACK warnings are replaced by the explicit error check below
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(fn, a, b, **kwargs)
    if not err <= spec.allowed(value):
        raise QuadratureError("quadrature did not reach requested tolerance", value, err)
    return value, err

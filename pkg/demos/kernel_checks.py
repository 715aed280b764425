"""Closed-form rates against the kernel computed numerically.

The decoherence rate, the heating rate and the decay of a density-matrix
element are all recomputed from the noise correlation function itself, for
the Gaussian kernel and for an exponential alternative.
"""

import math

from cslbounds import correlation as corr
from cslbounds import oracle as orc
from cslbounds.cslcore import CslParams, MassConfig, heating_rate, reduction_rate
from cslbounds.units import CONST

p = CslParams.standard()
gauss, expo = corr.gaussian(p.r_C), corr.exponential(p.r_C)

print("decoherence rate, kernel route versus closed form")
for s in (0.1, 0.5, 1.0, 2.0, 3.0):
    ell = s * p.r_C
    k = orc.decoherence_rate_from_kernel(p, gauss, ell).value
    c = reduction_rate(p, MassConfig(n=1, ell=ell, ell_mode="exact")).value
    e = orc.decoherence_rate_from_kernel(p, expo, ell).value
    print(f"  l/r_C={s:4.1f}  gaussian {k:.6e} vs {c:.6e} (rel {abs(k / c - 1):.1e})   exponential {e:.4e}")

h_closed = heating_rate(p, CONST.m_N)
h_gauss = orc.heating_from_kernel(p, gauss, CONST.m_N)
h_expo = orc.heating_from_kernel(p, expo, CONST.m_N)
print(f"\nproton heating: closed form {h_closed.to('eV/s'):.4e} eV/s, kernel {h_gauss.to('eV/s'):.4e} eV/s")
print(f"exponential kernel at the same gamma: {h_expo.to('eV/s'):.4e} eV/s")

# normalised to the same zero-separation rate the exponential kernel heats less
ratio = float(
    (corr.curvature_at_origin(expo) / corr.self_convolve(expo, 0 * p.r_C))
    / (corr.curvature_at_origin(gauss) / corr.self_convolve(gauss, 0 * p.r_C))
)
print(f"curvature ratio at equal G(0): {ratio:.4f}")

for name, kind in (("gaussian", gauss), ("exponential", expo)):
    c = corr.small_s_coefficients(kind)
    print(f"{name:12s} small-s fit: s^1 {c[1]:+.1e}, s^2 {c[2]:+.4f}, s^3 {c[3]:+.1e}")

fit = orc.grid_decay_fit(p, gauss)
target = p.lam.value * -math.expm1(-9 / 4)
print(f"\ngrid master equation, pair 3 r_C apart: fitted {fit.rate.value:.6e} s^-1, expected {target:.6e}")
print(f"r^2 = {fit.r_squared:.8f} over {fit.e_folds:.1f} e-folds")

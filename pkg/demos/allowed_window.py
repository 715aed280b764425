"""Where is lambda still allowed?

Scans lambda at a few fixed r_C values and prints the window left open
between the latent-image lower bounds and the heating upper bounds, then
marks where the two enhanced parameter choices sit.
"""

from cslbounds.channels import evaluate
from cslbounds.config import GridConfig, load_defaults
from cslbounds.projections import CASE_I, CASE_II
from cslbounds.scan import COMBINED, Verdict, scan

d = load_defaults()
grid = GridConfig(1e-18, 1e-2, 97, 1e-6, 1e-3, 7)
g = scan(d["channels"], grid, d["models"], workers=4)

print(f"{'r_C cm':>10s}  allowed lambda window (s^-1)")
for j, rc in enumerate(g.rc_axis):
    w = g.allowed_window(j)
    text = "none" if w is None else f"{w[0]:.2e} .. {w[1]:.2e}"
    print(f"{rc.value:10.2e}  {text}")

# a coarse picture of the combined verdict, lambda increasing to the right
symbol = {Verdict.ALLOWED: ".", Verdict.EXCLUDED: "#", Verdict.LOWER_BOUND_UNMET: "-", Verdict.FLAGGED: "?"}
print("\n'-' lower bound unmet, '.' allowed, '#' excluded")
for j in reversed(range(len(g.rc_axis))):
    row = "".join(symbol[v] for v in g.column(j, COMBINED))
    print(f"{g.rc_axis[j].value:8.1e} {row}")

# the grid only resolves the edges to one step; compare with the channel edges directly
print()
for pc in (CASE_I, CASE_II):
    p = pc.params
    photo = evaluate("photographic", p)
    lower_edge = photo.lambda_bound.value / 10**photo.uncertainty_decades
    upper_edge = evaluate("igm", p).lambda_bound.value
    print(
        f"{pc.label}: lambda {p.lam.value:.1e} at r_C {p.r_C.value:.0e}; "
        f"latent-image edge {lower_edge:.2e}, IGM bound {upper_edge:.2e}, "
        f"lambda / lower edge = {p.lam.value / lower_edge:.2f}"
    )

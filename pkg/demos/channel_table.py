"""Evaluate every registered channel at a parameter point and print the bounds.

    python3 demos/channel_table.py            # standard parameters
    python3 demos/channel_table.py case1
"""

import sys

from cslbounds.channels import CHANNELS, evaluate
from cslbounds.projections import case


def main(label="standard"):
    p = case(label).params
    print(f"lambda = {p.lam.value:.3g} s^-1, r_C = {p.r_C.value:.3g} cm\n")
    print(f"{'channel':28s} {'kind':6s} {'bound s^-1':>12s} {'x standard':>12s}  flags")
    for cid in CHANNELS:
        r = evaluate(cid, p)
        print(
            f"{cid:28s} {r.kind:6s} {r.lambda_bound.value:12.3e} {r.multiplier_vs_standard:12.3e}  "
            + ",".join(r.flags)
        )

    # lower bounds above the tightest combining upper bound would leave no room
    uppers = [evaluate(c, p) for c in CHANNELS]
    tight = min((r for r in uppers if r.kind == "upper" and r.combines), key=lambda r: r.lambda_bound.value)
    print(f"\ntightest combining upper bound: {tight.channel_id} at {tight.lambda_bound.value:.3e} s^-1")


if __name__ == "__main__":
    main(*sys.argv[1:2])

"""Build a few designs, check their group structure and save one to disk.

    python3 demos/build_and_check.py [outdir]
"""
import sys
from pathlib import Path

from stbclab import (build_ag, build_fgd, detect_groups, load, puncture_fgd, save, stack_phi,
                     verify_design)

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")

# two-group code for six antennas: 20 real symbols in two groups of 10
d = build_ag(2, 6)
print(d)
print(verify_design(d).summary())

# the group structure is recoverable from the weights alone
print("detected groups:", detect_groups(d).sizes)

# three groups on 12 antennas, then folded into a tall 12 x 4 design
d3 = build_ag(3, 12)
tall = stack_phi(d3, 3)
print(f"{d3.name}: rate {d3.rate};  stacked: {tall.T}x{tall.N}, rate {tall.rate}")

# fast-group-decodable design for four antennas, punctured down to rate 1
f = build_fgd(4)
for R in ("5/4", "9/8", "1"):
    p = f if R == "5/4" else puncture_fgd(f, R)
    rep = verify_design(p)
    print(f"fgd N=4 R={R:>3}: K={p.K:2d} groups={p.groups.sizes} passed={rep.passed}")

path = out / "ag_2_6.json"
save(d, path)
back = load(path)
assert (back.weights == d.weights).all() and back.groups == d.groups
print("round trip ok:", path)

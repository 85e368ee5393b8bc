"""Least ML-decoding exponent over the base families, for N = 2..10.

For each (N, R) the script picks the base design that gives the cheapest
rate-R code and prints the exponent of M with the winning family, then
builds one cell explicitly and re-derives its cost from the design.

    python3 demos/complexity_grid.py
"""
from fractions import Fraction

from stbclab import build_fd, design_profile, exponent_for, select_base
from stbclab.tables import reproduce_tables

print(reproduce_tables((2,))["table2"]["text"])

# one cell by hand: six antennas at rate 2
cand, prof = select_base(6, 2)
print(prof.describe())
code = build_fd(cand.design, 2)
print("from the built design:", design_profile(code).exponent)

# how the alternatives compare at the same point
for fam in ("F_FGD", "F_DAST", "F_2AG"):
    print(f"  {fam:7s} -> M^{float(exponent_for(fam, 6, 2).exponent):g}")

# larger arrays at the lowest listed rate
for N in (16, 32, 64):
    c, p = select_base(N, Fraction(5, 4), build=False)
    print(f"N={N:2d} R=5/4: M^{float(p.exponent):g} via {c.family}")

"""BER of the 2x1 orthogonal code against an uncoded single antenna.

Both use 4-QAM (two 2-PAM symbols per complex entry).  The steeper slope
of the coded curve at high SNR is the second order of diversity.

    python3 demos/ber_alamouti.py [trials]
"""
import math
import sys

from stbclab import PamSpec, SimConfig, ber_curve, build_fgd, preset
from stbclab.sim import uncoded_design

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
grid = tuple(range(0, 21, 4))

ala = ber_curve(SimConfig(preset("alamouti"), PamSpec.uniform(4, 2), 1, grid, trials), workers=2)
unc = ber_curve(SimConfig(uncoded_design(), PamSpec.uniform(2, 2), 1, grid, 2 * trials), workers=2)

print(" SNR   2x1 code     uncoded")
for a, u in zip(ala, unc):
    print(f"{a.snr_db:4g}   {a.ber:.3e}   {u.ber:.3e}")


def decade_slope(pts):
    return (math.log10(pts[-1].ber) - math.log10(pts[-2].ber)) / (pts[-1].snr_db - pts[-2].snr_db) * 10


print(f"slope over the last step: coded {decade_slope(ala):.2f}, uncoded {decade_slope(unc):.2f} decades/10 dB")

# a fast-group-decodable code through the structured decoder
f = build_fgd(2)
pts = ber_curve(SimConfig(f, PamSpec(2, d=(1, 1, 1, 1, 2)), 1, (5, 10, 15), trials // 4))
print("fgd N=2:", ", ".join(f"{p.snr_db:g} dB {p.ber:.2e}" for p in pts))

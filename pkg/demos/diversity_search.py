"""Pick PAM spacings so that a design reaches full diversity.

Every nonzero codeword difference must be full rank.  The search fixes
the spacing of one symbol at a time and certifies the final choice by
enumerating all differences.

    python3 demos/diversity_search.py
"""
from stbclab import PamSpec, build_ag, build_fgd, find_scalings, is_fully_diverse, preset, stack_phi

ciod = preset("ciod2")
for Q in (2, 4):
    s = is_fully_diverse(ciod, PamSpec.uniform(ciod.K, Q))
    print(f"ciod2 Q={Q}: {s.total_diffs} differences, verified={s.verified}, min |det| {s.min_abs_det:.3g}")

f = build_fgd(2)
bare = is_fully_diverse(f, PamSpec.uniform(f.K, 2))
print("fgd N=2 with unit spacings: verified =", bare.verified, "first failure", bare.first_failure)
spec = find_scalings(f, 2)
print("  spacings found:", spec.d)

# a tall design uses det(dC^H dC) instead of det(dC)
tall = stack_phi(build_ag(2, 4), 2)
spec = find_scalings(tall, 2)
print(f"stacked {tall.T}x{tall.N}: spacings {spec.d}")

# the sampled mode never certifies, but scales to larger codebooks
big = build_ag(2, 6)
s = is_fully_diverse(big, PamSpec.uniform(big.K, 2), "sampled", n_samples=20000, seed=1)
print(f"ag 2x6 sampled: {s.total_diffs} draws, no failure = {s.verified}, certifying = {s.certifying}")

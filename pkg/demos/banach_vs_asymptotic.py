"""A set of zero asymptotic density whose upper Banach density is 1.

E is the union of the blocks [2^j, 2^j + j).  Centered windows see a vanishing
fraction of it while the best-placed window of length L sits inside a block.
"""
from fractions import Fraction

from meanlab.density import asymptotic_density, banach_upper_density
from meanlab.dsl import parse_set
from meanlab.group import CenteredBoxes

E = parse_set("blocks(j=1..inf: 2^j, j)")

print("centered box ratios |E cap [-n, n]| / (2n+1)")
asym = asymptotic_density(E, CenteredBoxes(1), [2**k for k in range(4, 15, 2)])
for n, r in asym.ratios:
    print(f"  n = {n:>6}  {str(r):>10}  ~ {float(r):.5f}")

print("windowed upper Banach density")
for L in (4, 8, 12):
    est = banach_upper_density(E, n=L, radius=2**13)
    print(f"  windows up to {L:>2}: [{est.lower}, {est.upper}]  best window {est.params.get('lower_window')}")

assert asym.ratios[-1][1] < Fraction(1, 100)

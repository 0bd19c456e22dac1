"""
Direct-space cross-check
========================

Everything the closed forms predict can be measured on an actual sieved
segment of the k-free integers: the density tends to 1/zeta(k), the
scattering amplitude at a rational frequency reproduces the peak intensity,
and irrational frequencies carry no peak at all.  None of the estimators
below use the spectral formulas, so agreement is a genuine cross-check.
"""

import math
from fractions import Fraction

import kfree

k = 2
n = 10**6
patch = kfree.generate_patch(k, n)
params = kfree.KFreeParams.for_k(k)
tables = kfree.build_sieve(1000)

dens = kfree.density(patch)
print(f"density of the {k}-free integers in [1..{n}]: {dens:.8f}")
print(f"1/zeta({k})                                = {1 / params.zeta_k:.8f}\n")

# Pair frequencies: eta[0] is the density; no distance is more frequent.
freqs = kfree.pair_frequencies(patch, 10)
print("pair frequencies eta[m], m = 0..10:")
print("  " + "  ".join(f"{v:.4f}" for v in freqs.eta) + "\n")

# Empirical vs closed-form peak intensities at a few rational frequencies.
print(f"{'z':>6}  {'empirical':>12}  {'closed form':>12}")
for z in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(2, 9)):
    emp = kfree.empirical_intensity(patch, z)
    closed = kfree.intensity(z.numerator, z.denominator, params, tables)
    print(f"{str(z):>6}  {emp:>12.6f}  {closed:>12.6f}")

# Off the rational support nothing survives the averaging.
golden = (math.sqrt(5) - 1) / 2
print(f"\nempirical intensity at z = {golden:.6f} (irrational): "
      f"{kfree.empirical_intensity(patch, golden):.2e}")

"""
Diffraction peaks of the k-free integers
========================================

The square-free integers (k = 2) diffract onto a dense set of rational
frequencies: every z = m/q in lowest terms with cube-free q carries a Bragg
peak of intensity (f_k(q)/zeta(k))^2, where f_k(q) multiplies 1/(p^k - 1)
over the primes dividing q.  This script enumerates the peaks in a window
and shows the two structural facts that make the spectrum easy to tabulate:
the intensity depends only on the denominator, and peaks come in layers by
radical.
"""

from fractions import Fraction

import kfree

k = 2
tables = kfree.build_sieve(1000)
params = kfree.KFreeParams.for_k(k)

# All peaks in (0, 1/2] with denominator up to 12, brightest first.
window = kfree.enumerate_support(params, 0, Fraction(1, 2), 12, tables)
print(f"peaks in (0, 1/2] with q <= 12 (k = {k}):")
for pt in sorted(window.points, key=lambda p: -p.intensity):
    print(f"  z = {str(pt.z):>5}   q = {pt.q:>2}   intensity = {pt.intensity:.6f}")
print(f"every omitted peak has intensity < {window.omitted_intensity_bound:.2e}\n")

# The intensity at z = m/q is independent of m: 1/4 and 3/4 carry equal peaks.
i14 = kfree.intensity(1, 4, params, tables)
i34 = kfree.intensity(3, 4, params, tables)
print(f"I(1/4) = {i14:.8f}")
print(f"I(3/4) = {i34:.8f}   (identical: intensity depends only on q)\n")

# Denominators sharing a radical share a peak height: f_k(q) = f_k(rad(q)).
for q in (6, 12, 18, 36):
    w = kfree.f_k(q, params, tables)
    print(f"f_{k}({q:>2}) = {w}   rad = {kfree.radical(q, tables)}")
print()

# The central peak at z = 0 has intensity 1/zeta(k)^2, the squared density.
print(f"I(0) = {kfree.intensity(0, 1, params, tables):.8f} = (1/zeta({k}))^2")

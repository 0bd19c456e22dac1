"""
Numerical verification of the supporting inequalities
=====================================================

The truncation control behind the Z_k evaluator rests on a handful of
elementary facts: strict bounds on the peak weight, a counting bound for the
two-parameter totient, its radical-reduction identity, the asymptotics of
squarefree tail sums, and the eventual smallness of d(q) d(q^(k-1)) against
q^eps.  Each is checked here over explicit ranges, exactly where possible.
"""

from fractions import Fraction

import kfree

tables = kfree.build_sieve(10**5)

# Strict peak-weight bounds 1/r^k < f_k(q) < zeta(k)/r^k (r the radical).
for k in (2, 3, 4):
    report = kfree.verify_fk_bounds(k, 10**5, tables)
    print(f"peak-weight bounds, k={k}, q <= 1e5: "
          f"{len(report.violations)} violations in {report.checked} values"
          f" (q=1 sits on the lower bound and is excluded)")

# |phi(x,q) - x phi(q)| <= d(q) for squarefree q, exact rational comparison.
grid = [Fraction(1, 7), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(9, 10)]
approx = kfree.verify_phi_approx(10**4, grid, tables)
print(f"totient counting bound: {approx.checked} checks, {len(approx.failures)} failures")

# phi(x, q) = phi(l x, rad(q)) with l = q / rad(q), on random samples.
samples = kfree.random_phi_samples(2, 10**4, 10**4, tables, seed=0)
ident = kfree.verify_phi_identity(samples, 2, tables)
print(f"totient radical reduction: {ident.checked} samples, {len(ident.failures)} failures")

# Tail sums of mu(q)^2/q^k against y^(k-1)/((k-1) zeta(2)): ratio -> 1 like
# 1 + O(sqrt(y)).
report = kfree.verify_mu_tail(2, [Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000)], tables)
print("squarefree tail sums (k=2):")
for row in report.rows:
    print(f"  y = {row.y:.0e}: ratio = {row.ratio:.5f}, |ratio-1|/sqrt(y) = {row.c_point:.3f},"
          f" truncated at {row.truncated_at:.0e}")

# d(q) d(q^(k-1)) <= q^eps holds for q large enough; the threshold is finite
# and visible.
for eps in (0.9, 0.5, 0.3):
    div = kfree.divisor_bound_threshold(2, eps, 10**5, tables)
    print(f"divisor bound eps={eps}: {div.violation_count} violations,"
          f" largest at q = {div.largest_violation}")

"""Brute-force statistics from actual k-free point sets.

Everything here works on a sieved finite segment [1..N] of the k-free
integers (the full set is reflection symmetric, so one-sided segments give
the same densities and pair frequencies as centred intervals).  These
estimators are deliberately independent of the closed-form spectral formulas
so they can serve as cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import CapacityError

MAX_PATCH_SIZE = 1 << 27

# Largest denominator for which the exact residue-class path is worthwhile;
# beyond this the root-of-unity table dwarfs the patch and double precision
# phase reduction is used instead.
_EXACT_DENOMINATOR_CAP = 1 << 20


def _primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


@dataclass(frozen=True)
class Patch:
    """Membership data for the k-free integers in [1..N]."""

    k: int
    size: int
    membership: np.ndarray  # bool, index 0 unused
    count: int

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.membership)


@dataclass(frozen=True)
class PairFrequencies:
    """Empirical pair frequencies eta[m] for distances 0..m_max."""

    m_max: int
    eta: np.ndarray


def generate_patch(k: int, size: int) -> Patch:
    """Sieve the k-free integers in [1..size] by striking p^k multiples."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if size < 1:
        raise ValueError("size must be >= 1")
    if size > MAX_PATCH_SIZE:
        raise CapacityError(f"patch size {size} exceeds ceiling {MAX_PATCH_SIZE}")
    membership = np.ones(size + 1, dtype=bool)
    membership[0] = False
    for p in _primes_upto(int(round(size ** (1.0 / k))) + 1):
        pk = int(p) ** k
        if pk <= size:
            membership[pk::pk] = False
    membership.flags.writeable = False
    return Patch(k=k, size=size, membership=membership, count=int(membership.sum()))


def density(patch: Patch) -> float:
    """Fraction of [1..N] in the patch; tends to 1/zeta(k)."""
    return patch.count / patch.size


def pair_frequencies(patch: Patch, m_max: int) -> PairFrequencies:
    """eta[m] = (1/N) #{n : n and n+m both k-free, n+m <= N} for m = 0..m_max."""
    if not 0 <= m_max < patch.size:
        raise ValueError("m_max must satisfy 0 <= m_max < patch size")
    memb = patch.membership
    n = patch.size
    eta = np.empty(m_max + 1, dtype=np.float64)
    eta[0] = patch.count / n
    for m in range(1, m_max + 1):
        eta[m] = np.count_nonzero(memb[1 : n - m + 1] & memb[1 + m : n + 1]) / n
    eta.flags.writeable = False
    return PairFrequencies(m_max=m_max, eta=eta)


def empirical_intensity(patch: Patch, z) -> float:
    """Scattering amplitude estimator |(1/N) sum_{n in patch} e^(-2 pi i z n)|^2.

    For rational z = a/b (b below a size cap) the phases n*a are reduced mod b
    in integer arithmetic and the sum is taken over residue-class counts
    against a b-entry table of roots of unity, which makes the evaluation
    exact in phase.  Other z use double-precision reduction of z*n mod 1.
    """
    n_values = patch.members()
    size = patch.size
    if isinstance(z, (int, Fraction)) and Fraction(z).denominator <= _EXACT_DENOMINATOR_CAP:
        z = Fraction(z)
        a, b = z.numerator % z.denominator, z.denominator
        residues = (n_values * a) % b
        counts = np.bincount(residues, minlength=b)
        roots = np.exp(-2j * np.pi * np.arange(b) / b)
        amplitude = counts @ roots
    else:
        phases = (float(z) * n_values) % 1.0
        amplitude = np.exp(-2j * np.pi * phases).sum()
    # |S/N|^2 without an intermediate square root, so the z = 0 value reduces
    # to (count/N)^2 bit-exactly
    re = float(amplitude.real) / size
    im = float(amplitude.imag) / size
    return re * re + im * im

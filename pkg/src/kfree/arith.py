"""Exact arithmetic-function infrastructure.

Sieve tables (smallest prime factor, Mobius, radical), multiplicative
functions, the two-parameter totient

    phi(x, q) = #{1 <= m <= q*x : gcd(m, q) = 1},

squarefree counting, and zeta(k) with a certified error bound.  All exact
operations work in Python integers / fractions; the sieve itself is built by
a compiled linear pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels

# Hard ceiling on table size: 2^27 entries is ~1.2 GB across the three arrays.
MAX_SIEVE_LIMIT = 1 << 27


class CapacityError(Exception):
    """A requested computation exceeds the configured memory/size budget."""


@dataclass(frozen=True)
class SieveTables:
    """Immutable per-integer arithmetic data for 1..limit.

    spf[n] is the smallest prime factor (spf[1] = 1), mu[n] the Mobius value,
    rad[n] the radical (largest squarefree divisor).  Arrays are read-only and
    safe for concurrent use.
    """

    limit: int
    spf: np.ndarray
    mu: np.ndarray
    rad: np.ndarray
    _fk2_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def check_range(self, n: int) -> None:
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside sieve range [1, {self.limit}]")


def build_sieve(limit: int, max_limit: int = MAX_SIEVE_LIMIT) -> SieveTables:
    """Build SieveTables up to `limit` with a single linear pass."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if limit > max_limit:
        raise CapacityError(f"sieve limit {limit} exceeds ceiling {max_limit}")
    spf, mu, rad = _kernels.fill_sieve(limit)
    for arr in (spf, mu, rad):
        arr.flags.writeable = False
    return SieveTables(limit=limit, spf=spf, mu=mu, rad=rad)


def factorize(n: int, tables: SieveTables) -> list[tuple[int, int]]:
    """Prime factorization [(p, e), ...] via repeated smallest-prime-factor lookup."""
    tables.check_range(n)
    out = []
    spf = tables.spf
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def distinct_primes(n: int, tables: SieveTables) -> list[int]:
    """Distinct prime divisors of n, ascending."""
    return [p for p, _ in factorize(n, tables)]


def radical(n: int, tables: SieveTables) -> int:
    """Largest squarefree divisor of n."""
    tables.check_range(n)
    return int(tables.rad[n])


def euler_phi(n: int, tables: SieveTables) -> int:
    """Euler totient, exact: n * prod_{p|n} (1 - 1/p)."""
    out = 1
    for p, e in factorize(n, tables):
        out *= p ** (e - 1) * (p - 1)
    return out


def divisor_count(n: int, tables: SieveTables) -> int:
    """Number of positive divisors d(n) = prod (e_i + 1)."""
    out = 1
    for _, e in factorize(n, tables):
        out *= e + 1
    return out


def divisor_count_of_power(qbar: int, e: int, tables: SieveTables) -> int:
    """d(qbar^e) = (e+1)^omega(qbar) for squarefree qbar, without forming qbar^e."""
    tables.check_range(qbar)
    if e < 1:
        raise ValueError("exponent must be >= 1")
    if tables.mu[qbar] == 0:
        raise ValueError(f"qbar={qbar} is not squarefree")
    return (e + 1) ** len(distinct_primes(qbar, tables))

def sigma_of_radical_power(qbar: int, k: int, tables: SieveTables) -> int:
    """Divisor sum sigma(qbar^(k-1)) = prod_{p|qbar} (p^k - 1)/(p - 1), exact.

    Works in arbitrary-precision integers; qbar^(k-1) itself is never formed.
    """
    tables.check_range(qbar)
    if k < 2:
        raise ValueError("k must be >= 2")
    if tables.mu[qbar] == 0:
        raise ValueError(f"qbar={qbar} is not squarefree")
    out = 1
    for p in distinct_primes(qbar, tables):
        out *= (p**k - 1) // (p - 1)
    return out


def is_power_free(n: int, j: int, tables: SieveTables) -> bool:
    """True iff no prime power p^j divides n (j >= 2)."""
    if j < 2:
        raise ValueError("j must be >= 2")
    return all(e < j for _, e in factorize(n, tables))


def signed_radical_divisors(q: int, tables: SieveTables) -> list[tuple[int, int]]:
    """All (d, mu(d)) with d | rad(q), in subset-enumeration order.

    These are exactly the squarefree divisors of q; the signs drive
    inclusion-exclusion over the prime divisors of q.
    """
    divs = [(1, 1)]
    for p in distinct_primes(q, tables):
        divs += [(d * p, -s) for d, s in divs]
    return divs


def two_param_totient(x, q: int, tables: SieveTables) -> int:
    """phi(x, q) = #{1 <= m <= q*x : gcd(m, q) = 1}, exact for rational x.

    Computed by inclusion-exclusion over the squarefree divisors of q:
    sum_{d | rad(q)} mu(d) * floor(q*x/d), with the floor taken in integer
    arithmetic so no rounding can occur.  Zero whenever q*x < 1.
    """
    tables.check_range(q)
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    xn, xd = x.numerator, x.denominator
    total = 0
    for d, s in signed_radical_divisors(q, tables):
        total += s * ((q * xn) // (xd * d))
    return total


def squarefree_count(t: int) -> int:
    """Exact number of squarefree integers <= t.

    Uses M(t) = sum_{d <= sqrt(t)} mu(d) * floor(t/d^2), so only a sieve up
    to sqrt(t) is needed.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    root = math.isqrt(t)
    if root < 1:
        return 0
    _, mu, _ = _kernels.fill_sieve(root)
    total = 0
    for d in range(1, root + 1):
        m = int(mu[d])
        if m:
            total += m * (t // (d * d))
    return total


class ZetaValue(NamedTuple):
    value: float
    err: float


def zeta_bracket(k: int, terms: int) -> tuple[Fraction, Fraction]:
    """Exact rational bracket lo <= zeta(k) <= hi.

    Partial sum of n^-k plus the integral comparison for the remainder:
    the tail over n > N lies between integral_(N+1)^inf and integral_N^inf
    of t^-k dt.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    partial = sum(Fraction(1, n**k) for n in range(1, terms + 1))
    lo = partial + Fraction(1, (k - 1) * (terms + 1) ** (k - 1))
    hi = partial + Fraction(1, (k - 1) * terms ** (k - 1))
    return lo, hi


def zeta(k: int, rel_tol: float = 1e-12) -> ZetaValue:
    """zeta(k) for integer k >= 2, with a certified error bound.

    Partial series plus the midpoint of the integral tail bracket; the
    returned err covers the bracket half-width and double-precision rounding
    of the summation.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if not 0 < rel_tol < 1:
        raise ValueError("rel_tol must be in (0, 1)")
    # Bracket width is ~N^-k; pick N so half of it beats rel_tol (value > 1).
    n_terms = max(16, math.ceil((1.0 / (2.0 * rel_tol)) ** (1.0 / k)))
    while True:
        tail_lo = (n_terms + 1) ** (1 - k) / (k - 1)
        tail_hi = n_terms ** (1 - k) / (k - 1)
        if (tail_hi - tail_lo) / 2 <= rel_tol:
            break
        n_terms *= 2
    partial = math.fsum(1.0 / float(n) ** k for n in range(1, n_terms + 1))
    value = partial + (tail_lo + tail_hi) / 2
    err = (tail_hi - tail_lo) / 2 + 4 * math.ulp(value)
    return ZetaValue(value, err)

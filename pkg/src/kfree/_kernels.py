"""Compiled hot loops (numba): sieve construction and the grouped spectral sum.

Everything here is deliberately free of Python objects so the callers in
:mod:`kfree.arith` and :mod:`kfree.diffraction` can hand the loops millions of
integers without interpreter overhead.  The callers own all input validation;
kernels assume preconditions hold (in particular the no-overflow guard for
``z_grouped_sum``, see below).
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def fill_sieve(limit):
    """Linear sieve filling smallest-prime-factor, Mobius and radical tables.

    One pass, every composite is struck exactly once through its smallest
    prime factor.  Index 0 is unused; index 1 gets spf=1, mu=1, rad=1.
    """
    spf = np.zeros(limit + 1, dtype=np.int32)
    mu = np.zeros(limit + 1, dtype=np.int8)
    rad = np.zeros(limit + 1, dtype=np.int32)
    if limit >= 1:
        spf[1] = 1
        mu[1] = 1
        rad[1] = 1
    primes = np.empty(limit // 2 + 1, dtype=np.int32)
    nprimes = 0
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            mu[i] = -1
            rad[i] = i
            primes[nprimes] = i
            nprimes += 1
        for j in range(nprimes):
            p = primes[j]
            if p > spf[i] or i * p > limit:
                break
            n = i * p
            spf[n] = p
            if p == spf[i]:
                mu[n] = 0
                rad[n] = rad[i]  # p already divides rad[i]
            else:
                mu[n] = -mu[i]
                rad[n] = rad[i] * p
    return spf, mu, rad


@njit(cache=True, nogil=True)
def fk_squared(limit, k, spf, mu):
    """Squared peak weight for every squarefree n <= limit, in double precision.

    out[n] = prod_{p | n} (p^k - 1)^{-2} for squarefree n, 0 otherwise.
    Built multiplicatively from smaller entries via the smallest prime factor.
    """
    out = np.zeros(limit + 1, dtype=np.float64)
    if limit >= 1:
        out[1] = 1.0
    for n in range(2, limit + 1):
        if mu[n] != 0:
            p = np.float64(spf[n])
            w = p ** k - 1.0
            out[n] = out[n // spf[n]] / (w * w)
    return out


@njit(cache=True, nogil=True)
def z_grouped_sum(k, xn, xd, qbar_lo, qbar_max, spf, mu, fk2):
    """Grouped cumulative-intensity partial sum, ascending radicals, Kahan.

    Adds, for every squarefree qbar in [qbar_lo, qbar_max],

        fk2[qbar] * sum_{v | qbar} mu(qbar/v) * floor(v^k * xn / xd)

    with compensated summation.  The divisor sum equals the sum of the
    two-parameter totients phi(l*x, qbar) over the divisors l of qbar^(k-1);
    the caller guarantees qbar_max^k * xn < 2^62 so every product below fits
    in int64 and every floor is exact.
    """
    total = 0.0
    comp = 0.0
    divs = np.empty(256, dtype=np.int64)
    sgn = np.empty(256, dtype=np.int64)
    for q in range(qbar_lo, qbar_max + 1):
        if mu[q] == 0:
            continue
        m = q
        nd = 1
        divs[0] = 1
        sgn[0] = 1
        while m > 1:
            p = spf[m]
            m //= p
            for j in range(nd):
                divs[nd + j] = divs[j] * p
                sgn[nd + j] = -sgn[j]
            nd *= 2
        inner = np.int64(0)
        for j in range(nd):
            v = divs[j]
            t = np.int64(xn)
            for _ in range(k):
                t *= v
            inner += sgn[j] * (t // xd)
        if mu[q] < 0:
            inner = -inner
        term = fk2[q] * inner
        y = term - comp
        t2 = total + y
        comp = (t2 - total) - y
        total = t2
    return total

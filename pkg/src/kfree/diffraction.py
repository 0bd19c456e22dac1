"""Closed-form diffraction quantities for the k-free integers.

The diffraction measure of the k-free integers is pure point, supported on
the rationals m/q in lowest terms whose denominator q is (k+1)-free.  The
atom at such a point has intensity (f_k(q)/zeta(k))^2 with the multiplicative
peak weight

    f_k(q) = prod_{p | rad(q)} 1/(p^k - 1)   (q (k+1)-free, else 0).

This module evaluates the peak weights and intensities exactly, enumerates
support points in a window, and computes the near-origin cumulative intensity

    Z_k(x) = sum_{q (k+1)-free, q >= 1/x} phi(x, q) f_k(q)^2

both naively (the brute-force oracle) and in grouped form over radicals with
a rigorous, computable bound on the truncated tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from .arith import (
    CapacityError,
    SieveTables,
    euler_phi,
    distinct_primes,
    factorize,
    sigma_of_radical_power,
    signed_radical_divisors,
    two_param_totient,
    zeta,
)

# Divisor walks over qbar^(k-1) touch k^omega(qbar) divisors; past this the
# enumeration is hopeless anyway (2^20 subsets), so fail loudly.
MAX_OMEGA = 20


@dataclass(frozen=True)
class KFreeParams:
    """Fixed k >= 2 together with a cached zeta(k) and its certified error."""

    k: int
    zeta_k: float
    zeta_err: float

    @classmethod
    def for_k(cls, k: int, zeta_rel_tol: float = 1e-12) -> "KFreeParams":
        if k < 2:
            raise ValueError("k must be >= 2")
        zv = zeta(k, zeta_rel_tol)
        return cls(k=k, zeta_k=zv.value, zeta_err=zv.err)

    @property
    def zeta_upper(self) -> float:
        return self.zeta_k + self.zeta_err


@dataclass(frozen=True)
class SpectrumPoint:
    """One diffraction peak z = m/q in lowest terms, with its intensity."""

    m: int
    q: int
    z: Fraction
    intensity: float


@dataclass(frozen=True)
class SupportWindow:
    """Sorted peaks in a window plus a completeness bound.

    Every omitted support point (denominator beyond the enumerated q_max) has
    intensity strictly below `omitted_intensity_bound`.
    """

    points: list[SpectrumPoint]
    omitted_intensity_bound: float

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class ZValue:
    """Partial cumulative intensity at x with a certified tail interval.

    The true Z_k(x) lies in [value, value + tail_bound].  `value` is the
    partial sum over squarefree radicals up to cutoff_qbar; it is a Fraction
    in exact mode and a float otherwise.  `empty_range` flags a cutoff too
    small to contain any nonzero term.
    """

    x: Fraction
    value: Fraction | float
    tail_bound: float
    cutoff_qbar: int
    empty_range: bool = False


def f_k(q: int, params: KFreeParams, tables: SieveTables) -> Fraction:
    """Peak weight: prod_{p | rad(q)} 1/(p^k - 1) if q is (k+1)-free, else 0."""
    k = params.k
    out = Fraction(1)
    for p, e in factorize(q, tables):
        if e > k:
            return Fraction(0)
        out /= p**k - 1
    return out


def f_k_lemma_form(q: int, params: KFreeParams, tables: SieveTables) -> Fraction:
    """Peak weight via the totient/divisor-sum identity.

    For (k+1)-free q with radical r, f_k(q) = 1 / (phi(r) * sigma(r^(k-1))).
    Raises for q that is not (k+1)-free.
    """
    tables.check_range(q)
    if not all(e <= params.k for _, e in factorize(q, tables)):
        raise ValueError(f"q={q} is not {params.k + 1}-free")
    r = int(tables.rad[q])
    return Fraction(1, euler_phi(r, tables) * sigma_of_radical_power(r, params.k, tables))


def intensity(m: int, q: int, params: KFreeParams, tables: SieveTables) -> float:
    """Atom intensity (f_k(q)/zeta(k))^2 at z = m/q; independent of m."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if math.gcd(m, q) != 1:
        raise ValueError(f"m/q = {m}/{q} is not in lowest terms")
    w = f_k(q, params, tables)
    if w == 0:
        raise ValueError(f"q={q} is not {params.k + 1}-free: not a support point")
    return (float(w) / params.zeta_k) ** 2


def _smallest_qbar_with(condition_pow: int, k: int) -> int:
    """Smallest integer v >= 1 with v^k >= condition_pow."""
    if condition_pow <= 1:
        return 1
    v = max(1, int(round(condition_pow ** (1.0 / k))))
    while v**k >= condition_pow:
        v -= 1
    v += 1
    while v**k < condition_pow:
        v += 1
    return v


def _min_contributing_radical(x: Fraction, k: int) -> int:
    """Smallest qbar whose group of terms can be nonzero: qbar^k * x >= 1."""
    # v^k * xn >= xd  <=>  v^k >= ceil(xd / xn)
    need = -(-x.denominator // x.numerator)
    return _smallest_qbar_with(need, k)


def enumerate_support(
    params: KFreeParams,
    x_lo,
    x_hi,
    q_max: int,
    tables: SieveTables,
) -> SupportWindow:
    """All support points z in (x_lo, x_hi] with denominator <= q_max, sorted.

    Every rational m/q in lowest terms with (k+1)-free q <= q_max falls in the
    support; points with larger denominators are omitted but each carries
    intensity < omitted_intensity_bound (their radical r satisfies r^k > q_max
    and the peak weight is below zeta(k)/r^k).
    """
    x_lo, x_hi = Fraction(x_lo), Fraction(x_hi)
    if x_lo < 0:
        raise ValueError("window must not extend below 0")
    if x_lo >= x_hi:
        raise ValueError("empty window: x_lo must be < x_hi")
    tables.check_range(q_max)
    k = params.k
    points = []
    for q in range(1, q_max + 1):
        w = f_k(q, params, tables)
        if w == 0:
            continue
        peak = (float(w) / params.zeta_k) ** 2
        m_first = (q * x_lo.numerator) // x_lo.denominator + 1
        m_last = (q * x_hi.numerator) // x_hi.denominator
        for m in range(m_first, m_last + 1):
            if math.gcd(m, q) == 1:
                points.append(SpectrumPoint(m=m, q=q, z=Fraction(m, q), intensity=peak))
    points.sort(key=lambda s: s.z)
    # least possible radical of an omitted denominator: smallest squarefree s
    # with s^k > q_max
    s = _smallest_qbar_with(q_max + 1, k)
    while s <= tables.limit and tables.mu[s] == 0:
        s += 1
    return SupportWindow(points=points, omitted_intensity_bound=float(s) ** (-2 * k))


def z_naive(
    x,
    params: KFreeParams,
    q_limit: int,
    tables: SieveTables,
    rad_max: int | None = None,
    exact: bool = True,
):
    """Brute-force oracle: sum phi(x,q) f_k(q)^2 over (k+1)-free q in [1/x, q_limit].

    Every totient is evaluated exactly.  With `rad_max` set, the summation is
    additionally restricted to q with rad(q) <= rad_max, which is the exact
    image of the grouped evaluator's truncation (matched-truncation mode).
    Returns a Fraction when exact, else a float.
    """
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    tables.check_range(q_limit)
    total = Fraction(0) if exact else 0.0
    q_start = max(1, math.ceil(1 / x))
    for q in range(q_start, q_limit + 1):
        if rad_max is not None and tables.rad[q] > rad_max:
            continue
        w = f_k(q, params, tables)
        if w == 0:
            continue
        phi = two_param_totient(x, q, tables)
        if phi == 0:
            continue
        if exact:
            total += w * w * phi
        else:
            total += float(w) ** 2 * phi
    return total


def phi_sum_over_power_divisors(qbar: int, k: int, x: Fraction, tables: SieveTables) -> int:
    """sum of phi(l*x, qbar) over the divisors l of qbar^(k-1), exactly.

    Walks exponent vectors (each prime of qbar carries exponent 0..k-1), so
    qbar^(k-1) is never materialized.  This is the oracle-grade inner sum of
    the grouped evaluator.
    """
    if tables.mu[qbar] == 0:
        raise ValueError(f"qbar={qbar} is not squarefree")
    primes = distinct_primes(qbar, tables)
    if len(primes) > MAX_OMEGA:
        raise CapacityError(f"qbar={qbar} has more than {MAX_OMEGA} prime factors")
    ells = [1]
    for p in primes:
        ells = [l * p**e for l in ells for e in range(k)]
    return sum(two_param_totient(ell * x, qbar, tables) for ell in ells)


def inner_sum_collapsed(qbar: int, k: int, x: Fraction, tables: SieveTables) -> int:
    """Same inner sum in collapsed form: sum_{v | qbar} mu(qbar/v) floor(v^k x).

    Identical value to `phi_sum_over_power_divisors` with 2^omega instead of
    (2k)^omega work: expanding each totient by inclusion-exclusion over the
    divisors of qbar makes every mixed term cancel, leaving only the perfect
    k-th power divisors of qbar^k.
    """
    if tables.mu[qbar] == 0:
        raise ValueError(f"qbar={qbar} is not squarefree")
    xn, xd = x.numerator, x.denominator
    total = 0
    for v, s in signed_radical_divisors(qbar, tables):
        total += s * ((v**k * xn) // xd)
    return int(tables.mu[qbar]) * total


def _fk2_floats(k: int, tables: SieveTables):
    """Cached float64 array of f_k(n)^2 for squarefree n <= limit."""
    arr = tables._fk2_cache.get(k)
    if arr is None:
        arr = _kernels.fk_squared(tables.limit, k, tables.spf, tables.mu)
        arr.flags.writeable = False
        tables._fk2_cache[k] = arr
    return arr


def _z_grouped_float_python(k, xn, xd, qbar_lo, qbar_max, tables, fk2) -> float:
    """Arbitrary-precision mirror of the compiled kernel (identical op order)."""
    total = 0.0
    comp = 0.0
    spf = tables.spf
    mu = tables.mu
    for q in range(qbar_lo, qbar_max + 1):
        if mu[q] == 0:
            continue
        divs = [1]
        sgn = [1]
        m = q
        while m > 1:
            p = int(spf[m])
            m //= p
            divs += [d * p for d in divs]
            sgn += [-s for s in sgn]
        inner = 0
        for v, s in zip(divs, sgn):
            t = xn
            for _ in range(k):
                t *= v
            inner += s * (t // xd)
        if mu[q] < 0:
            inner = -inner
        term = float(fk2[q]) * float(inner)
        y = term - comp
        t2 = total + y
        comp = (t2 - total) - y
        total = t2
    return total


def tail_bound(qbar_max: int, x, params: KFreeParams) -> float:
    """Upper bound on the mass omitted beyond the radical cutoff.

    Each omitted radical r > qbar_max contributes at most
    f_k(r)^2 (x phi(r) sigma(r^(k-1)) + d(r) d(r^(k-1))); with
    f_k(r) phi(r) sigma(r^(k-1)) = 1, f_k(r) < zeta(k)/r^k and d(n) <= 2*sqrt(n)
    this is dominated termwise by x*zeta(k)/r^k + 4*zeta(k)^2/r^(3k/2), and the
    integral comparison over r > qbar_max gives the returned bound.  The zeta
    factor uses the certified upper value, so the bound stays rigorous.
    """
    if qbar_max < 1:
        raise ValueError("qbar_max must be >= 1")
    k = params.k
    zu = params.zeta_upper
    q = float(qbar_max)
    poisson_part = float(x) * zu / ((k - 1) * q ** (k - 1))
    divisor_part = 4.0 * zu * zu / ((1.5 * k - 1.0) * q ** (1.5 * k - 1.0))
    return poisson_part + divisor_part


def z_grouped(
    x,
    params: KFreeParams,
    qbar_max: int,
    tables: SieveTables,
    exact: bool = False,
) -> ZValue:
    """Partial Z_k(x) grouped over squarefree radicals qbar <= qbar_max.

    Terms are accumulated in ascending qbar order; float mode uses Kahan
    compensation, exact mode full rational arithmetic (intended for oracle
    comparisons at small cutoffs).  The returned tail_bound certifies
    Z_k(x) in [value, value + tail_bound].
    """
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    tables.check_range(qbar_max)
    k = params.k
    v0 = _min_contributing_radical(x, k)
    bound = tail_bound(qbar_max, x, params)
    if qbar_max < v0:
        empty = Fraction(0) if exact else 0.0
        return ZValue(x=x, value=empty, tail_bound=bound, cutoff_qbar=qbar_max, empty_range=True)
    if exact:
        total = Fraction(0)
        for q in range(v0, qbar_max + 1):
            if tables.mu[q] == 0:
                continue
            w = f_k(q, params, tables)
            total += w * w * phi_sum_over_power_divisors(q, k, x, tables)
        return ZValue(x=x, value=total, tail_bound=bound, cutoff_qbar=qbar_max)
    fk2 = _fk2_floats(k, tables)
    xn, xd = x.numerator, x.denominator
    if qbar_max**k * xn < 2**62 and xd < 2**62:
        value = _kernels.z_grouped_sum(k, xn, xd, v0, qbar_max, tables.spf, tables.mu, fk2)
    else:
        value = _z_grouped_float_python(k, xn, xd, v0, qbar_max, tables, fk2)
    return ZValue(x=x, value=float(value), tail_bound=bound, cutoff_qbar=qbar_max)


def z_adaptive(x, params: KFreeParams, rel_tol: float, tables: SieveTables) -> ZValue:
    """Grow the radical cutoff geometrically until the tail is relatively small.

    Doubles the cutoff until tail_bound <= rel_tol * value, then returns that
    ZValue.  Deterministic; raises CapacityError (naming the offending x) if
    the required cutoff exceeds the sieve limit.
    """
    if not 0 < rel_tol < 1:
        raise ValueError("rel_tol must be in (0, 1)")
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    v0 = _min_contributing_radical(x, params.k)
    cutoff = 1 << max(1, (v0 - 1).bit_length())
    while True:
        if cutoff > tables.limit:
            raise CapacityError(
                f"x={x}: required radical cutoff {cutoff} exceeds sieve limit {tables.limit}"
            )
        zv = z_grouped(x, params, cutoff, tables)
        if zv.value > 0 and zv.tail_bound <= rel_tol * zv.value:
            return zv
        cutoff *= 2

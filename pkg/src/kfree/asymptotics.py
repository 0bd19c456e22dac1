"""Scaling-law verification: cumulative-intensity scans, log-log exponent
fits against the expected near-origin exponent 2 - 1/k, and exhaustive
numerical checks of the elementary inequalities the evaluators rest on.

The verifiers return small report objects rather than raising, so callers
(CLI, acceptance tests) can render violations and map them to exit codes.
"""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import (
    SieveTables,
    divisor_count,
    euler_phi,
    factorize,
    two_param_totient,
    zeta,
    zeta_bracket,
)
from .diffraction import KFreeParams, ZValue, z_adaptive
from .directspace import generate_patch


@dataclass(frozen=True)
class ScanTable:
    """Adaptive Z_k evaluations over a descending logarithmic x-grid."""

    k: int
    rows: list[ZValue]
    rel_tol: float


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of log(value) against log(x)."""

    slope: float
    intercept: float
    r_squared: float
    max_residual: float
    expected_slope: float

    def gap(self) -> float:
        return abs(self.slope - self.expected_slope)


def dyadic(value: float, mantissa_bits: int = 16) -> Fraction:
    """Nearest fraction with power-of-two denominator and a short mantissa.

    Short mantissas keep the integer products inside the grouped evaluator
    within machine range; 16 bits places grid points within 2^-16 relative
    of the requested position, which is irrelevant for log-log fitting.
    """
    if value <= 0:
        raise ValueError("value must be positive")
    mantissa, exponent = math.frexp(value)
    scaled = round(mantissa * (1 << mantissa_bits))
    shift = mantissa_bits - exponent
    if shift >= 0:
        return Fraction(scaled, 1 << shift)
    return Fraction(scaled << -shift)


def scan(
    k: int,
    x_min,
    x_max,
    points: int,
    rel_tol: float,
    tables: SieveTables,
    threads: int = 1,
) -> ScanTable:
    """Evaluate Z_k adaptively on a log-spaced grid from x_max down to x_min.

    Grid values are exact rationals: the endpoints as given, interior points
    dyadic approximations of the geometric spacing.  Rows can be computed in
    parallel; results are collected in grid order so the table is identical
    for every thread count.
    """
    x_min, x_max = Fraction(x_min), Fraction(x_max)
    if not 0 < x_min < x_max <= 1:
        raise ValueError("need 0 < x_min < x_max <= 1")
    if points < 2:
        raise ValueError("points must be >= 2")
    params = KFreeParams.for_k(k)
    log_hi, log_lo = math.log(float(x_max)), math.log(float(x_min))
    grid: list[Fraction] = [x_max]
    for i in range(1, points - 1):
        t = i / (points - 1)
        grid.append(dyadic(math.exp(log_hi + t * (log_lo - log_hi))))
    grid.append(x_min)

    def row(x: Fraction) -> ZValue:
        return z_adaptive(x, params, rel_tol, tables)

    if threads == 0:
        threads = os.cpu_count() or 1
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, grid))
    else:
        rows = [row(x) for x in grid]
    return ScanTable(k=k, rows=rows, rel_tol=rel_tol)


def fit_loglog(table: ScanTable) -> FitResult:
    """Ordinary least squares of log(value) on log(x) over the usable rows."""
    xs = [float(r.x) for r in table.rows if r.value > 0]
    ys = [float(r.value) for r in table.rows if r.value > 0]
    if len(xs) < 2:
        raise ValueError("need at least 2 rows with positive value")
    lx = np.log(np.asarray(xs))
    ly = np.log(np.asarray(ys))
    dx = lx - lx.mean()
    dy = ly - ly.mean()
    slope = float(np.dot(dx, dy) / np.dot(dx, dx))
    intercept = float(ly.mean() - slope * lx.mean())
    res = ly - (intercept + slope * lx)
    ss_res = float(np.dot(res, res))
    ss_tot = float(np.dot(dy, dy))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return FitResult(
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
        max_residual=float(np.max(np.abs(res))),
        expected_slope=2.0 - 1.0 / table.k,
    )


# ----------------------------- verifications -----------------------------


@dataclass(frozen=True)
class FkBoundsReport:
    """Strict-bound check 1/r^k < f_k(q) < zeta(k)/r^k over (k+1)-free q."""

    k: int
    q_max: int
    checked: int
    violations: list[int]
    edge_cases: list[int]  # q = 1: the weight equals the lower-bound expression

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_fk_bounds(k: int, q_max: int, tables: SieveTables) -> FkBoundsReport:
    """Exhaustively check the peak-weight bounds for 1 <= q <= q_max.

    Comparisons are exact: the scaled weight r^k * f_k(q) is a rational
    prod_{p|r} p^k/(p^k - 1), compared against an exact rational bracket of
    zeta(k) that is refined until it separates (strictness of the upper
    bound never actually needs more than the initial bracket).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    tables.check_range(q_max)
    terms = 128
    z_lo, z_hi = zeta_bracket(k, terms)
    verdicts: dict[int, bool] = {}
    violations: list[int] = []
    edge_cases: list[int] = []
    checked = 0
    for q in range(1, q_max + 1):
        fac = factorize(q, tables)
        if any(e > k for _, e in fac):
            continue
        checked += 1
        if q == 1:
            edge_cases.append(1)
            continue
        r = int(tables.rad[q])
        good = verdicts.get(r)
        if good is None:
            scaled = Fraction(1)
            for p, _ in factorize(r, tables):
                pk = p**k
                scaled *= Fraction(pk, pk - 1)
            good = scaled > 1
            while good and not scaled < z_lo:
                if scaled > z_hi:
                    good = False
                    break
                terms *= 2
                z_lo, z_hi = zeta_bracket(k, terms)
            verdicts[r] = good
        if not good:
            violations.append(q)
    return FkBoundsReport(
        k=k, q_max=q_max, checked=checked, violations=violations, edge_cases=edge_cases
    )


@dataclass(frozen=True)
class PhiIdentityReport:
    """Radical-reduction identity phi(x, q) = phi(l*x, rad(q)), l = q/rad(q)."""

    checked: int
    failures: list[tuple[Fraction, int]]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_phi_identity(samples, k: int, tables: SieveTables) -> PhiIdentityReport:
    """Assert the exact radical-reduction identity on every (x, q) sample."""
    samples = list(samples)
    failures = []
    for x, q in samples:
        x = Fraction(x)
        if not all(e <= k for _, e in factorize(q, tables)):
            raise ValueError(f"q={q} is not {k + 1}-free")
        r = int(tables.rad[q])
        ell = q // r
        if two_param_totient(x, q, tables) != two_param_totient(ell * x, r, tables):
            failures.append((x, q))
    return PhiIdentityReport(checked=len(samples), failures=failures)


def random_phi_samples(
    k: int, count: int, q_limit: int, tables: SieveTables, seed: int = 0
) -> list[tuple[Fraction, int]]:
    """Deterministic random (x, q) pairs with (k+1)-free q for identity checks."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        q = rng.randrange(1, q_limit + 1)
        if not all(e <= k for _, e in factorize(q, tables)):
            continue
        x = Fraction(rng.randrange(1, 1000), rng.randrange(1, 1000))
        out.append((x, q))
    return out


@dataclass(frozen=True)
class PhiApproxReport:
    """Counting bound |phi(x, q) - x*phi(q)| <= d(q) over squarefree q."""

    q_max: int
    checked: int
    failures: list[tuple[Fraction, int]]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_phi_approx(q_max: int, x_grid, tables: SieveTables) -> PhiApproxReport:
    """Check the totient counting bound exactly for all squarefree q <= q_max."""
    tables.check_range(q_max)
    grid = [Fraction(x) for x in x_grid]
    failures = []
    checked = 0
    for q in range(1, q_max + 1):
        if tables.mu[q] == 0:
            continue
        phi_q = euler_phi(q, tables)
        d_q = divisor_count(q, tables)
        for x in grid:
            checked += 1
            lhs = two_param_totient(x, q, tables) * x.denominator - x.numerator * phi_q
            if abs(lhs) > d_q * x.denominator:
                failures.append((x, q))
    return PhiApproxReport(q_max=q_max, checked=checked, failures=failures)


@dataclass(frozen=True)
class MuTailRow:
    y: float
    cutoff: int          # summation starts at ceil(1/y)
    truncated_at: int
    direct_sum: float
    ratio: float         # direct sum over y^(k-1)/((k-1) zeta(2))
    truncation_rel: float
    c_point: float       # |ratio - 1| / sqrt(y)


@dataclass(frozen=True)
class MuTailReport:
    k: int
    rows: list[MuTailRow]


_sqfree_mask = np.zeros(1, dtype=bool)


def _squarefree_membership(n: int) -> np.ndarray:
    """Shared squarefree-indicator array, grown on demand (results never change)."""
    global _sqfree_mask
    if n >= _sqfree_mask.size:
        _sqfree_mask = generate_patch(2, max(n, 2 * _sqfree_mask.size)).membership
    return _sqfree_mask


def _squarefree_inverse_power_tail(k: int, start: int, rel_cut: float) -> tuple[float, int, float]:
    """Directly sum mu(q)^2 / q^k for q >= start, truncating by the integral bound.

    Extends the summation range in blocks until the integral tail bound
    T^(1-k)/(k-1) drops below rel_cut times the accumulated sum.  Returns
    (sum, truncation point, relative truncation bound).
    """
    total = 0.0
    hi = start - 1
    while True:
        lo = hi + 1
        hi = max(2 * hi, lo + 1_000_000)
        sf = _squarefree_membership(hi)
        q = np.arange(lo, hi + 1, dtype=np.float64)
        total += float(np.sum(np.where(sf[lo : hi + 1], q ** (-k), 0.0)))
        bound = hi ** (1 - k) / (k - 1)
        if total > 0 and bound <= rel_cut * total:
            return total, hi, bound / total


def verify_mu_tail(
    k: int, y_grid, tables: SieveTables, rel_cut: float = 1e-3
) -> MuTailReport:
    """Compare tail sums of mu(q)^2/q^k against y^(k-1)/((k-1) zeta(2)).

    The ratio tends to 1 as y -> 0 at rate O(sqrt(y)); each row reports the
    directly summed value, the truncation point (additional terms below
    `rel_cut` relative, via the integral tail of q^-k), and the per-point
    constant |ratio - 1|/sqrt(y).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    zeta2 = zeta(2).value
    rows = []
    for y in y_grid:
        yf = float(y)
        start = math.ceil(1 / Fraction(y))
        total, t2, trunc_rel = _squarefree_inverse_power_tail(k, start, rel_cut)
        expected = yf ** (k - 1) / ((k - 1) * zeta2)
        ratio = total / expected
        rows.append(
            MuTailRow(
                y=yf,
                cutoff=start,
                truncated_at=t2,
                direct_sum=total,
                ratio=ratio,
                truncation_rel=trunc_rel,
                c_point=abs(ratio - 1) / math.sqrt(yf),
            )
        )
    return MuTailReport(k=k, rows=rows)


def decade_envelope_constants(
    k: int,
    decades,
    tables: SieveTables,
    points_per_decade: int = 9,
) -> dict[float, float]:
    """Envelope constant per decade: max of |ratio - 1|/sqrt(y) over y in the decade.

    The pointwise constant oscillates (the ratio crosses 1), so stability is
    judged on the envelope over y = {1..points} * decade rather than on single
    samples.
    """
    out = {}
    for d in decades:
        grid = [Fraction(d) * (j + 1) for j in range(points_per_decade)]
        report = verify_mu_tail(k, grid, tables)
        out[float(d)] = max(r.c_point for r in report.rows)
    return out


@dataclass(frozen=True)
class DivisorBoundReport:
    """Empirical threshold for d(q) d(q^(k-1)) <= q^eps over squarefree q."""

    k: int
    eps: float
    q_max: int
    largest_violation: int | None
    violation_count: int


def divisor_bound_threshold(
    k: int, eps: float, q_max: int, tables: SieveTables
) -> DivisorBoundReport:
    """Scan squarefree q <= q_max for d(q) d(q^(k-1)) > q^eps.

    For squarefree q both divisor counts are powers of omega(q), so the test
    reduces to omega(q) log(2k) > eps log(q).  Returns the largest violating
    q, demonstrating where the eventual inequality kicks in.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must be in (0, 1)")
    tables.check_range(q_max)
    idx = np.arange(q_max + 1, dtype=np.int64)
    spf = np.asarray(tables.spf[: q_max + 1], dtype=np.int64)
    primes = idx[2:][spf[2:] == idx[2:]]
    omega = np.zeros(q_max + 1, dtype=np.uint8)
    for p in primes:
        omega[p::p] += 1
    squarefree = np.asarray(tables.mu[: q_max + 1]) != 0
    logs = np.zeros(q_max + 1)
    logs[1:] = np.log(idx[1:])
    bad = squarefree & (omega * math.log(2 * k) > eps * logs)
    bad[0] = False
    positions = np.flatnonzero(bad)
    largest = int(positions[-1]) if positions.size else None
    return DivisorBoundReport(
        k=k,
        eps=eps,
        q_max=q_max,
        largest_violation=largest,
        violation_count=int(positions.size),
    )

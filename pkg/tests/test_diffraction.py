"""Tests for peak weights, intensities, support enumeration, and the
cumulative-intensity evaluators (naive oracle, grouped, adaptive).

The hand-expanded reference sums are computed with the independent helpers
at the top (trial division, brute m-counting); they never call the evaluator
they check.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import kfree
from kfree import CapacityError, KFreeParams, build_sieve
from kfree.diffraction import _fk2_floats, _z_grouped_float_python
from kfree import _kernels


# ------------------------- independent mini-oracles -------------------------


def trial_distinct_primes(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def brute_peak_weight(q, k):
    """Direct evaluation: product of 1/(p^k - 1) if q is (k+1)-free, else 0."""
    m = q
    for p in trial_distinct_primes(q):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e > k:
            return Fraction(0)
        m = q  # reset: exponent check is per prime on the original q
    return math.prod((Fraction(1, p**k - 1) for p in trial_distinct_primes(q)), start=Fraction(1))


def brute_totient_count(x: Fraction, q: int) -> int:
    top = (q * x.numerator) // x.denominator
    return sum(1 for m in range(1, top + 1) if math.gcd(m, q) == 1)


def brute_z_sum(x: Fraction, k: int, q_limit: int) -> Fraction:
    total = Fraction(0)
    for q in range(max(1, math.ceil(1 / x)), q_limit + 1):
        w = brute_peak_weight(q, k)
        if w:
            total += w * w * brute_totient_count(x, q)
    return total


@pytest.fixture(scope="module")
def tables():
    return build_sieve(12**3)


@pytest.fixture(scope="module")
def big_tables():
    return build_sieve(10**5)


@pytest.fixture(scope="module")
def p2():
    return KFreeParams.for_k(2)


@pytest.fixture(scope="module")
def p3():
    return KFreeParams.for_k(3)


# ------------------------------- peak weights -------------------------------


def test_peak_weight_examples(tables, p2):
    assert kfree.f_k(1, p2, tables) == 1
    assert kfree.f_k(2, p2, tables) == Fraction(1, 3)
    assert kfree.f_k(8, p2, tables) == 0  # 8 = 2^3 is not cube-free
    assert kfree.f_k(12, p2, tables) == Fraction(1, 24)


def test_peak_weight_against_brute_force(tables, p2, p3):
    for q in range(1, 500):
        assert kfree.f_k(q, p2, tables) == brute_peak_weight(q, 2)
        assert kfree.f_k(q, p3, tables) == brute_peak_weight(q, 3)


def test_peak_weight_depends_only_on_radical(big_tables):
    for k in (2, 3):
        params = KFreeParams.for_k(k)
        for q in range(1, 10**5 + 1):
            w = kfree.f_k(q, params, big_tables)
            if w:
                assert w == kfree.f_k(int(big_tables.rad[q]), params, big_tables)


def test_peak_weight_equals_lemma_form(big_tables):
    for k in (2, 3, 4):
        params = KFreeParams.for_k(k)
        for q in range(1, 10**5 + 1):
            w = kfree.f_k(q, params, big_tables)
            if w:
                assert w == kfree.f_k_lemma_form(q, params, big_tables)


def test_lemma_form_rejects_excluded_q(tables, p2):
    with pytest.raises(ValueError):
        kfree.f_k_lemma_form(8, p2, tables)


def test_peak_weight_strict_bounds_sample(big_tables):
    """1/r^k < f_k(q) < zeta(k)/r^k for q with radical r > 1 (spot range)."""
    for k in (2, 3):
        params = KFreeParams.for_k(k)
        z_hi = params.zeta_k + params.zeta_err
        for q in range(2, 3000):
            w = kfree.f_k(q, params, big_tables)
            if not w:
                continue
            r = int(big_tables.rad[q])
            assert Fraction(1, r**k) < w
            assert float(w) < z_hi / r**k


# -------------------------------- intensities --------------------------------


def test_intensity_at_zero(tables, p2):
    got = kfree.intensity(0, 1, p2, tables)
    assert got == pytest.approx(36 / math.pi**4, rel=1e-12)
    assert got == pytest.approx(0.369576, abs=1e-6)


def test_intensity_example_and_m_independence(tables, p2):
    base = (float(Fraction(1, 3)) / p2.zeta_k) ** 2
    assert kfree.intensity(1, 4, p2, tables) == pytest.approx(base, rel=1e-12)
    assert kfree.intensity(3, 4, p2, tables) == kfree.intensity(1, 4, p2, tables)
    assert kfree.intensity(5, 4, p2, tables) == kfree.intensity(1, 4, p2, tables)


def test_intensity_rejects_non_support(tables, p2):
    with pytest.raises(ValueError):
        kfree.intensity(2, 4, p2, tables)  # not in lowest terms
    with pytest.raises(ValueError):
        kfree.intensity(1, 8, p2, tables)  # denominator not cube-free


# ----------------------------- support enumeration -----------------------------


def test_enumerate_support_window(tables, p2):
    window = kfree.enumerate_support(p2, 0, Fraction(1, 2), 4, tables)
    assert [(pt.m, pt.q) for pt in window.points] == [(1, 4), (1, 3), (1, 2)]
    zeta = p2.zeta_k
    expected = [(1 / 3 / zeta) ** 2, (1 / 8 / zeta) ** 2, (1 / 3 / zeta) ** 2]
    for pt, want in zip(window.points, expected):
        assert pt.intensity == pytest.approx(want, rel=1e-12)


def test_enumerate_support_excludes_zero(tables, p2):
    window = kfree.enumerate_support(p2, 0, Fraction(1, 2), 4, tables)
    assert all(pt.z > 0 for pt in window.points)


def test_enumerate_support_empty_window(tables, p2):
    window = kfree.enumerate_support(p2, 0, Fraction(1, 5), 4, tables)
    assert len(window) == 0


def test_enumerate_support_omitted_bound(tables, p2):
    window = kfree.enumerate_support(p2, 0, 1, 4, tables)
    # smallest squarefree r with r^2 > 4 is 3; omitted intensities < 3^-4
    assert window.omitted_intensity_bound == pytest.approx(3.0**-4)
    assert all(pt.intensity < 1 for pt in window.points)


def test_enumerate_support_rejects_bad_window(tables, p2):
    with pytest.raises(ValueError):
        kfree.enumerate_support(p2, Fraction(1, 2), Fraction(1, 2), 4, tables)
    with pytest.raises(ValueError):
        kfree.enumerate_support(p2, -1, Fraction(1, 2), 4, tables)


# ------------------------------- naive evaluator -------------------------------


def test_z_naive_q_one_term(tables, p2):
    # for x >= 1 the q=1 term contributes floor(x) exactly
    assert kfree.z_naive(3, p2, 1, tables) == 3
    assert kfree.z_naive(Fraction(7, 2), p2, 1, tables) == 3


def test_z_naive_hand_expanded(tables, p2):
    x = Fraction(1, 2)
    assert kfree.z_naive(x, p2, 20, tables) == brute_z_sum(x, 2, 20)


def test_z_naive_monotone_in_q(tables, p2):
    x = Fraction(1, 3)
    values = [kfree.z_naive(x, p2, q, tables) for q in (5, 20, 80, 320)]
    assert all(a <= b for a, b in zip(values, values[1:]))


# ------------------------------ grouped evaluator ------------------------------


def test_grouped_matches_naive_matched_truncation(tables, p2, p3):
    for params in (p2, p3):
        k = params.k
        for x in (Fraction(1, 3), Fraction(1, 5), Fraction(1, 20)):
            grouped = kfree.z_grouped(x, params, 12, tables, exact=True)
            naive = kfree.z_naive(x, params, 12**k, tables, rad_max=12)
            assert grouped.value == naive

def test_grouped_float_close_to_exact(tables, p2, p3):
    for params in (p2, p3):
        for x in (Fraction(1, 3), Fraction(1, 5), Fraction(1, 20)):
            exact = kfree.z_grouped(x, params, 12, tables, exact=True)
            fl = kfree.z_grouped(x, params, 12, tables)
            assert fl.value == pytest.approx(float(exact.value), rel=1e-12)


def test_full_naive_strictly_exceeds_grouped(tables, p2):
    # Truncating by q <= B^k keeps terms whose radical exceeds B (e.g. q = 13
    # here), so the plain naive sum is strictly larger than the grouped
    # radical-truncated sum: the two truncations only match through rad_max.
    x = Fraction(1, 5)
    grouped = kfree.z_grouped(x, p2, 12, tables, exact=True)
    full = kfree.z_naive(x, p2, 144, tables)
    assert full > grouped.value


def test_grouped_empty_range_flag(tables, p2):
    z = kfree.z_grouped(Fraction(1, 10**6), p2, 16, tables)
    assert z.empty_range and z.value == 0 and z.tail_bound > 0


def test_grouped_hyperuniform_regime(p2):
    big = build_sieve(1 << 17)
    x = Fraction(1, 1000)
    z = kfree.z_adaptive(x, p2, 1e-2, big)
    assert 0 < z.value < float(x)


@settings(max_examples=120, deadline=None, derandomize=True)
@given(st.integers(2, 1500), st.integers(2, 4), st.integers(1, 40), st.integers(1, 40))
def test_inner_sum_forms_agree(q, k, num, den):
    t = build_sieve(1500)
    assume(t.mu[q] != 0)
    x = Fraction(num, den)
    assert kfree.phi_sum_over_power_divisors(q, k, x, t) == kfree.inner_sum_collapsed(q, k, x, t)


def test_inner_sum_equals_totient_sum_small(tables):
    # definition check against an explicit divisor walk of qbar^(k-1)
    for qbar, k, x in ((6, 2, Fraction(1, 4)), (10, 3, Fraction(2, 7)), (30, 2, Fraction(1, 3))):
        ells = [1]
        for p in trial_distinct_primes(qbar):
            ells = [l * p**e for l in ells for e in range(k)]
        direct = sum(brute_totient_count(l * x, qbar) for l in ells)
        assert kfree.phi_sum_over_power_divisors(qbar, k, x, tables) == direct


def test_kernel_matches_python_mirror(p2, p3):
    t = build_sieve(20000)
    for params in (p2, p3):
        fk2 = _fk2_floats(params.k, t)
        for x in (Fraction(1, 100), Fraction(3, 1000), Fraction(1, 7)):
            got = _kernels.z_grouped_sum(
                params.k, x.numerator, x.denominator, 1, 20000, t.spf, t.mu, fk2
            )
            mirror = _z_grouped_float_python(
                params.k, x.numerator, x.denominator, 1, 20000, t, fk2
            )
            assert got == mirror


# --------------------------------- tail bound ---------------------------------


def test_tail_bound_monotone(p2, p3):
    x = Fraction(1, 50)
    for params in (p2, p3):
        bounds = [kfree.tail_bound(q, x, params) for q in (4, 8, 16, 32, 64)]
        assert all(a > b for a, b in zip(bounds, bounds[1:]))


def test_tail_bound_doubling_rate(p2, p3):
    x = Fraction(1, 50)
    for params in (p2, p3):
        k = params.k
        for q in (8, 64, 512):
            assert kfree.tail_bound(2 * q, x, params) <= kfree.tail_bound(q, x, params) / 2 ** (k - 1)


def test_tail_bound_covers_extension(p2):
    t = build_sieve(1 << 14)
    x = Fraction(1, 10**4)
    for cutoff in (256, 1024):
        z_lo = kfree.z_grouped(x, p2, cutoff, t)
        z_hi = kfree.z_grouped(x, p2, 4 * cutoff, t)
        assert z_lo.value <= z_hi.value <= z_lo.value + z_lo.tail_bound


# ------------------------------ adaptive evaluator ------------------------------


def test_adaptive_cutoff_monotone_in_tolerance(p2):
    t = build_sieve(1 << 16)
    x = Fraction(1, 500)
    loose = kfree.z_adaptive(x, p2, 0.5, t)
    tight = kfree.z_adaptive(x, p2, 0.01, t)
    assert loose.cutoff_qbar <= tight.cutoff_qbar
    assert tight.tail_bound <= 0.01 * tight.value


def test_adaptive_interval_contains_refinement(p2):
    t = build_sieve(1 << 16)
    x = Fraction(1, 500)
    z = kfree.z_adaptive(x, p2, 0.1, t)
    refined = kfree.z_grouped(x, p2, min(4 * z.cutoff_qbar, t.limit), t)
    assert z.value <= refined.value <= z.value + z.tail_bound


def test_adaptive_close_to_naive_oracle(p2):
    t = build_sieve(1 << 15)
    x = Fraction(1, 20)
    z = kfree.z_adaptive(x, p2, 0.5, t)
    # every group term q = l*qbar <= cutoff^k is inside the naive range, so the
    # naive sum brackets between the partial value and value + tail
    q_limit = 4 * z.cutoff_qbar**2
    assert q_limit <= t.limit
    oracle = float(kfree.z_naive(x, p2, q_limit, t))
    assert z.value <= oracle <= z.value + z.tail_bound
    assert oracle == pytest.approx(float(z.value), rel=0.5)


def test_adaptive_deterministic(p2):
    t = build_sieve(1 << 14)
    a = kfree.z_adaptive(Fraction(1, 300), p2, 0.02, t)
    b = kfree.z_adaptive(Fraction(1, 300), p2, 0.02, t)
    assert a == b


def test_adaptive_capacity_error(p2):
    t = build_sieve(64)
    with pytest.raises(CapacityError, match="1/1000000"):
        kfree.z_adaptive(Fraction(1, 10**6), p2, 0.5, t)

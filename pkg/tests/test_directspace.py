"""Tests for sieved patches, pair frequencies, and the empirical scattering
amplitude, including cross-checks against the closed-form intensities.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

import kfree
from kfree import KFreeParams, build_sieve, generate_patch


def test_patch_small_example():
    patch = generate_patch(2, 10)
    assert list(patch.members()) == [1, 2, 3, 5, 6, 7, 10]
    assert patch.count == 7


def test_patch_cubefree_example():
    patch = generate_patch(3, 10)
    assert patch.count == 9
    assert 8 not in set(patch.members())


def test_patch_below_first_power_is_full():
    for k in (2, 3, 4):
        n = 2**k - 1
        assert generate_patch(k, n).count == n


def test_patch_matches_power_free_predicate():
    tables = build_sieve(2000)
    for k in (2, 3):
        patch = generate_patch(k, 2000)
        for n in range(1, 2001):
            assert patch.membership[n] == kfree.is_power_free(n, k, tables)


def test_density_examples():
    assert kfree.density(generate_patch(2, 10)) == 0.7
    assert abs(kfree.density(generate_patch(2, 10**6)) - 6 / math.pi**2) < 2e-3
    zeta3 = kfree.zeta(3).value
    assert abs(kfree.density(generate_patch(3, 10**6)) - 1 / zeta3) < 1e-3


def test_pair_frequencies_small():
    patch = generate_patch(2, 10)
    freqs = kfree.pair_frequencies(patch, 3)
    assert freqs.eta[0] == kfree.density(patch)
    # pairs at distance 1 in [1..10]: (1,2), (2,3), (5,6), (6,7)
    assert freqs.eta[1] == pytest.approx(0.4)


def test_pair_frequencies_bounded_by_density():
    patch = generate_patch(2, 5000)
    freqs = kfree.pair_frequencies(patch, 50)
    assert np.all(freqs.eta <= freqs.eta[0] + 1e-15)
    assert np.all(freqs.eta >= 0)


def test_pair_frequencies_rejects_large_distance():
    with pytest.raises(ValueError):
        kfree.pair_frequencies(generate_patch(2, 10), 10)


def test_empirical_intensity_at_zero_is_density_squared():
    patch = generate_patch(2, 10**4)
    assert kfree.empirical_intensity(patch, Fraction(0)) == kfree.density(patch) ** 2
    assert kfree.empirical_intensity(patch, 0) == kfree.density(patch) ** 2


def test_empirical_intensity_matches_closed_form():
    patch = generate_patch(2, 10**5)
    tables = build_sieve(100)
    params = KFreeParams.for_k(2)
    closed = kfree.intensity(1, 4, params, tables)
    assert abs(kfree.empirical_intensity(patch, Fraction(1, 4)) - closed) <= 0.01


def test_empirical_intensity_m_independence():
    n = 10**5
    patch = generate_patch(2, n)
    tol = 5 / math.sqrt(n)
    for q, residues in ((4, (1, 3)), (5, (1, 2, 3, 4)), (9, (1, 2, 4))):
        vals = [kfree.empirical_intensity(patch, Fraction(m, q)) for m in residues]
        assert max(vals) - min(vals) <= tol


def test_empirical_intensity_periodicity_exact():
    patch = generate_patch(2, 10**4)
    z = Fraction(1, 4)
    assert kfree.empirical_intensity(patch, z) == kfree.empirical_intensity(patch, z + 1)


def test_empirical_intensity_irrational_is_small():
    patch = generate_patch(2, 10**5)
    golden = (math.sqrt(5) - 1) / 2
    assert kfree.empirical_intensity(patch, golden) < 1e-2


def test_empirical_intensity_float_path_consistent():
    # same frequency through the exact-residue path and the float-phase path
    patch = generate_patch(2, 10**4)
    exact = kfree.empirical_intensity(patch, Fraction(1, 4))
    floaty = kfree.empirical_intensity(patch, 0.25)
    assert floaty == pytest.approx(exact, abs=1e-9)


def test_patch_rejects_bad_input():
    with pytest.raises(ValueError):
        generate_patch(1, 10)
    with pytest.raises(ValueError):
        generate_patch(2, 0)
    with pytest.raises(kfree.CapacityError):
        generate_patch(2, 1 << 30)

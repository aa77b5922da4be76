import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesdirichlet.errors import DomainError
from cesdirichlet.kernels import (
    decrease_onset,
    lambert_w,
    phi_alpha_deriv,
    phi_xlogx,
    power_sum_range,
    sieve_primes,
    smooth_membership,
    zeta_real,
    zeta_tail,
)

ZETA_2 = math.pi ** 2 / 6  # independent closed form
ZETA_15 = 2.6123753486854883  # high-precision series value, frozen


# ---------------------------------------------------------------------------
# sieve
# ---------------------------------------------------------------------------

def test_sieve_smallest():
    assert list(sieve_primes(2).primes) == [2]


def test_sieve_100():
    t = sieve_primes(100)
    assert len(t) == 25
    assert t.primes[-1] == 97
    assert t.nth(1) == 2


def test_sieve_10():
    assert list(sieve_primes(10).primes) == [2, 3, 5, 7]


@pytest.mark.parametrize("bad", [1, 0, -5, 10 ** 9 + 1])
def test_sieve_domain(bad):
    with pytest.raises(DomainError):
        sieve_primes(bad)


def test_sieve_prefix_property():
    small = sieve_primes(1_000)
    large = sieve_primes(10_000)
    assert np.array_equal(large.primes[: len(small)], small.primes)


def test_segmented_sieve_agrees():
    # exercise the segmented path against the plain one on a window
    from cesdirichlet.kernels import _plain_sieve, _segmented_sieve

    assert np.array_equal(_segmented_sieve(10 ** 6), _plain_sieve(10 ** 6))


# ---------------------------------------------------------------------------
# zeta enclosures
# ---------------------------------------------------------------------------

def test_zeta2_enclosure():
    z = zeta_real(2.0, 10 ** 6)
    assert z.contains(ZETA_2)
    assert z.width < 1e-11


def test_zeta_single_term_bracket():
    z = zeta_real(2.0, 1)
    assert z.contains(ZETA_2)
    assert z.lo >= 1.0


def test_zeta_15():
    z = zeta_real(1.5, 10 ** 6)
    assert z.contains(ZETA_15)


def test_zeta_against_mpmath():
    mp = pytest.importorskip("mpmath")
    for x in (1.25, 1.5, 2.0, 3.0, 5.0):
        z = zeta_real(x, 200_000)
        assert z.lo <= float(mp.zeta(x)) <= z.hi


@pytest.mark.parametrize("x", [1.0, 0.5, -2.0])
def test_zeta_divergent_domain(x):
    with pytest.raises(DomainError):
        zeta_real(x, 100)
    with pytest.raises(DomainError):
        zeta_tail(x, 5)


def test_zeta_tail_basic():
    t = zeta_tail(2.0, 1)
    assert t.contains(ZETA_2 - 1.0)


def test_zeta_tail_bare_bracket():
    t = zeta_tail(2.0, 7, prefix=0)
    assert t.lo == pytest.approx(8.0 ** -1, rel=1e-12)
    assert t.hi == pytest.approx(7.0 ** -1, rel=1e-12)


def test_zeta_tail_integral_window():
    # 1/(n+1) <= tail <= 1/n for x = 2
    n = 10
    t = zeta_tail(2.0, n)
    assert 1.0 / (n + 1) <= t.lo and t.hi <= 1.0 / n


def test_zeta_tail_nesting():
    for n in (2, 5, 17):
        outer = zeta_tail(2.0, n - 1)
        inner = zeta_tail(2.0, n)
        # tail(n) = tail(n-1) - n^-2
        assert inner.lo <= outer.hi - n ** -2.0 + 1e-12
        assert inner.hi >= outer.lo - n ** -2.0 - 1e-12


def test_zeta_real_nested_in_terms():
    prev = zeta_real(2.0, 10)
    for terms in (100, 1_000, 10_000):
        cur = zeta_real(2.0, terms)
        assert cur.lo >= prev.lo - 1e-12
        assert cur.hi <= prev.hi + 1e-12
        prev = cur


def test_power_sum_range_matches_zeta_split():
    z = zeta_real(3.0, 5_000)
    head = power_sum_range(3.0, 1, 100)
    tail = zeta_tail(3.0, 99)
    assert tail.lo + head <= z.hi + 1e-12
    assert tail.hi + head >= z.lo - 1e-12


# ---------------------------------------------------------------------------
# Lambert W and the phi derivative
# ---------------------------------------------------------------------------

def test_lambert_at_e():
    assert lambert_w(math.e) == pytest.approx(1.0, abs=1e-12)


def test_lambert_omega():
    # bisection oracle for w e^w = 1
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    assert lambert_w(1.0) == pytest.approx(0.5 * (lo + hi), abs=1e-12)


@pytest.mark.parametrize("x", [0.1, 1.0, math.e, 10.0, 100.0, 1e4])
def test_lambert_identities(x):
    w = lambert_w(x)
    assert abs(w * math.exp(w) - x) <= 1e-10 * max(1.0, x)
    assert abs(phi_xlogx(x / w) - x) <= 1e-10 * max(1.0, x)


def test_lambert_against_mpmath():
    mp = pytest.importorskip("mpmath")
    for x in (0.05, 0.5, 2.0, 123.0, 1e6):
        assert lambert_w(x) == pytest.approx(float(mp.lambertw(x)), rel=1e-12)


def test_lambert_domain():
    with pytest.raises(DomainError):
        lambert_w(0.0)
    with pytest.raises(DomainError):
        lambert_w(-1.0)


def test_phi_deriv_at_e():
    assert phi_alpha_deriv(math.e, 0.5) == pytest.approx(math.exp(-0.5), rel=1e-13)


def test_phi_deriv_positive_and_alpha1_slope():
    # at the alpha -> 1 boundary the derivative reduces to log x + 1
    for x in (1.5, 4.0, 100.0):
        assert phi_alpha_deriv(x, 0.999999) == pytest.approx(math.log(x) + 1.0, rel=1e-4)
        assert phi_alpha_deriv(x, 0.5) > 0


def test_phi_deriv_domain():
    with pytest.raises(DomainError):
        phi_alpha_deriv(1.0, 0.5)
    with pytest.raises(DomainError):
        phi_alpha_deriv(2.0, 1.0)


def test_phi_deriv_monotone_decrease_grid():
    # finite differences of h on a log grid in [10, 1e6] at alpha = 0.5
    xs = np.geomspace(10.0, 1e6, 200)
    h = [phi_alpha_deriv(float(x), 0.5) for x in xs]
    assert all(h[i + 1] < h[i] for i in range(len(h) - 1))


def test_decrease_onset():
    assert decrease_onset(0.5) == 2.0
    onset = decrease_onset(0.9)
    # the sign factor must be nonpositive from onset - 1 on
    from cesdirichlet.kernels import _deriv_sign_factor

    assert _deriv_sign_factor(onset - 1.0, 0.9) <= 1e-9
    assert _deriv_sign_factor(onset * 10.0, 0.9) < 0


# ---------------------------------------------------------------------------
# smoothness
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def table100():
    return sieve_primes(100)


def test_smooth_one(table100):
    for r in (1, 2, 5):
        assert smooth_membership(1, r, table100)


def test_smooth_examples(table100):
    assert smooth_membership(12, 2, table100)      # 2^2 * 3
    assert not smooth_membership(10, 2, table100)  # factor 5
    assert smooth_membership(10, 3, table100)
    assert smooth_membership(97, 25, table100)
    assert not smooth_membership(97, 24, table100)


def test_smooth_undecidable():
    small = sieve_primes(10)  # primes 2, 3, 5, 7
    with pytest.raises(DomainError):
        smooth_membership(11 * 13, 20, small)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(min_value=1, max_value=5000), r=st.integers(min_value=1, max_value=15))
def test_smooth_matches_factorization(n, r):
    table = sieve_primes(100)
    limit = table.nth(r)
    m = n
    for p in table.primes:
        p = int(p)
        if p > limit:
            break
        while m % p == 0:
            m //= p
    assert smooth_membership(n, r, table) == (m == 1)

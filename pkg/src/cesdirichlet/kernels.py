"""Number-theoretic and special-function kernels.

Prime generation, membership in the p_1..p_r-smooth integers, certified
real zeta values and tails, the principal Lambert W branch, and the
derivative of (x log x)**alpha used by the prime-supported multiplier
test functions.

All functions here are pure; returned tables are immutable and safe to
share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .enclosure import EPS, Enclosure, ulp_down, ulp_up
from .errors import ConvergenceError, DomainError

# Explicit prefix length used to sharpen integral tail brackets.
DEFAULT_TAIL_PREFIX = 10_000

# Plain sieve above this limit would need too much memory; switch to
# segments of ~4M odd numbers (caps the working set around 128 MB).
_SEGMENT_THRESHOLD = 10 ** 8
_SEGMENT_SIZE = 1 << 22

_MAX_SIEVE_LIMIT = 10 ** 9

_SUM_CHUNK = 1 << 20


# ---------------------------------------------------------------------------
# Primes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeTable:
    """All primes <= limit, ascending.  ``primes`` is a read-only int64 array."""

    limit: int
    primes: np.ndarray

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return int(self.primes.size)

    def nth(self, r: int) -> int:
        """The r-th prime, 1-indexed (nth(1) == 2)."""
        if not 1 <= r <= self.primes.size:
            raise DomainError(f"prime index {r} outside table of {self.primes.size} primes")
        return int(self.primes[r - 1])


def _plain_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i:: i] = False
    return np.nonzero(flags)[0].astype(np.int64)


def _segmented_sieve(limit: int) -> np.ndarray:
    base = _plain_sieve(math.isqrt(limit))
    chunks = [base[base <= limit]]
    lo = math.isqrt(limit) + 1
    while lo <= limit:
        hi = min(lo + _SEGMENT_SIZE, limit + 1)
        flags = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            start = ((lo + p - 1) // p) * p
            if start < hi:
                flags[start - lo:: p] = False
        chunks.append((np.nonzero(flags)[0] + lo).astype(np.int64))
        lo = hi
    return np.concatenate(chunks)


def sieve_primes(limit: int) -> PrimeTable:
    """Complete table of primes <= limit (2 <= limit <= 1e9)."""
    if not isinstance(limit, (int, np.integer)) or limit < 2:
        raise DomainError(f"sieve limit must be an integer >= 2, got {limit!r}")
    if limit > _MAX_SIEVE_LIMIT:
        raise DomainError(f"sieve limit {limit} exceeds the {_MAX_SIEVE_LIMIT} memory guard")
    limit = int(limit)
    if limit <= _SEGMENT_THRESHOLD:
        primes = _plain_sieve(limit)
    else:
        primes = _segmented_sieve(limit)
    return PrimeTable(limit=limit, primes=primes)


def smooth_membership(n: int, r: int, table: PrimeTable) -> bool:
    """True iff every prime factor of n is among the first r primes.

    n == 1 is smooth for every r (empty product).  Raises DomainError
    when the table holds fewer than r primes and they do not already
    exhaust n, since membership is then undecidable from the table.
    """
    if n < 1:
        raise DomainError(f"smoothness is defined for positive integers, got {n}")
    if r < 1:
        raise DomainError(f"prime count r must be >= 1, got {r}")
    n = int(n)
    avail = min(r, len(table))
    for k in range(avail):
        p = int(table.primes[k])
        if p * p > n:
            break
        while n % p == 0:
            n //= p
    if n == 1:
        return True
    # n > 1: a single prime factor remains (loop broke at p*p > n) or we
    # ran out of table primes.
    if avail < r and n > int(table.primes[avail - 1] if avail else 1):
        # The remaining factor might be one of p_{avail+1}..p_r, which the
        # table does not cover.
        raise DomainError(
            f"prime table with {len(table)} primes cannot decide {r}-smoothness of remainder {n}"
        )
    pos = int(np.searchsorted(table.primes[:avail], n))
    return pos < avail and int(table.primes[pos]) == n


# ---------------------------------------------------------------------------
# Certified zeta values and tails
# ---------------------------------------------------------------------------

def power_sum_range(x: float, start: int, stop: int) -> float:
    """sum_{n=start}^{stop-1} n**-x, exact to rounding (chunked + fsum)."""
    if stop <= start:
        return 0.0
    parts = []
    for lo in range(start, stop, _SUM_CHUNK):
        hi = min(lo + _SUM_CHUNK, stop)
        ns = np.arange(lo, hi, dtype=np.float64)
        parts.append(float(np.sum(ns ** -x)))
    return math.fsum(parts)


def _integral_bracket(x: float, n: int) -> tuple[float, float]:
    # (n+1)^{1-x}/(x-1) <= sum_{k>n} k^-x <= n^{1-x}/(x-1)
    lo = (n + 1.0) ** (1.0 - x) / (x - 1.0)
    hi = float(n) ** (1.0 - x) / (x - 1.0)
    return ulp_down(lo, 2), ulp_up(hi, 2)


@lru_cache(maxsize=4096)
def zeta_tail(x: float, n: int, prefix: int = DEFAULT_TAIL_PREFIX) -> Enclosure:
    """Enclosure of sum_{k>n} k**-x for x > 1.

    The defining integral bracket is sharpened by summing ``prefix``
    terms explicitly; endpoints carry the 4-ulp-per-term slack.
    """
    if x <= 1.0:
        raise DomainError(f"zeta tail diverges for exponent {x} <= 1")
    if n < 1:
        raise DomainError(f"tail start must be >= 1, got {n}")
    if prefix < 0:
        raise DomainError("prefix length must be >= 0")
    explicit = power_sum_range(x, n + 1, n + prefix + 1)
    blo, bhi = _integral_bracket(x, n + prefix)
    slack = 4.0 * EPS * explicit
    return Enclosure(ulp_down(explicit + blo) - slack, ulp_up(explicit + bhi) + slack)


@lru_cache(maxsize=1024)
def zeta_real(x: float, terms: int) -> Enclosure:
    """Enclosure of zeta(x) for real x > 1 from ``terms`` explicit terms
    plus the integral tail bracket."""
    if x <= 1.0:
        raise DomainError(f"zeta(x) diverges for x = {x} <= 1")
    if terms < 1:
        raise DomainError(f"need at least one explicit term, got {terms}")
    partial = power_sum_range(x, 1, terms + 1)
    blo, bhi = _integral_bracket(x, terms)
    slack = 4.0 * EPS * partial
    return Enclosure(ulp_down(partial + blo) - slack, ulp_up(partial + bhi) + slack)


def zeta_auto(x: float, target_width: float = 1e-10) -> Enclosure:
    """zeta(x) with the explicit term count chosen for a target bracket
    width (capped at 2**25 terms; the achieved width may be larger for
    exponents very close to 1)."""
    # bracket width ~ n^-x, so n ~ target**(-1/x)
    terms = int(min(1 << 25, max(1000, math.ceil(target_width ** (-1.0 / x)))))
    return zeta_real(x, terms)


# ---------------------------------------------------------------------------
# Lambert W (principal branch on (0, inf)) and (x log x)**alpha
# ---------------------------------------------------------------------------

_LAMBERT_MAX_STEPS = 50


def lambert_w(x: float) -> float:
    """Principal-branch solution w of w * exp(w) = x, for x > 0.

    Halley refinement from the initial guess log(1 + x); the residual
    |w e^w - x| is driven below 1e-12 * max(1, x).
    """
    if not x > 0:
        raise DomainError(f"principal Lambert branch implemented for x > 0 only, got {x}")
    w = math.log1p(x)
    tol = 1e-12 * max(1.0, x)
    for _ in range(_LAMBERT_MAX_STEPS):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= tol:
            return w
        fp = ew * (w + 1.0)
        # Halley step: f'' = e^w (w + 2)
        denom = fp - f * (w + 2.0) / (2.0 * (w + 1.0))
        w -= f / denom
    ew = math.exp(w)
    if abs(w * ew - x) <= tol:
        return w
    raise ConvergenceError(f"Lambert W failed to converge for x = {x}")


def phi_xlogx(x: float) -> float:
    """phi(x) = x log x on [1, inf)."""
    if x < 1:
        raise DomainError(f"phi is defined on [1, inf), got {x}")
    return x * math.log(x)


def phi_alpha_deriv(x: float, alpha: float) -> float:
    """Derivative of phi**alpha:  alpha * (x log x)**(alpha-1) * (log x + 1).

    Strictly positive for x > 1, 0 < alpha < 1.
    """
    if x <= 1:
        raise DomainError(f"phi_alpha_deriv needs x > 1, got {x}")
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    lx = math.log(x)
    return alpha * (x * lx) ** (alpha - 1.0) * (lx + 1.0)


def _deriv_sign_factor(x: float, alpha: float) -> float:
    # (phi**alpha)'' has the sign of  alpha - 1 + log x / (log x + 1)^2.
    lx = math.log(x)
    return alpha - 1.0 + lx / (lx + 1.0) ** 2

def phi_alpha_deriv_vec(r: np.ndarray, alpha: float) -> np.ndarray:
    """Vectorised phi_alpha_deriv over an array of points > 1."""
    lr = np.log(r)
    return alpha * (r * lr) ** (alpha - 1.0) * (lr + 1.0)


def decrease_onset(beta: float) -> float:
    """Smallest x0 such that phi_alpha_deriv(., alpha) is nonincreasing on
    [x0 - 1, inf) for every alpha <= beta.

    The sign factor ``beta - 1 + log x/(log x + 1)**2`` is maximal at
    x = e with value beta - 3/4, so for beta <= 3/4 the derivative
    decreases on all of (1, inf) and the onset is 2.  For larger beta the
    onset is past the larger root of (1-beta) t^2 - (2 beta - 1) t + (1-beta)
    in t = log x.  Verified numerically on a log grid before returning.
    """
    if not 0 < beta < 1:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    if beta <= 0.75:
        onset = 2.0
    else:
        gamma = 1.0 - beta
        disc = 1.0 - 4.0 * gamma  # > 0 here
        t_plus = ((1.0 - 2.0 * gamma) + math.sqrt(disc)) / (2.0 * gamma)
        onset = math.exp(t_plus) + 1.0
    # numeric certification of the sign condition on a log grid past onset
    for k in range(0, 220, 4):
        x = (onset - 1.0) * (1.0 + 0.25 * k)
        if x > 1.0 and _deriv_sign_factor(x, beta) > 1e-13:
            raise ConvergenceError(
                f"decrease onset {onset} for beta={beta} failed the sign scan at x={x}"
            )
    return onset

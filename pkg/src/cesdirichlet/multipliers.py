"""Multiplier-norm machinery.

The multiplier norm of f on the Cesaro-coefficient space equals its
weighted-ell^1 norm  sum |a_n| n^{-1/q}; the operations here probe that
identity numerically from both sides:

* ``monomial_multiplier_check`` verifies the sharp two-sided monomial
  law  ||m^-s g|| <= m^{-1/q} ||g||  together with the single-monomial
  probe that approaches equality,
* ``build_test_function`` constructs the prime-supported test functions
  g (coefficients (phi^alpha)'(r) at the r-th prime, r >= r_m, where
  phi(x) = x log x), and ``multiplier_lower_estimate`` evaluates the
  certified quotient  ||f g|| / ||g||  which lower-bounds the multiplier
  norm for every admissible g,
* ``find_rm`` scans a prime table for the onset of the two-sided
  prime-counting window  m p_r/(m+1) <= r log r <= m p_r/(m-1).  The
  upper half holds unconditionally (r log r < p_r for every r), but the
  lower half requires p_r/(r log r) <= 1 + 1/m, which at desk scale is
  only reachable for small m: the ratio still sits at ~1.122 at the
  664579-th prime (the last below 10^7), so no verified window exists
  for m >= 9 within a 10^7 table.  Estimates built without a verified
  window carry ``window_verified=False`` and a ``heuristic-window``
  flag, with r_m anchored at the minimal admissible value m + 1,
* ``lemma_j_check`` verifies the phi^alpha summation sandwich used to
  control the prime sums,
* ``noncompactness_bound`` checks the quantitative lower bound
  ||m^{1/q} m^-s f|| >= (1/2) ||f||  behind the absence of nonzero
  compact multipliers,
* ``schur_test`` decides whether coefficientwise multiplication by a
  sequence family maps the space into the multiplier algebra, via the
  summability of  sup_{k>=n} |b_k|^q / k.

The quotient estimates converge to the multiplier norm only in a limit
whose entry threshold (n_m of order p_{r_m}^{m r_m}) is far beyond any
computation, so at desk scale they are heuristic approximations of a
rigorous limit and are flagged as such, never silently asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .enclosure import EPS, Enclosure, ulp_down, ulp_up
from .errors import DomainError, WindowNotFoundError
from .kernels import (
    PrimeTable,
    decrease_onset,
    phi_alpha_deriv_vec,
    phi_xlogx,
    lambert_w,
    power_sum_range,
    zeta_tail,
)
from .sequences import CoeffSeq, Exponent, ar_norm, ces_norm
from .series import DirichletPoly, convolve, truncate

HEURISTIC_WINDOW_FLAG = "heuristic-window"
DESK_SCALE_FLAG = "desk-scale"


@dataclass(frozen=True)
class MultiplierEstimate:
    """One certified lower-estimate run for the multiplier norm of f."""

    m: int
    alpha: float
    r_m: int
    prime_limit: int
    conv_limit: int
    ratio: float
    reference: float
    window_verified: bool
    flags: tuple = field(default_factory=tuple)

    def as_record(self) -> dict:
        return {
            "m": self.m,
            "alpha": self.alpha,
            "r_m": self.r_m,
            "prime_limit": self.prime_limit,
            "conv_limit": self.conv_limit,
            "ratio": self.ratio,
            "reference": self.reference,
            "window_verified": self.window_verified,
            "flag": ",".join(self.flags),
        }


@dataclass(frozen=True)
class SequenceSpec:
    """A coefficient-sequence family for the Schur test.

    kind 'finite'    -- an explicit finitely supported sequence,
    kind 'log_power' -- b_n = (log n)^-alpha for n >= 2 (alpha > 0),
    kind 'power'     -- b_n = n^-beta for n >= 1.
    """

    kind: str
    finite: CoeffSeq | None = None
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.kind == "finite":
            if self.finite is None:
                raise DomainError("finite spec needs a coefficient sequence")
        elif self.kind == "log_power":
            if self.alpha is None or self.alpha <= 0:
                raise DomainError("log_power spec needs alpha > 0")
        elif self.kind == "power":
            if self.beta is None:
                raise DomainError("power spec needs a real beta")
        else:
            raise DomainError(f"unknown sequence kind {self.kind!r}")

    @classmethod
    def from_finite(cls, seq: CoeffSeq) -> "SequenceSpec":
        return cls(kind="finite", finite=seq)

    @classmethod
    def from_log_power(cls, alpha: float) -> "SequenceSpec":
        return cls(kind="log_power", alpha=float(alpha))

    @classmethod
    def from_power(cls, beta: float) -> "SequenceSpec":
        return cls(kind="power", beta=float(beta))


# ---------------------------------------------------------------------------
# Monomial multipliers
# ---------------------------------------------------------------------------

def _random_poly(rng: np.random.Generator, max_len: int = 24, max_index: int = 200) -> DirichletPoly:
    size = int(rng.integers(1, max_len + 1))
    idx = rng.choice(np.arange(1, max_index + 1), size=size, replace=False)
    val = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return DirichletPoly(CoeffSeq(np.sort(idx).astype(np.int64), val))


def monomial_multiplier_check(
    m: int,
    e: Exponent,
    samples: int,
    j_probe: int,
    seed: int = 42,
    slack: float = 1e-10,
) -> tuple[bool, float]:
    """Probe the monomial multiplier norm m^{-1/q} from both sides.

    upper_ok: no random g violated  ||m^-s g|| <= m^{-1/q} ||g|| + slack
    (hi endpoint of the product against lo endpoint of the bound).
    lower_est: the certified quotient for the probe g = j^-s, which is
    at least ((j-1)/(j m))^{1/q} and approaches m^{-1/q} as j grows.
    """
    if m < 1:
        raise DomainError(f"monomial index must be >= 1, got {m}")
    if j_probe < 2:
        raise DomainError(f"probe index must be >= 2, got {j_probe}")
    if m == 1:
        return True, 1.0
    bound = float(m) ** (-1.0 / e.q)
    rng = np.random.default_rng(seed)
    upper_ok = True
    mono = DirichletPoly.monomial(m)
    for _ in range(samples):
        g = _random_poly(rng)
        prod = convolve(mono, g, m * g.max_index)
        lhs = ces_norm(prod.coeffs, e)
        rhs = ces_norm(g.coeffs, e)
        if lhs.hi > bound * rhs.lo + slack:
            upper_ok = False
    # single-monomial probe: ||m^-s j^-s|| / ||j^-s|| with exact supports
    num = ces_norm(CoeffSeq.from_pairs([(m * j_probe, 1.0)]), e)
    den = ces_norm(CoeffSeq.from_pairs([(j_probe, 1.0)]), e)
    lower_est = num.lo / den.hi
    return upper_ok, lower_est


# ---------------------------------------------------------------------------
# Prime-counting window and test functions
# ---------------------------------------------------------------------------

def find_rm(m: int, table: PrimeTable) -> int:
    """Smallest r_m > m such that
    m p_r/(m+1) <= r log r <= m p_r/(m-1) for every r from r_m through
    the end of the table.  The certification is empirical over the
    table range only.  Raises WindowNotFoundError when even the last
    index fails (the case for m >= 9 with tables up to 10^7)."""
    if m < 2:
        raise DomainError(f"window parameter m must be >= 2, got {m}")
    count = len(table)
    if count < m + 2:
        raise WindowNotFoundError(f"table with {count} primes is too short for m={m}")
    r = np.arange(1, count + 1, dtype=np.float64)
    v = r * np.log(r)  # r log r; r=1 gives 0 and fails the lower side
    pr = table.primes.astype(np.float64)
    ok = (m * pr / (m + 1.0) <= v) & (v <= m * pr / (m - 1.0))
    bad = np.nonzero(~ok)[0]
    r_m = m + 1 if bad.size == 0 else max(m + 1, int(bad[-1]) + 2)
    if r_m > count:
        raise WindowNotFoundError(
            f"no r in 1..{count} satisfies the m={m} window through the table end "
            f"(deviation at the end: {pr[-1] / v[-1] - 1.0:.4f} > 1/{m})"
        )
    return r_m


def build_test_function(
    m: int,
    alpha: float,
    e: Exponent,
    table: PrimeTable,
    r_m: int | None = None,
) -> DirichletPoly:
    """The prime-supported test function: coefficient (phi^alpha)'(r) at
    index p_r for r_m <= r <= pi(table.limit), zero elsewhere.

    alpha must lie in (1/(2q), 1/q) and r_m at or past the numerically
    certified onset of monotone decrease of (phi^alpha)'.  When r_m is
    not given the strict window scan is attempted first.
    """
    q = e.q
    if not (1.0 / (2.0 * q) < alpha < 1.0 / q):
        raise DomainError(f"alpha={alpha} outside (1/(2q), 1/q) = ({1/(2*q)}, {1/q})")
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    if r_m is None:
        r_m = find_rm(m, table)
    if r_m <= m:
        raise DomainError(f"r_m={r_m} must exceed m={m}")
    onset = decrease_onset(1.0 / q)
    if r_m < onset:
        raise DomainError(f"r_m={r_m} is before the monotone-decrease onset {onset}")
    count = len(table)
    if r_m > count:
        raise DomainError(f"r_m={r_m} exceeds the table ({count} primes)")
    rs = np.arange(r_m, count + 1, dtype=np.float64)
    values = phi_alpha_deriv_vec(rs, alpha).astype(np.complex128)
    support = table.primes[r_m - 1:].copy()
    return DirichletPoly(CoeffSeq(support, values, _validated=True))


def multiplier_lower_estimate(
    f: DirichletPoly,
    m: int,
    alpha: float,
    e: Exponent,
    table: PrimeTable,
    conv_limit: int | None = None,
    r_m: int | None = None,
) -> MultiplierEstimate:
    """Certified quotient  ces(f*g).lo / ces(g).hi  for the (m, alpha)
    test function g, a valid lower bound for the multiplier norm of f.

    ``reference`` records the weighted-ell^1 norm  sum |a_n| n^{-1/q},
    which the quotient can never exceed.  When the strict window scan
    fails, r_m falls back to the minimal admissible anchor m + 1 and the
    estimate is flagged.
    """
    if f.is_zero:
        raise DomainError("multiplier estimate needs a nonzero f")
    flags = [DESK_SCALE_FLAG]
    window_verified = True
    if r_m is None:
        try:
            r_m = find_rm(m, table)
        except WindowNotFoundError:
            r_m = m + 1
            window_verified = False
    else:
        try:
            window_verified = r_m >= find_rm(m, table)
        except WindowNotFoundError:
            window_verified = False
    if not window_verified:
        flags.append(HEURISTIC_WINDOW_FLAG)
    g = build_test_function(m, alpha, e, table, r_m=r_m)
    p_rm = table.nth(r_m)
    if conv_limit is None:
        conv_limit = table.limit * f.max_index
    if conv_limit < p_rm * f.max_index:
        raise DomainError(
            f"conv_limit {conv_limit} below p_rm * max support = {p_rm * f.max_index}"
        )
    prod = convolve(f, g, conv_limit)
    num = ces_norm(prod.coeffs, e)
    den = ces_norm(truncate(g, conv_limit).coeffs, e)
    ratio = num.lo / den.hi
    reference = ar_norm(f.coeffs, 1.0 / e.q)
    if ratio > reference + 1e-9:
        raise ArithmeticError(
            f"quotient {ratio} exceeds the weighted-ell1 reference {reference}; "
            "enclosure arithmetic is broken"
        )
    return MultiplierEstimate(
        m=m,
        alpha=alpha,
        r_m=int(r_m),
        prime_limit=table.limit,
        conv_limit=int(conv_limit),
        ratio=float(ratio),
        reference=float(reference),
        window_verified=window_verified,
        flags=tuple(flags),
    )


# ---------------------------------------------------------------------------
# The phi^alpha summation sandwich
# ---------------------------------------------------------------------------

def _phi_sublevel_top(c: float) -> int:
    """Largest integer r >= 1 with phi(r) <= c (0 when even r = 1 fails).

    Seeded by the exact inverse r = c / W(c), then corrected by direct
    phi comparison so boundary indices are classified by the float value
    of phi rather than by Lambert-W rounding.
    """
    if c <= 0:
        return 1 if c >= 0.0 else 0  # phi(1) = 0
    r = max(1, math.floor(c / lambert_w(c)))
    while phi_xlogx(float(r + 1)) <= c:
        r += 1
    while r > 1 and phi_xlogx(float(r)) > c:
        r -= 1
    return r


def lemma_j_check(
    r0: int,
    c1: float,
    c2: float,
    alpha: float,
    beta: float,
    j_set: list[int],
    rel_slack: float = 1e-12,
) -> bool:
    """Check  C2^alpha - phi(r0)^alpha <= sum_{r in J} (phi^alpha)'(r)
    <= C1^alpha - phi(r0-1)^alpha  for an index set J wedged between the
    sublevel sets {r >= r0 : phi(r) <= C2} and {r >= r0 : phi(r) <= C1}.

    The inclusions are validated before the sums are compared
    (DomainError on violation); phi-sublevel membership is decided via
    the exact inverse x = C/W(C) of phi.
    """
    if not (0 < alpha <= beta < 1):
        raise DomainError(f"need 0 < alpha <= beta < 1, got alpha={alpha}, beta={beta}")
    if r0 < 2:
        raise DomainError(f"r0 must be >= 2, got {r0}")
    phi_r0 = phi_xlogx(float(r0))
    if not (c1 >= c2 >= phi_r0):
        raise DomainError(f"need C1 >= C2 >= phi(r0), got {c1}, {c2}, {phi_r0}")
    onset = decrease_onset(beta)
    if r0 < onset:
        raise DomainError(f"r0={r0} is before the monotone-decrease onset {onset}")
    js = sorted(set(int(r) for r in j_set))
    if js and js[0] < r0:
        raise DomainError(f"J contains {js[0]} < r0={r0}")
    top1 = _phi_sublevel_top(c1)
    # indices sitting numerically on the C2 boundary are optional members,
    # not required ones (phi(r) == C2 decides either way in real arithmetic)
    top2 = _phi_sublevel_top(c2 * (1.0 - 1e-12))
    j_must = set(range(r0, top2 + 1))
    j_may = set(range(r0, top1 + 1))
    j_given = set(js)
    if not j_must <= j_given:
        raise DomainError(f"J misses required indices {sorted(j_must - j_given)[:5]}")
    if not j_given <= j_may:
        raise DomainError(f"J contains excluded indices {sorted(j_given - j_may)[:5]}")
    if js:
        rs = np.array(js, dtype=np.float64)
        total = float(np.sum(phi_alpha_deriv_vec(rs, alpha)))
    else:
        total = 0.0
    lo = c2 ** alpha - phi_r0 ** alpha
    hi = c1 ** alpha - phi_xlogx(float(r0 - 1)) ** alpha if r0 > 1 else c1 ** alpha
    pad = rel_slack * max(1.0, abs(total))
    return lo - pad <= total <= hi + pad


# ---------------------------------------------------------------------------
# Non-compactness inequality
# ---------------------------------------------------------------------------

def noncompactness_bound(f: DirichletPoly, m: int, e: Exponent,
                         slack: float = 1e-10) -> bool:
    """True iff  ||m^-s f||.hi >= (m^{1/p} / (2m)) ||f||.lo - slack,
    i.e. the normalized form  ||m^{1/q} m^-s f|| >= (1/2) ||f||."""
    if f.is_zero:
        raise DomainError("the bound is vacuous for f = 0")
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    prod = convolve(DirichletPoly.monomial(m), f, m * f.max_index)
    lhs = ces_norm(prod.coeffs, e)
    rhs = ces_norm(f.coeffs, e)
    factor = float(m) ** (1.0 / e.p) / (2.0 * m)
    return lhs.hi >= factor * rhs.lo - slack


# ---------------------------------------------------------------------------
# Schur multipliers into the weighted-ell^1 algebra
# ---------------------------------------------------------------------------

def _schur_finite(seq: CoeffSeq, q: float) -> tuple[str, Enclosure]:
    # the sup-sequence vanishes past the support, so the full sum is finite
    # and exactly computable whatever the horizon
    if seq.is_empty:
        return "schur", Enclosure(0.0, 0.0)
    w = seq.abs_values() ** q / seq.idx.astype(np.float64)
    suffix_max = np.maximum.accumulate(w[::-1])[::-1]
    gaps = np.diff(np.concatenate(([0], seq.idx)))
    total = float(math.fsum(suffix_max * gaps))
    return "schur", Enclosure(ulp_down(total, 4), ulp_up(total, 4))


def _integral_log_tail(c: float, n: int) -> Enclosure:
    # integral brackets for sum_{k>n} 1/(k log^c k), c > 1
    lo = math.log(n + 1.0) ** (1.0 - c) / (c - 1.0)
    hi = math.log(float(n)) ** (1.0 - c) / (c - 1.0)
    return Enclosure(ulp_down(lo, 2), ulp_up(hi, 2))


def schur_test(spec: SequenceSpec, e: Exponent, horizon: int) -> tuple[str, Enclosure]:
    """Decide whether  sum_n sup_{k>=n} |b_k|^q / k  is finite.

    verdict 'schur': the sum converges; the enclosure certifies its
    value (explicit terms to the horizon plus an integral tail bracket).
    verdict 'not_schur': a divergent minorant is established; the
    enclosure then holds only the horizon-truncated partial sum (a
    lower bound).  'inconclusive' is reserved for families the
    bracketing cannot decide; the built-in kinds are always decided.
    """
    if horizon < 2:
        raise DomainError(f"horizon must be >= 2, got {horizon}")
    q = e.q
    if spec.kind == "finite":
        return _schur_finite(spec.finite, q)

    if spec.kind == "log_power":
        c = q * spec.alpha
        # t_n = (log n)^-c / n is decreasing from n = 2, so sup_{k>=n} t_k = t_n;
        # the n = 1 term equals t_2 (the sequence starts at 2).
        ns = np.arange(2, horizon + 1, dtype=np.float64)
        terms = np.log(ns) ** -c / ns
        partial = float(terms[0] + math.fsum(terms))
        if c > 1.0:
            tail = _integral_log_tail(c, horizon)
            total = (tail + partial).widen(4.0 * EPS * partial)
            return "schur", total
        # c <= 1: termwise at least 1/(n log n) for n >= 3 up to a constant,
        # and sum 1/(n log n) diverges
        return "not_schur", Enclosure(ulp_down(partial, 4), ulp_up(partial, 4))

    if spec.kind == "power":
        beta = spec.beta
        exponent = q * beta + 1.0
        if beta > 0:
            # t_n = n^-(q beta + 1) decreasing, exponent > 1
            partial = power_sum_range(exponent, 1, horizon + 1)
            total = (zeta_tail(exponent, horizon) + partial).widen(4.0 * EPS * partial)
            return "schur", total
        if beta == 0:
            partial = power_sum_range(1.0, 1, horizon + 1)
            return "not_schur", Enclosure(ulp_down(partial, 4), ulp_up(partial, 4))
        # beta < 0: |b_k|^q / k grows without bound, each sup is infinite;
        # report the horizon-truncated sup-sum as the divergent witness
        t_top = float(horizon) ** (-exponent)
        partial = t_top * horizon
        return "not_schur", Enclosure(ulp_down(partial, 4), ulp_up(partial, 4))

    return "inconclusive", Enclosure(0.0, 0.0)

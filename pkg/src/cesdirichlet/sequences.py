"""Finitely supported coefficient sequences and their sequence-space norms.

A ``CoeffSeq`` stores sparse complex coefficients (a_n) indexed from 1.
The norms implemented here:

* ``ces_norm``   -- (sum_n ((1/n) sum_{k<=n} |a_k|)^p)^(1/p), returned as a
                    certified enclosure since the outer sum is infinite even
                    for finite support,
* ``lp_norm``    -- the ordinary little-ell-p norm (exact finite sum),
* ``dq_norm``    -- (sum_n sup_{k>=n} |b_k|^q)^(1/q), the dual-side norm built
                    from the least decreasing majorant (exact for finite
                    support),
* ``ar_norm``    -- the weighted absolute sum  sum |a_n| n^-r,
* ``hardy_ratio``-- the averaging-operator ratio, bounded by p/(p-1),
* ``m_n_functionals_p2`` -- the two quadratic-form functionals equivalent to
                    the p = 2 norm.

Cesaro prefix sums are evaluated densely between support indices in
chunks, so memory stays flat regardless of the largest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .enclosure import EPS, Enclosure, ulp_down, ulp_up
from .errors import DomainError, ResourceLimitError
from .kernels import DEFAULT_TAIL_PREFIX, zeta_tail

_CHUNK = 1 << 20

_MN_SUPPORT_GUARD = 10_000


@dataclass(frozen=True)
class Exponent:
    """A pair of conjugate exponents, 1/p + 1/q = 1 with 1 < p < inf."""

    p: float
    q: float

    def __post_init__(self):
        if not (1.0 < self.p < math.inf):
            raise DomainError(f"p must lie in (1, inf), got {self.p}")
        if abs(1.0 / self.p + 1.0 / self.q - 1.0) > 1e-15:
            raise DomainError(f"(p, q) = ({self.p}, {self.q}) are not conjugate")

    @classmethod
    def from_p(cls, p: float) -> "Exponent":
        p = float(p)
        if not (1.0 < p < math.inf):
            raise DomainError(f"p must lie in (1, inf), got {p}")
        return cls(p=p, q=p / (p - 1.0))


class CoeffSeq:
    """Sparse complex sequence: strictly increasing indices >= 1, no zeros."""

    __slots__ = ("idx", "val")

    def __init__(self, idx: np.ndarray, val: np.ndarray, _validated: bool = False):
        if not _validated:
            idx = np.asarray(idx, dtype=np.int64)
            val = np.asarray(val, dtype=np.complex128)
            if idx.ndim != 1 or val.ndim != 1 or idx.size != val.size:
                raise DomainError("indices and values must be 1-d arrays of equal length")
            if idx.size:
                if idx.min() < 1:
                    raise DomainError("coefficient indices must be >= 1")
                order = np.argsort(idx, kind="stable")
                idx, val = idx[order], val[order]
                if np.any(np.diff(idx) == 0):
                    dup = int(idx[np.nonzero(np.diff(idx) == 0)[0][0]])
                    raise DomainError(f"duplicate coefficient index {dup}")
                keep = val != 0
                idx, val = idx[keep], val[keep]
        idx.setflags(write=False)
        val.setflags(write=False)
        object.__setattr__(self, "idx", idx)
        object.__setattr__(self, "val", val)

    def __setattr__(self, *a):
        raise AttributeError("CoeffSeq is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def from_pairs(cls, pairs) -> "CoeffSeq":
        pairs = list(pairs)
        idx = np.array([int(n) for n, _ in pairs], dtype=np.int64)
        val = np.array([complex(v) for _, v in pairs], dtype=np.complex128)
        return cls(idx, val)

    @classmethod
    def from_dict(cls, d: dict) -> "CoeffSeq":
        return cls.from_pairs(d.items())

    @classmethod
    def empty(cls) -> "CoeffSeq":
        return cls(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.complex128),
                   _validated=True)

    # -- views ---------------------------------------------------------
    def __len__(self) -> int:
        return int(self.idx.size)

    @property
    def is_empty(self) -> bool:
        return self.idx.size == 0

    @property
    def max_index(self) -> int:
        return int(self.idx[-1]) if self.idx.size else 0

    def entries(self) -> list[tuple[int, complex]]:
        return [(int(n), complex(v)) for n, v in zip(self.idx, self.val)]

    def abs_values(self) -> np.ndarray:
        return np.abs(self.val)

    def scaled(self, c: complex) -> "CoeffSeq":
        return CoeffSeq(self.idx.copy(), self.val * c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        return (self.idx.shape == other.idx.shape
                and bool(np.all(self.idx == other.idx))
                and bool(np.all(self.val == other.val)))

    def __hash__(self):
        return hash((self.idx.tobytes(), self.val.tobytes()))

    def __repr__(self):
        if len(self) <= 6:
            body = ", ".join(f"{n}:{v:g}" if v.imag else f"{n}:{v.real:g}"
                             for n, v in self.entries())
        else:
            body = f"{len(self)} entries, max index {self.max_index}"
        return f"CoeffSeq({body})"


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------

def _prefix_power_sum(idx: np.ndarray, cumabs: np.ndarray, p: float) -> tuple[float, float]:
    """sum_{n = idx[0]}^{idx[-1]-1} (A(n)/n)**p  with A the running absolute
    prefix sum, evaluated densely in chunks.

    Returns (value, accumulated_term_magnitude) for the slack budget.
    """
    first, last = int(idx[0]), int(idx[-1])
    parts = []
    square = p == 2.0
    for lo in range(first, last, _CHUNK):
        hi = min(lo + _CHUNK, last)
        ns = np.arange(lo, hi, dtype=np.float64)
        pos = np.searchsorted(idx, np.arange(lo, hi, dtype=np.int64), side="right") - 1
        ratios = cumabs[pos] / ns
        terms = ratios * ratios if square else ratios ** p
        parts.append(float(np.sum(terms)))
    total = math.fsum(parts)
    return total, total  # all terms positive


def ces_norm(a: CoeffSeq, e: Exponent, tail_prefix: int = DEFAULT_TAIL_PREFIX) -> Enclosure:
    """Certified enclosure of the Cesaro-mean norm of ``a``.

    With N the largest support index and A_n the absolute prefix sums,
    the p-th power equals the explicit sum over n < N plus
    A_N**p * (N**-p + tail), where the tail over n > N is bracketed by
    ``zeta_tail``.
    """
    if a.is_empty:
        return Enclosure(0.0, 0.0)
    p = e.p
    w = a.abs_values()
    cum = np.cumsum(w)
    explicit, magnitude = _prefix_power_sum(a.idx, cum, p)
    n_last = a.max_index
    a_total = float(cum[-1])
    tail = zeta_tail(p, n_last, prefix=tail_prefix) + float(n_last) ** -p
    head = a_total ** p
    slack = 4.0 * EPS * (magnitude + head * tail.hi)
    powered = Enclosure(
        ulp_down(explicit + head * tail.lo) - slack,
        ulp_up(explicit + head * tail.hi) + slack,
    )
    return powered.root(p)


def lp_norm(a: CoeffSeq, p: float) -> float:
    """Exact (sum |a_n|**p)**(1/p) for p >= 1."""
    if p < 1:
        raise DomainError(f"lp_norm needs p >= 1, got {p}")
    if a.is_empty:
        return 0.0
    w = a.abs_values()
    return float(math.fsum(w ** p)) ** (1.0 / p)


def least_decreasing_majorant(b: CoeffSeq, horizon: int) -> np.ndarray:
    """The smallest nonincreasing sequence dominating |b|, on 1..horizon.

    ``horizon`` must reach the last support index; entries beyond the
    support are zero.
    """
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    if horizon < b.max_index:
        raise DomainError(
            f"horizon {horizon} is smaller than the largest support index {b.max_index}"
        )
    dense = np.zeros(horizon, dtype=np.float64)
    if not b.is_empty:
        dense[b.idx - 1] = b.abs_values()
        dense = np.maximum.accumulate(dense[::-1])[::-1]
    return dense


def dq_norm(b: CoeffSeq, e: Exponent) -> float:
    """(sum_n sup_{k>=n} |b_k|**q)**(1/q), exact for finite support.

    The majorant is constant between support indices, so the dense sum
    collapses to suffix maxima weighted by index gaps.
    """
    if b.is_empty:
        return 0.0
    q = e.q
    w = b.abs_values()
    suffix_max = np.maximum.accumulate(w[::-1])[::-1]
    gaps = np.diff(np.concatenate(([0], b.idx)))
    return float(math.fsum(suffix_max ** q * gaps)) ** (1.0 / q)


def ar_norm(a: CoeffSeq, r: float) -> float:
    """Weighted absolute coefficient sum  sum |a_n| * n**-r (exact)."""
    if a.is_empty:
        return 0.0
    return float(math.fsum(a.abs_values() * a.idx.astype(np.float64) ** -r))


def hardy_ratio(a: CoeffSeq, e: Exponent) -> float:
    """ces_norm(a).hi / lp_norm(a, p); at most p/(p-1) up to enclosure slack."""
    if a.is_empty:
        raise DomainError("hardy ratio is undefined for the zero sequence")
    return ces_norm(a, e).hi / lp_norm(a, e.p)


def m_n_functionals_p2(a: CoeffSeq) -> tuple[float, float]:
    """The two functionals equivalent to the p = 2 Cesaro norm.

    M(a) = (sum_{i,j} |a_i||a_j| / max(i,j))**(1/2)   (definitional double sum)
    N(a) = (sum_n (|a_n|/n) sum_{k<=n} |a_k|)**(1/2)  (single pass)

    Support is guarded at 10**4 entries since M is quadratic in the
    support size.
    """
    m = len(a)
    if m > _MN_SUPPORT_GUARD:
        raise ResourceLimitError(
            f"support size {m} exceeds the {_MN_SUPPORT_GUARD} guard for the quadratic functional"
        )
    if a.is_empty:
        return 0.0, 0.0
    w = a.abs_values()
    idx_f = a.idx.astype(np.float64)
    # M: blocked double sum over max(i, j)
    parts = []
    block = max(1, (1 << 22) // m)
    for lo in range(0, m, block):
        hi = min(lo + block, m)
        denom = np.maximum.outer(idx_f[lo:hi], idx_f)
        parts.append(float(np.sum(np.outer(w[lo:hi], w) / denom)))
    m_val = math.sqrt(math.fsum(parts))
    n_val = math.sqrt(math.fsum((w / idx_f) * np.cumsum(w)))
    return m_val, n_val

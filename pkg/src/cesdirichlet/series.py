"""Dirichlet polynomials as functions.

A ``DirichletPoly`` wraps a coefficient sequence interpreted as
f(s) = sum a_n n^-s.  Pointwise products of two such polynomials
correspond to the divisor convolution of their coefficients, which is
what ``convolve`` computes.  ``qr_project`` keeps exactly the
coefficients whose index factors over the first r primes; the
projection is multiplicative on full-support products.

Phase convention for evaluation off the real axis:
n^{-it} = exp(-i t log n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kernels import PrimeTable, smooth_membership
from .sequences import CoeffSeq


@dataclass(frozen=True)
class EvalPoint:
    """A point s = sigma + i t of the complex plane."""

    sigma: float
    t: float = 0.0


@dataclass(frozen=True)
class DirichletPoly:
    coeffs: CoeffSeq

    @classmethod
    def from_pairs(cls, pairs) -> "DirichletPoly":
        return cls(CoeffSeq.from_pairs(pairs))

    @classmethod
    def one(cls) -> "DirichletPoly":
        return cls.from_pairs([(1, 1.0)])

    @classmethod
    def monomial(cls, m: int, c: complex = 1.0) -> "DirichletPoly":
        """c * m^-s."""
        return cls.from_pairs([(m, c)])

    @property
    def max_index(self) -> int:
        return self.coeffs.max_index

    @property
    def is_zero(self) -> bool:
        return self.coeffs.is_empty

    def __eq__(self, other):
        if not isinstance(other, DirichletPoly):
            return NotImplemented
        return self.coeffs == other.coeffs


def convolve(f: DirichletPoly, g: DirichletPoly, limit: int) -> DirichletPoly:
    """Coefficients c_n = sum_{k | n} a_k b_{n/k} for all n <= limit, exact.

    Iterates the sparse support of f against the support of g, so the
    cost is the number of index pairs whose product stays below the
    limit.
    """
    if limit < 1:
        raise DomainError(f"convolution limit must be >= 1, got {limit}")
    fa, ga = f.coeffs, g.coeffs
    if fa.is_empty or ga.is_empty:
        return DirichletPoly(CoeffSeq.empty())
    idx_parts = []
    val_parts = []
    for i, a in zip(fa.idx, fa.val):
        cap = limit // int(i)
        take = np.searchsorted(ga.idx, cap, side="right")
        if take == 0:
            continue
        idx_parts.append(int(i) * ga.idx[:take])
        val_parts.append(a * ga.val[:take])
    if not idx_parts:
        return DirichletPoly(CoeffSeq.empty())
    idx = np.concatenate(idx_parts)
    val = np.concatenate(val_parts)
    order = np.argsort(idx, kind="stable")
    idx, val = idx[order], val[order]
    boundaries = np.concatenate(([True], np.diff(idx) != 0))
    starts = np.nonzero(boundaries)[0]
    merged = np.add.reduceat(val, starts)
    return DirichletPoly(CoeffSeq(idx[starts], merged))


def evaluate(f: DirichletPoly, s: EvalPoint) -> complex:
    """f(s) = sum a_n n^-sigma exp(-i t log n), exact to rounding."""
    c = f.coeffs
    if c.is_empty:
        return 0.0 + 0.0j
    base = c.idx.astype(np.float64)
    radial = base ** -s.sigma
    if s.t == 0.0:
        return complex(np.sum(c.val * radial))
    phase = np.exp(-1j * s.t * np.log(base))
    return complex(np.sum(c.val * radial * phase))


def translate(f: DirichletPoly, r: float) -> DirichletPoly:
    """The shifted series f(s + r): coefficients a_n n^-r."""
    c = f.coeffs
    if c.is_empty:
        return f
    weights = c.idx.astype(np.float64) ** -r
    return DirichletPoly(CoeffSeq(c.idx.copy(), c.val * weights))


def truncate(f: DirichletPoly, n: int) -> DirichletPoly:
    """Drop all coefficients with index > n."""
    if n < 1:
        raise DomainError(f"truncation index must be >= 1, got {n}")
    c = f.coeffs
    take = np.searchsorted(c.idx, n, side="right")
    return DirichletPoly(CoeffSeq(c.idx[:take].copy(), c.val[:take].copy(),
                                  _validated=True))


def qr_project(f: DirichletPoly, r: int, table: PrimeTable) -> DirichletPoly:
    """Keep exactly the coefficients whose index is p_1..p_r smooth.

    The table must suffice to decide smoothness of every support index
    (DomainError otherwise, propagated from the membership test).
    """
    c = f.coeffs
    if c.is_empty:
        return f
    keep = np.fromiter(
        (smooth_membership(int(n), r, table) for n in c.idx),
        dtype=bool, count=len(c),
    )
    return DirichletPoly(CoeffSeq(c.idx[keep].copy(), c.val[keep].copy(),
                                  _validated=True))

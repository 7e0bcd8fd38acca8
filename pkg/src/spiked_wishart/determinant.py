"""Exact-sign determinants of small SignedLog matrices and Vandermonde products."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .signedlog import ONE, ZERO, SignedLog, signedlog_sum

__all__ = ["SmallMatrix", "det", "vandermonde", "det_fraction", "batched_slogdet"]

MAX_ORDER = 8
_PERMUTATION_MAX_ORDER = 6


def _as_signedlog(v) -> SignedLog:
    return v if isinstance(v, SignedLog) else SignedLog.from_real(v)


@dataclass(frozen=True)
class SmallMatrix:
    """Square grid of SignedLog entries, order 0..8 (0 only as the empty matrix)."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(_as_signedlog(v) for v in row) for row in self.entries)
        order = len(rows)
        if order > MAX_ORDER:
            raise ValueError(f"SmallMatrix order {order} exceeds {MAX_ORDER}")
        if any(len(r) != order for r in rows):
            raise ValueError("SmallMatrix must be square")
        object.__setattr__(self, "entries", rows)

    @property
    def order(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "SmallMatrix":
        return cls(tuple(tuple(r) for r in rows))

    def transpose(self) -> "SmallMatrix":
        return SmallMatrix(tuple(zip(*self.entries)))

    def to_array(self) -> np.ndarray:
        return np.array([[v.to_real() for v in row] for row in self.entries])


def _parity(perm: tuple) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


_PERMS = {
    k: [(p, _parity(p)) for p in itertools.permutations(range(k))]
    for k in range(1, _PERMUTATION_MAX_ORDER + 1)
}


def det(m) -> SignedLog:
    """Determinant of a :class:`SmallMatrix` (or nested sequence of entries).

    Orders up to 6 use the full permutation expansion so that the sign is
    exact and zero entries prune whole terms; orders 7-8 use Gaussian
    elimination with pivots chosen by largest log-magnitude.
    """
    if not isinstance(m, SmallMatrix):
        m = SmallMatrix.from_rows(m)
    k = m.order
    if k == 0:
        return ONE
    a = m.entries
    if k == 1:
        return a[0][0]
    if k <= _PERMUTATION_MAX_ORDER:
        terms = []
        for perm, sgn in _PERMS[k]:
            sign = sgn
            logmag = 0.0
            for i, j in enumerate(perm):
                v = a[i][j]
                if v.sign == 0:
                    break
                sign *= v.sign
                logmag += v.logmag
            else:
                terms.append(SignedLog(sign, logmag))
        return signedlog_sum(terms)
    return _det_elimination([list(r) for r in a])


def _det_elimination(a: list) -> SignedLog:
    k = len(a)
    result = ONE
    for col in range(k):
        piv = max(range(col, k), key=lambda r: a[r][col].logmag if a[r][col].sign else -np.inf)
        if a[piv][col].sign == 0:
            return ZERO
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        for r in range(col + 1, k):
            if a[r][col].sign == 0:
                continue
            f = a[r][col] / p
            a[r] = [a[r][c] - f * a[col][c] if c > col else ZERO for c in range(k)]
    return result


def vandermonde(nodes: Sequence[float]) -> SignedLog:
    """``prod_{i<k} (x_k - x_i)``; exact zero when a node repeats."""
    out = ONE
    for i in range(len(nodes)):
        for k in range(i + 1, len(nodes)):
            d = nodes[k] - nodes[i]
            if d == 0:
                return ZERO
            out = out * SignedLog.from_real(d)
    return out


def det_fraction(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact rational determinant (Gaussian elimination over ``Fraction``)."""
    a = [[Fraction(v) for v in r] for r in rows]
    k = len(a)
    if k == 0:
        return Fraction(1)
    result = Fraction(1)
    for col in range(k):
        piv = next((r for r in range(col, k) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result *= p
        for r in range(col + 1, k):
            f = a[r][col] / p
            if f:
                for c in range(col + 1, k):
                    a[r][c] -= f * a[col][c]
    return result


def batched_slogdet(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sign and log|det| over a stack ``(..., k, k)``; ``k == 0`` gives det 1."""
    mats = np.asarray(mats, dtype=float)
    if mats.shape[-1] == 0:
        shape = mats.shape[:-2]
        return np.ones(shape), np.zeros(shape)
    sign, logdet = np.linalg.slogdet(mats)
    return sign, logdet

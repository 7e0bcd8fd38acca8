"""Generalized Laguerre polynomials, modified Bessel I_k and pFq series.

Scalar entry points return :class:`SignedLog` (Laguerre, pFq) or ``float``
(Bessel).  The ``*_array`` variants are numpy-vectorised over the argument
and are what the distribution code uses on quadrature grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .signedlog import ONE, ZERO, SignedLog, pochhammer, signedlog_sum

__all__ = [
    "HypSeriesParams",
    "HypergeometricError",
    "laguerre",
    "laguerre_array",
    "bessel_i",
    "bessel_i_array",
    "hyp_pfq",
    "hyp_pfq_log_array",
]

MAX_TERMS = 1_000_000
STOP_RTOL = 1e-17
STOP_RUN = 3
_RESCALE = 1e200
_LOG_RESCALE = math.log(_RESCALE)


class HypergeometricError(ArithmeticError):
    """Raised for divergent or ill-posed hypergeometric series."""


def _is_nonpos_int(a: float) -> bool:
    return a <= 0 and float(a).is_integer()


# --------------------------------------------------------------------------
# Laguerre


def laguerre(M: int, rho: float, z: float) -> SignedLog:
    """Generalized Laguerre polynomial ``L_M^{(rho)}(z)``.

    Evaluated from the explicit finite sum

        L_M^{(rho)}(z) = (rho+1)_M / M! * sum_j (-M)_j / (rho+1)_j * z^j / j!

    term by term in signed-log form.  For ``z <= 0`` every term is positive.
    For ``z > 0`` the sum alternates and loses digits to cancellation (about
    four at M = 15, z = 4), so there the stable upward three-term recurrence
    is used instead, with rescaling to stay in range.
    """
    if M < 0:
        raise ValueError("Laguerre degree must be nonnegative")
    if rho <= -1:
        raise ValueError(f"Laguerre parameter must exceed -1, got {rho}")
    if M == 0:
        return ONE
    if z > 0:
        return _laguerre_recurrence_signedlog(M, rho, z)
    lead = pochhammer(rho + 1, M) / SignedLog(1, math.lgamma(M + 1))
    zl = SignedLog.from_real(z)
    terms = []
    for j in range(M + 1):
        if j > 0 and zl.is_zero():
            break
        c = pochhammer(-M, j) / (pochhammer(rho + 1, j) * SignedLog(1, math.lgamma(j + 1)))
        terms.append(c * zl**j)
    return lead * signedlog_sum(terms)


def _laguerre_recurrence_signedlog(M: int, rho: float, z: float) -> SignedLog:
    prev, cur = 1.0, 1.0 + rho - z
    scale = 0.0
    for k in range(1, M):
        prev, cur = cur, ((2 * k + 1 + rho - z) * cur - (k + rho) * prev) / (k + 1)
        if abs(cur) > _RESCALE:
            prev /= _RESCALE
            cur /= _RESCALE
            scale += _LOG_RESCALE
    if cur == 0.0:
        return ZERO
    return SignedLog(1 if cur > 0 else -1, scale + math.log(abs(cur)))


def laguerre_recurrence(M: int, rho: float, z: float) -> float:
    """Three-term recurrence evaluation; a debug cross-check for :func:`laguerre`."""
    if M == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + rho - z
    for k in range(1, M):
        prev, cur = cur, ((2 * k + 1 + rho - z) * cur - (k + rho) * prev) / (k + 1)
    return cur


def laguerre_array(M: int, rho: float, z) -> np.ndarray:
    """Vectorised ``L_M^{(rho)}(z)`` in plain floats (explicit sum)."""
    if M < 0:
        raise ValueError("Laguerre degree must be nonnegative")
    if rho <= -1:
        raise ValueError(f"Laguerre parameter must exceed -1, got {rho}")
    z = np.asarray(z, dtype=float)
    # coefficient of z^j: (-1)^j binom(M+rho, M-j) / j!
    coefs = np.empty(M + 1)
    for j in range(M + 1):
        logc = (
            math.lgamma(M + rho + 1)
            - math.lgamma(M - j + 1)
            - math.lgamma(rho + j + 1)
            - math.lgamma(j + 1)
        )
        coefs[j] = (-1) ** j * math.exp(logc)
    out = np.zeros_like(z)
    for c in coefs[::-1]:
        out = out * z + c
    return out


# --------------------------------------------------------------------------
# Modified Bessel I_k (first kind, integer order)


def bessel_i(k: int, x: float) -> float:
    """``I_k(x)`` for integer ``k`` and ``x >= 0`` from its power series."""
    return float(bessel_i_array(k, np.asarray(float(x))))


def bessel_i_array(k: int, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("bessel_i requires x >= 0")
    k = abs(int(k))
    out = np.zeros_like(x)
    pos = x > 0
    if k == 0:
        out[~pos] = 1.0
    if not np.any(pos):
        return out
    xp = x[pos]
    half = 0.5 * xp
    q = half * half
    # log of the j=0 term; the running term is kept relative to it
    log0 = k * np.log(half) - math.lgamma(k + 1)
    term = np.ones_like(xp)
    total = np.ones_like(xp)
    j = 0
    quiet = np.zeros(xp.shape, dtype=int)
    while True:
        term = term * q / ((j + 1) * (j + 1 + k))
        total = total + term
        j += 1
        small = term <= STOP_RTOL * total
        quiet = np.where(small, quiet + 1, 0)
        if np.all(quiet >= STOP_RUN):
            break
        if j > MAX_TERMS:
            raise HypergeometricError("Bessel series did not converge")
    out[pos] = np.exp(log0 + np.log(total))
    return out


# --------------------------------------------------------------------------
# Generalized hypergeometric pFq


@dataclass(frozen=True)
class HypSeriesParams:
    numerator_params: Sequence[float] = field(default_factory=tuple)
    denominator_params: Sequence[float] = field(default_factory=tuple)
    argument: float = 0.0


def hyp_pfq(params: HypSeriesParams) -> SignedLog:
    """Sum ``pFq(a; b; x)`` by the term recursion

        t_0 = 1,  t_{k+1} = t_k * prod(a+k) / prod(b+k) * x / (k+1).

    Terminating series (a nonpositive-integer numerator parameter) are summed
    exactly to their last term.  Otherwise ``|x| < 1`` is required and the
    sum stops once three consecutive terms fall below ``1e-17`` of the
    partial sum.
    """
    a = [float(v) for v in params.numerator_params]
    b = [float(v) for v in params.denominator_params]
    x = float(params.argument)
    stop = None
    for v in a:
        if _is_nonpos_int(v):
            stop = int(-v) if stop is None else min(stop, int(-v))
    if stop is None and not abs(x) < 1.0:
        raise HypergeometricError(f"non-terminating series needs |x| < 1, got {x}")
    if x == 0.0:
        for v in b:
            if _is_nonpos_int(v):
                raise HypergeometricError(f"denominator parameter {v} is a nonpositive integer")
        return ONE

    t = 1.0
    s = 1.0
    scale = 0.0
    quiet = 0
    k = 0
    while True:
        if stop is not None and k >= stop:
            break
        num = 1.0
        for v in a:
            num *= v + k
        den = 1.0
        for v in b:
            if v + k == 0.0:
                raise HypergeometricError(
                    f"denominator parameter {v} reaches zero at term {k + 1}"
                )
            den *= v + k
        t = t * num / den * x / (k + 1)
        s += t
        k += 1
        if abs(s) > _RESCALE or abs(t) > _RESCALE:
            t /= _RESCALE
            s /= _RESCALE
            scale += _LOG_RESCALE
        if stop is None:
            quiet = quiet + 1 if abs(t) <= STOP_RTOL * abs(s) else 0
            if quiet >= STOP_RUN:
                break
        if k >= MAX_TERMS:
            raise HypergeometricError(f"series did not converge in {MAX_TERMS} terms")
    if s == 0.0:
        return ZERO
    return SignedLog(1 if s > 0 else -1, scale + math.log(abs(s)))


def hyp_pfq_log_array(num, den, x, rgamma_param: float | None = None) -> np.ndarray:
    """Natural log of a positive-term pFq series, vectorised over ``x >= 0``.

    With ``rgamma_param = r`` each term is further divided by ``Gamma(r+k)``,
    i.e. the series is regularised in that parameter (``r`` may then be a
    nonpositive integer; the leading terms vanish).  All parameters must be
    positive from the first nonvanishing term on, so that every term is
    nonnegative; ``-inf`` is returned where the sum is zero.
    """
    num = [float(v) for v in num]
    den = [float(v) for v in den]
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x >= 1):
        raise HypergeometricError("positive-term series requires 0 <= x < 1")
    k0 = 0
    if rgamma_param is not None and _is_nonpos_int(rgamma_param):
        k0 = int(1 - rgamma_param)
    if any(v + k0 <= 0 for v in num + den):
        raise HypergeometricError("series terms are not all positive")

    # log of term k0 without the x^k0 factor
    lt0 = -math.lgamma(k0 + 1)
    for v in num:
        lt0 += math.lgamma(v + k0) - math.lgamma(v)
    for v in den:
        lt0 -= math.lgamma(v + k0) - math.lgamma(v)
    if rgamma_param is not None:
        lt0 -= math.lgamma(rgamma_param + k0)

    out = np.full(x.shape, -np.inf)
    pos = x > 0
    if k0 == 0:
        out[~pos] = lt0
    if not np.any(pos):
        return out
    xp = x[pos]
    t = np.ones_like(xp)
    s = np.ones_like(xp)
    scale = np.zeros_like(xp)
    quiet = np.zeros(xp.shape, dtype=int)
    k = k0
    while True:
        r = 1.0
        for v in num:
            r *= v + k
        for v in den:
            r /= v + k
        if rgamma_param is not None:
            r /= rgamma_param + k
        t = t * (r / (k + 1)) * xp
        s = s + t
        k += 1
        big = s > _RESCALE
        if np.any(big):
            t = np.where(big, t / _RESCALE, t)
            s = np.where(big, s / _RESCALE, s)
            scale = scale + np.where(big, _LOG_RESCALE, 0.0)
        quiet = np.where(t <= STOP_RTOL * s, quiet + 1, 0)
        if np.all(quiet >= STOP_RUN):
            break
        if k - k0 >= MAX_TERMS:
            raise HypergeometricError(f"series did not converge in {MAX_TERMS} terms")
    out[pos] = lt0 + k0 * np.log(xp) + scale + np.log(s)
    return out

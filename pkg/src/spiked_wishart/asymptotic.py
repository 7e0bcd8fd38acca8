"""Hard-edge limits (m - n = alpha fixed, n -> inf, eta = rho / n).

Both CDFs reduce to one survival kernel

    S(y) = exp(-y) * det[I_{j-i}(2 sqrt(y))]_{i,j=1..alpha},

with ``P(mu n lambda_min > x) -> S(x / mu)`` and ``P(V <= v) -> S(1 / (mu v))``
for ``V = kappa^2 / (mu n^3)``.  The spike scale ``rho`` does not enter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .determinant import batched_slogdet
from .special import bessel_i_array

__all__ = [
    "AsymptoticParams",
    "survival_kernel",
    "cdf_scaled_min_eig",
    "cdf_scaled_kappa",
    "pdf_scaled_kappa",
]


@dataclass(frozen=True)
class AsymptoticParams:
    alpha: int
    mu: float = 1.0
    rho: float = 0.0  # provenance only: the limits are rho-free

    def __post_init__(self):
        if int(self.alpha) != self.alpha or self.alpha < 0:
            raise ValueError(f"alpha must be a nonnegative integer, got {self.alpha}")
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not self.rho >= 0:
            raise ValueError(f"rho must be >= 0, got {self.rho}")


def _bessel_det(alpha: int, shift: int, arg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """sign, log of ``det[I_{j-i+shift}(arg)]`` (alpha x alpha) for a 1-D ``arg``."""
    mats = np.empty((arg.size, alpha, alpha))
    orders = {}
    for i in range(alpha):
        for j in range(alpha):
            k = j - i + shift
            if k not in orders:
                orders[k] = bessel_i_array(k, arg)
            mats[:, i, j] = orders[k]
    return batched_slogdet(mats)


def survival_kernel(y, alpha: int):
    """``exp(-y) det[I_{j-i}(2 sqrt(y))]`` for ``y >= 0`` (vectorised)."""
    y = np.asarray(y, dtype=float)
    flat = np.atleast_1d(y).ravel()
    sign, logdet = _bessel_det(alpha, 0, 2.0 * np.sqrt(flat))
    out = np.where(np.isinf(flat), 0.0, sign * np.exp(-flat + logdet))
    return out.reshape(y.shape)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(40)
_SMALL_Y = 1.0


def _lower_tail(y: np.ndarray, alpha: int) -> np.ndarray:
    """``1 - S(y) = int_0^y exp(-t) det[I_{j-i+2}(2 sqrt t)] dt`` for ``0 <= y <= 1``.

    Near ``y = 0`` the kernel is ``1 - O(y^(alpha+1))`` and subtracting it from
    one would leave only rounding noise; the integrand is positive and entire
    in ``t``, so fixed Gauss-Legendre keeps full relative accuracy.
    """
    if y.size == 0:
        return np.zeros(0)
    half = 0.5 * y[:, None]
    t = (half * (_GL_X[None, :] + 1.0)).ravel()
    sign, logdet = _bessel_det(alpha, 2, 2.0 * np.sqrt(t))
    f = (sign * np.exp(-t + logdet)).reshape(half.shape[0], -1)
    return (f @ _GL_W) * half[:, 0]


def _kernel_pair(y: np.ndarray, alpha: int) -> tuple[np.ndarray, np.ndarray]:
    """``(S(y), 1 - S(y))``, each accurate where it is the small one."""
    surv = np.empty_like(y)
    comp = np.empty_like(y)
    small = y <= _SMALL_Y
    if alpha == 0:
        comp[small] = -np.expm1(-y[small])
    else:
        comp[small] = _lower_tail(y[small], alpha)
    surv[small] = 1.0 - comp[small]
    surv[~small] = survival_kernel(y[~small], alpha)
    comp[~small] = 1.0 - surv[~small]
    return surv, comp


def _wrap(v, fn):
    arr = np.asarray(v, dtype=float)
    out = fn(np.atleast_1d(arr).ravel()).reshape(arr.shape)
    return float(out) if arr.ndim == 0 else out


def cdf_scaled_min_eig(x, p: AsymptoticParams):
    """Limiting ``P(mu n lambda_min <= x)``."""

    def f(x):
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = _kernel_pair(x[pos] / p.mu, p.alpha)[1]
        return out

    return _wrap(x, f)


def cdf_scaled_kappa(v, p: AsymptoticParams):
    """Limiting ``P(kappa^2 / (mu n^3) <= v)``."""

    def f(v):
        out = np.zeros_like(v)
        pos = v > 0
        out[pos] = _kernel_pair(1.0 / (p.mu * v[pos]), p.alpha)[0]
        return out

    return _wrap(v, f)


def pdf_scaled_kappa(v, p: AsymptoticParams):
    """Limiting density of ``kappa^2 / (mu n^3)``."""

    def f(v):
        out = np.zeros_like(v)
        pos = v > 0
        vp = v[pos]
        y = 1.0 / (p.mu * vp)
        sign, logdet = _bessel_det(p.alpha, 2, 2.0 * np.sqrt(y))
        out[pos] = sign * np.exp(-y + logdet + np.log(y) - np.log(vp))
        return out

    return _wrap(v, f)

"""Exact finite-(n, alpha) laws of kappa^2 = tr(W) / lambda_min and of lambda_min.

The density of kappa^2 is a nested sum over index tuples ``(k_1..k_alpha)``
of ``(alpha+1) x (alpha+1)`` determinants whose first column holds a
regularised 3F2 and whose other columns hold reciprocal factorials.  Since
the 3F2 column depends on the tuple only through ``S = sum(k)``, expanding
each determinant along its first column gives

    pdf(z) = prefactor(z) * sum_{i, S} W[i, S] (z-n)^{-S} G_i(z; S)

with ``W`` exact rationals depending on ``(n, alpha)`` only.  ``W`` is built
once with ``fractions.Fraction`` (no cancellation error) and cached; the
per-tuple SignedLog determinant route is kept as :func:`pdf_kappa_sq_direct`
for cross-checking.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .determinant import SmallMatrix, batched_slogdet, det, det_fraction, vandermonde
from .ensemble import Dims, SpikeParams
from .quadrature import DEFAULT_ABS_TOL, integrate
from .signedlog import ONE, ZERO, SignedLog, log_factorial, pochhammer, signedlog_sum
from .special import HypSeriesParams, hyp_pfq, hyp_pfq_log_array, laguerre, laguerre_array

__all__ = [
    "ExactPdfParams",
    "NestedIndexIterator",
    "TooExpensiveError",
    "pdf_kappa_sq",
    "pdf_kappa_sq_direct",
    "pdf_kappa_sq_alpha0",
    "pdf_kappa_sq_alpha1",
    "pdf_kappa_sq_white",
    "pdf_kappa_sq_white_direct",
    "cdf_kappa_sq",
    "kappa_sq_cdf_interpolant",
    "pdf_min_eig",
    "cdf_min_eig",
    "mgf_kappa_sq",
    "R_det",
    "T_det",
    "Q_det",
]

MAX_TUPLES = 10**8


class TooExpensiveError(ValueError):
    """The nested index sum is too large to evaluate."""


@dataclass(frozen=True)
class ExactPdfParams:
    dims: Dims
    spike: SpikeParams

    def __post_init__(self):
        if self.dims.n < 2:
            raise ValueError("kappa^2 laws need n >= 2 (n = 1 gives kappa^2 = 1)")

    @classmethod
    def of(cls, n: int, alpha: int, eta: float) -> "ExactPdfParams":
        return cls(Dims(n, alpha), SpikeParams(eta))

    @property
    def n(self) -> int:
        return self.dims.n

    @property
    def alpha(self) -> int:
        return self.dims.alpha

    @property
    def eta(self) -> float:
        return self.spike.eta

    @property
    def c_eta(self) -> float:
        return self.spike.c_eta


class NestedIndexIterator:
    """All tuples ``(k_1, ..., k_alpha)`` with ``0 <= k_j <= n + alpha - j - 1``."""

    def __init__(self, n: int, alpha: int):
        self.n = n
        self.alpha = alpha
        self.limits = tuple(n + alpha - j - 1 for j in range(1, alpha + 1))

    def __len__(self) -> int:
        return math.prod(l + 1 for l in self.limits)

    def __iter__(self):
        return itertools.product(*(range(l + 1) for l in self.limits))

    def max_sum(self) -> int:
        return sum(self.limits)


def _check_cost(n: int, alpha: int) -> NestedIndexIterator:
    it = NestedIndexIterator(n, alpha)
    if len(it) > MAX_TUPLES:
        raise TooExpensiveError(
            f"(n={n}, alpha={alpha}) needs {len(it)} index tuples; limit is {MAX_TUPLES}"
        )
    return it


def _inv_factorial(k: int) -> Fraction:
    return Fraction(0) if k < 0 else Fraction(1, math.factorial(k))


def _fraction_log(w: Fraction) -> tuple[int, float]:
    if w == 0:
        return 0, -math.inf
    return (1 if w > 0 else -1), math.log(abs(w.numerator)) - math.log(w.denominator)


@lru_cache(maxsize=64)
def _index_weights(n: int, alpha: int) -> tuple:
    """Exact ``W[i, S]`` as ``((i, S, sign, log|W|), ...)`` for nonzero weights."""
    it = _check_cost(n, alpha)
    acc: dict = {}
    for k in it:
        s = sum(k)
        coef = Fraction(1)
        for j, kj in enumerate(k, start=1):
            coef *= Fraction(
                math.factorial(n + alpha - j - 1),
                math.factorial(j + kj + 1) * math.factorial(kj),
            )
        rows = [
            [_inv_factorial(n + i - j - kj - 1) for j, kj in enumerate(k, start=1)]
            for i in range(alpha + 1)
        ]
        for i in range(alpha + 1):
            minor = det_fraction(rows[:i] + rows[i + 1:])
            if minor:
                key = (i, s)
                acc[key] = acc.get(key, Fraction(0)) + (-1) ** i * coef * minor
    out = []
    for (i, s), w in sorted(acc.items()):
        sign, logw = _fraction_log(w)
        if sign:
            out.append((i, s, sign, logw))
    return tuple(out)


def _b_param(n: int, alpha: int, i: int, s: int) -> int:
    return n * n + n * alpha - alpha + i - s - 1


def _log_g_series(n: int, alpha: int, i: int, s: int, x: np.ndarray) -> np.ndarray:
    """log of ``3F2(n+i-1, n+i+1, n^2+n*alpha+i; n+i, b; x) / Gamma(b)``."""
    b = _b_param(n, alpha, i, s)
    return hyp_pfq_log_array(
        [n + i - 1, n + i + 1, n * n + n * alpha + i], [n + i], x, rgamma_param=b
    )


def _as_array(z):
    arr = np.asarray(z, dtype=float)
    return arr, arr.ndim == 0


def _finish(out: np.ndarray, scalar: bool):
    return float(out) if scalar else out


def pdf_kappa_sq(z, p: ExactPdfParams):
    """Exact density of kappa^2 at ``z`` (scalar or array)."""
    z, scalar = _as_array(z)
    zf = np.atleast_1d(z)
    out = np.zeros(zf.shape)
    n, alpha, eta, c = p.n, p.alpha, p.eta, p.c_eta
    sup = zf > n
    if not np.any(sup):
        return _finish(out.reshape(z.shape), scalar)
    zz = zf[sup]
    nn = n * n + n * alpha
    log_zn = np.log(zz - n)
    log_zc = np.log(zz - c)
    x = c * (zz - n) / (zz - c)
    log_x = np.log(x) if c > 0 else np.full_like(zz, -np.inf)
    log_pref = (
        log_factorial(n + alpha)
        + (nn - alpha - 2) * log_zn
        - (n + alpha) * math.log1p(eta)
        - nn * log_zc
    )
    logs = []
    signs = []
    series_cache: dict = {}
    for i, s, sign_w, log_w in _index_weights(n, alpha):
        if i > 0 and c == 0:
            continue  # x^i with x = 0
        key = (i, s)
        if key not in series_cache:
            series_cache[key] = _log_g_series(n, alpha, i, s, x)
        lg = (
            log_w
            - s * log_zn
            + (i * log_x if i else 0.0)
            + log_factorial(nn + i - 1)
            - log_factorial(n + i - 1)
            + series_cache[key]
        )
        logs.append(lg)
        signs.append(sign_w * (-1) ** i)
    if logs:
        L = np.array(logs)
        sg = np.array(signs, dtype=float)[:, None]
        top = np.max(L, axis=0)
        finite = np.isfinite(top)
        top_safe = np.where(finite, top, 0.0)
        acc = np.sum(sg * np.exp(L - top_safe), axis=0)
        with np.errstate(divide="ignore"):
            val = np.sign(acc) * np.exp(log_pref + top_safe + np.log(np.abs(acc)))
        out[sup] = np.where(finite, val, 0.0)
    return _finish(out.reshape(z.shape), scalar)


def _g_signedlog(n: int, alpha: int, i: int, s: int, z: float, c: float) -> SignedLog:
    """``G_i(z, eta)`` of the determinant's first column, as a SignedLog."""
    x = c * (z - n) / (z - c)
    if i > 0 and x == 0.0:
        return ZERO
    b = _b_param(n, alpha, i, s)
    nn = n * n + n * alpha
    head = SignedLog(1, log_factorial(nn + i - 1) - log_factorial(n + i - 1))
    head = head * SignedLog.from_real(-x) ** i
    if b > 0:
        f = hyp_pfq(HypSeriesParams([n + i - 1, n + i + 1, nn + i], [n + i, b], x))
        return head * f / SignedLog(1, log_factorial(b - 1))
    # Gamma(b) has a pole: use the regularised series
    lg = float(_log_g_series(n, alpha, i, s, np.array([x]))[0])
    return head * SignedLog(1, lg) if lg > -math.inf else ZERO


def pdf_kappa_sq_direct(z: float, p: ExactPdfParams) -> float:
    """Reference evaluation: one SignedLog determinant per index tuple."""
    n, alpha, eta, c = p.n, p.alpha, p.eta, p.c_eta
    z = float(z)
    if z <= n:
        return 0.0
    it = _check_cost(n, alpha)
    nn = n * n + n * alpha
    zn = SignedLog.from_real(z - n)
    pref = (
        SignedLog(1, log_factorial(n + alpha))
        * zn ** (nn - alpha - 2)
        / (SignedLog.from_real(1 + eta) ** (n + alpha) * SignedLog.from_real(z - c) ** nn)
    )
    g_cache: dict = {}
    terms = []
    for k in it:
        s = sum(k)
        coef = ONE
        for j, kj in enumerate(k, start=1):
            coef = coef * SignedLog(
                1,
                log_factorial(n + alpha - j - 1) - log_factorial(j + kj + 1) - log_factorial(kj),
            )
        rows = []
        for i in range(alpha + 1):
            if (i, s) not in g_cache:
                g_cache[(i, s)] = _g_signedlog(n, alpha, i, s, z, c)
            row = [g_cache[(i, s)]]
            for j, kj in enumerate(k, start=1):
                arg = n + i - j - kj - 1
                row.append(ZERO if arg < 0 else SignedLog(1, -log_factorial(arg)))
            rows.append(row)
        terms.append(coef * zn ** (-s) * det(SmallMatrix.from_rows(rows)))
    return (pref * signedlog_sum(terms)).to_real()


def _hyp3f2_log(a, b, x: np.ndarray) -> np.ndarray:
    return hyp_pfq_log_array(a, b, x)


def pdf_kappa_sq_alpha0(z, p: ExactPdfParams):
    """Closed form for ``alpha = 0``."""
    if p.alpha != 0:
        raise ValueError(f"pdf_kappa_sq_alpha0 needs alpha = 0, got {p.alpha}")
    z, scalar = _as_array(z)
    zf = np.atleast_1d(z)
    out = np.zeros(zf.shape)
    n, eta, c = p.n, p.eta, p.c_eta
    sup = zf > n
    zz = zf[sup]
    x = c * (zz - n) / (zz - c)
    lv = (
        math.log(n * (n * n - 1))
        + (n * n - 2) * np.log(zz - n)
        - n * math.log1p(eta)
        - n * n * np.log(zz - c)
        + _hyp3f2_log([n - 1, n + 1, n * n], [n, n * n - 1], x)
    )
    out[sup] = np.exp(lv)
    return _finish(out.reshape(z.shape), scalar)


def pdf_kappa_sq_alpha1(z, p: ExactPdfParams):
    """Closed form for ``alpha = 1`` (two finite sums of 3F2 terms)."""
    if p.alpha != 1:
        raise ValueError(f"pdf_kappa_sq_alpha1 needs alpha = 1, got {p.alpha}")
    z, scalar = _as_array(z)
    zf = np.atleast_1d(z)
    out = np.zeros(zf.shape)
    n, eta, c = p.n, p.eta, p.c_eta
    sup = zf > n
    zz = zf[sup]
    log_zn = np.log(zz - n)
    log_zc = np.log(zz - c)
    x = c * (zz - n) / (zz - c)
    nn = n * n + n
    logs, signs = [], []
    # first sum
    lead = math.log(n) + log_factorial(nn - 1) + pochhammer(3, n - 1).logmag - log_factorial(n - 1)
    for j in range(n):
        pj = pochhammer(-n + 1, j) * (-1) ** j
        if pj.is_zero():
            continue
        lt = (
            lead
            + pj.logmag
            - log_factorial(j)
            - pochhammer(3, j).logmag
            - log_factorial(nn - 3 - j)
            + (nn - 3 - j) * log_zn
            + _hyp3f2_log([n - 1, n + 1, nn], [n, nn - 2 - j], x)
        )
        logs.append(lt)
        signs.append(pj.sign)
    # second sum, carries c / (z - c)
    if c > 0 and n >= 2:
        lead2 = (
            math.log(n + 1) + log_factorial(nn) + pochhammer(3, n - 2).logmag - log_factorial(n - 2)
        )
        for j in range(n - 1):
            pj = pochhammer(-n + 2, j) * (-1) ** j
            if pj.is_zero():
                continue
            lt = (
                lead2
                + math.log(c)
                - log_zc
                + pj.logmag
                - log_factorial(j)
                - pochhammer(3, j).logmag
                - log_factorial(nn - 2 - j)
                + (nn - 2 - j) * log_zn
                + _hyp3f2_log([n, n + 2, nn + 1], [n + 1, nn - 1 - j], x)
            )
            logs.append(lt)
            signs.append(pj.sign)
    L = np.array(logs)
    sg = np.array(signs, dtype=float)[:, None]
    top = L.max(axis=0)
    acc = np.sum(sg * np.exp(L - top), axis=0)
    out[sup] = acc * np.exp(top - nn * log_zc - math.log(n) - (n + 1) * math.log1p(eta))
    return _finish(out.reshape(z.shape), scalar)


@lru_cache(maxsize=64)
def _white_weights(n: int, alpha: int) -> tuple:
    """Exact per-``S`` weights of the eta = 0 formula: ``((S, sign, log|W|), ...)``."""
    it = _check_cost(n, alpha)
    acc: dict = {}
    for k in it:
        w = Fraction(1)
        for j, kj in enumerate(k, start=1):
            big_n = n + alpha - j - 1
            # (-1)^k (-N)_k = N! / (N-k)!,   (j+2)_k = (j+k+1)! / (j+1)!
            w *= Fraction(
                math.factorial(big_n) * math.factorial(j + 1),
                math.factorial(big_n - kj) * math.factorial(j + kj + 1) * math.factorial(kj),
            )
        cs = [j + kj for j, kj in enumerate(k, start=1)]
        vd = math.prod(cs[b] - cs[a] for a in range(alpha) for b in range(a + 1, alpha))
        s = sum(k)
        acc[s] = acc.get(s, Fraction(0)) + w * vd
    out = []
    for s, w in sorted(acc.items()):
        sign, logw = _fraction_log(w)
        if sign:
            out.append((s, sign, logw))
    return tuple(out)


def _white_log_prefactor(n: int, alpha: int) -> float:
    mn = n * (n + alpha)
    return math.lgamma(mn) + sum(
        math.log(n + j) - log_factorial(j + 1) for j in range(alpha + 1)
    )


def pdf_kappa_sq_white(z, dims: Dims):
    """Density of kappa^2 for identity covariance (eta = 0).

    The per-index denominator is ``(j+2)_{k_j} k_j!``.  Writing it as
    ``(j+1)_{k_j}`` breaks normalisation for every alpha >= 1; the ``(j+2)``
    form agrees with the general spiked density at eta = 0 to rounding.
    """
    n, alpha = dims.n, dims.alpha
    if n < 2:
        raise ValueError("kappa^2 laws need n >= 2")
    z, scalar = _as_array(z)
    zf = np.atleast_1d(z)
    out = np.zeros(zf.shape)
    sup = zf > n
    zz = zf[sup]
    mn = n * (n + alpha)
    log_zn = np.log(zz - n)
    logs, signs = [], []
    for s, sign, logw in _white_weights(n, alpha):
        g = mn - alpha - 1 - s
        if g <= 0:
            continue  # 1/Gamma at a pole
        logs.append(logw - s * log_zn - math.lgamma(g))
        signs.append(sign)
    if logs:
        L = np.array(logs)
        sg = np.array(signs, dtype=float)[:, None]
        top = L.max(axis=0)
        acc = np.sum(sg * np.exp(L - top), axis=0)
        lp = _white_log_prefactor(n, alpha) + (mn - alpha - 2) * log_zn - mn * np.log(zz)
        out[sup] = acc * np.exp(lp + top)
    return _finish(out.reshape(z.shape), scalar)


def pdf_kappa_sq_white_direct(z: float, dims: Dims) -> float:
    """Per-tuple SignedLog evaluation of the eta = 0 formula (reference path)."""
    n, alpha = dims.n, dims.alpha
    z = float(z)
    if z <= n:
        return 0.0
    mn = n * (n + alpha)
    zn = SignedLog.from_real(z - n)
    terms = []
    for k in _check_cost(n, alpha):
        s = sum(k)
        g = mn - alpha - 1 - s
        if g <= 0:
            continue
        t = vandermonde([j + kj for j, kj in enumerate(k, start=1)])
        for j, kj in enumerate(k, start=1):
            t = t * SignedLog.from_real(-1) ** kj * pochhammer(-n - alpha + j + 1, kj)
            t = t / (pochhammer(j + 2, kj) * SignedLog(1, log_factorial(kj)))
        terms.append(t * zn ** (-s) / SignedLog(1, math.lgamma(g)))
    pref = (
        SignedLog(1, _white_log_prefactor(n, alpha))
        * zn ** (mn - alpha - 2)
        / SignedLog.from_real(z) ** mn
    )
    return (pref * signedlog_sum(terms)).to_real()


def cdf_kappa_sq(z, p: ExactPdfParams, abs_tol: float = DEFAULT_ABS_TOL, rel_tol: float = 1e-9):
    """``P(kappa^2 <= z)`` by adaptive quadrature of the density, clamped to [0, 1].

    Array input is integrated cumulatively between sorted abscissae.
    """
    z, scalar = _as_array(z)
    zf = np.atleast_1d(z).ravel()
    f = lambda t: pdf_kappa_sq(t, p)  # noqa: E731
    order = np.argsort(zf)
    out = np.zeros(zf.shape)
    acc = 0.0
    prev = float(p.n)
    for idx in order:
        zi = zf[idx]
        if zi <= p.n:
            continue
        if math.isinf(zi):
            acc += integrate(f, prev, math.inf, abs_tol=abs_tol, rel_tol=rel_tol).value
            prev = math.inf
        elif zi > prev:
            acc += integrate(f, prev, zi, abs_tol=abs_tol, rel_tol=rel_tol).value
            prev = zi
        out[idx] = acc
    out = np.clip(out, 0.0, 1.0)
    return _finish(out.reshape(z.shape), scalar)


def kappa_sq_cdf_interpolant(p: ExactPdfParams, z_max: float, nodes: int = 400):
    """Fast vectorised CDF on ``[n, z_max]`` for large sample comparisons.

    Exact CDF values on geometric nodes (cumulative adaptive quadrature)
    joined by cubic Hermite pieces using the density as derivative.  Above
    ``z_max`` the tail is integrated once and the CDF is linear to 1 at inf.
    """
    n = p.n
    zs = n + np.geomspace(1e-6, z_max - n, nodes - 1)
    zs = np.concatenate([[float(n)], zs])
    vals = np.empty_like(zs)
    vals[0] = 0.0
    f = lambda t: pdf_kappa_sq(t, p)  # noqa: E731
    acc = 0.0
    for i in range(1, zs.size):
        acc += integrate(f, zs[i - 1], zs[i], abs_tol=1e-13, rel_tol=1e-12).value
        vals[i] = acc
    spline = CubicHermiteSpline(zs, vals, pdf_kappa_sq(zs, p))

    def cdf(z):
        z = np.asarray(z, dtype=float)
        out = np.where(z <= n, 0.0, spline(np.clip(z, n, z_max)))
        beyond = z > z_max
        if np.any(beyond):
            out = np.array(out, dtype=float, ndmin=1)
            zb = np.atleast_1d(z)[np.atleast_1d(beyond)]
            out[np.atleast_1d(beyond)] = [vals[-1] + integrate(f, z_max, zi).value for zi in zb]
            out = out.reshape(z.shape)
        return np.clip(out, 0.0, 1.0)

    return cdf


# --------------------------------------------------------------------------
# minimum eigenvalue


def _lag_array(M: int, rho: float, z: np.ndarray) -> np.ndarray:
    # negative degree: the polynomial vanishes, as 1/(negative)! does in the pdf sums
    return np.zeros_like(z) if M < 0 else laguerre_array(M, rho, z)


def _lag(M: int, rho: float, z: float) -> SignedLog:
    return ZERO if M < 0 else laguerre(M, rho, z)


def _first_col_pow(eta: float, i: int) -> float:
    return 1.0 if i == 0 else (-eta) ** i


def pdf_min_eig(x, p: ExactPdfParams | None = None, *, dims: Dims | None = None, spike=None):
    """Density of the smallest eigenvalue (``(alpha+1)``-order determinant)."""
    n, alpha, eta, c = _mineig_params(p, dims, spike)
    x, scalar = _as_array(x)
    xf = np.atleast_1d(x).ravel()
    out = np.zeros(xf.shape)
    pos = xf > 0
    xp = xf[pos]
    mats = np.empty((xp.size, alpha + 1, alpha + 1))
    for i in range(alpha + 1):
        mats[:, i, 0] = (n + i - c) * _first_col_pow(eta, i)
        for j in range(1, alpha + 1):
            mats[:, i, j] = _lag_array(n + i - j - 1, j + 1, -xp)
    sign, logdet = batched_slogdet(mats)
    lv = (
        log_factorial(n - 1)
        - log_factorial(n + alpha - 1)
        - alpha * math.log1p(eta)
        + alpha * np.log(xp)
        - xp * (n - c)
        + logdet
    )
    out[pos] = sign * np.exp(lv)
    if alpha == 0:
        out[xf == 0] = n - c
    return _finish(out.reshape(x.shape), scalar)


def _laguerre_ld(M: int, rho: int, t: np.ndarray) -> np.ndarray:
    """``L_M^{(rho)}(-t)`` in long double from exact rational coefficients."""
    out = np.zeros_like(t)
    for j in range(M, -1, -1):
        c = Fraction(math.comb(M + rho, M - j), math.factorial(j))
        out = out * t + np.longdouble(c.numerator) / np.longdouble(c.denominator)
    return out


def _det_ld(a: np.ndarray) -> np.ndarray:
    """Batched determinant by partial-pivot elimination, kept in long double."""
    a = a.copy()
    k = a.shape[-1]
    result = np.ones(a.shape[0], dtype=a.dtype)
    rows = np.arange(a.shape[0])
    for col in range(k):
        piv = col + np.argmax(np.abs(a[:, col:, col]), axis=1)
        swap = piv != col
        if np.any(swap):
            tmp = a[rows, col].copy()
            a[rows, col] = a[rows, piv]
            a[rows, piv] = tmp
            result = np.where(swap, -result, result)
        p = a[:, col, col]
        result = result * p
        safe = np.where(p == 0, 1, p)
        f = a[:, col + 1:, col] / safe[:, None]
        a[:, col + 1:, :] -= f[:, :, None] * a[:, col:col + 1, :]
    return result


def _survival_min_eig(xp: np.ndarray, n: int, alpha: int, eta: float, c: float) -> np.ndarray:
    # long double: 1 - survival cancels badly for small x when alpha is large
    t = xp.astype(np.longdouble)
    mats = np.empty((xp.size, alpha + 1, alpha + 1), dtype=np.longdouble)
    e = np.longdouble(eta)
    for i in range(alpha + 1):
        mats[:, i, 0] = 1 if i == 0 else (-e) ** i
        for j in range(1, alpha + 1):
            mats[:, i, j] = _laguerre_ld(n + i - j, j - 1, t)
    d = _det_ld(mats)
    return np.exp(-t * (n - np.longdouble(c))) * d / (1 + e) ** alpha


def cdf_min_eig(x, p: ExactPdfParams | None = None, *, dims: Dims | None = None, spike=None):
    """``P(lambda_min <= x)``."""
    n, alpha, eta, c = _mineig_params(p, dims, spike)
    x, scalar = _as_array(x)
    xf = np.atleast_1d(x).ravel()
    out = np.zeros(xf.shape)
    pos = xf > 0
    out[pos] = (1 - _survival_min_eig(xf[pos], n, alpha, eta, c)).astype(float)
    return _finish(out.reshape(x.shape), scalar)


def _mineig_params(p, dims, spike):
    if p is not None:
        dims, spike = p.dims, p.spike
    if dims is None or spike is None:
        raise TypeError("pass ExactPdfParams or both dims= and spike=")
    return dims.n, dims.alpha, spike.eta, spike.c_eta


# --------------------------------------------------------------------------
# Laplace transform E[exp(-s kappa^2)]


def _mgf_integrand(s: float, n: int, alpha: int, eta: float, c: float):
    lead = log_factorial(n - 1) - log_factorial(n + alpha - 1) - (alpha + 1) * math.log1p(eta)

    def f(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        xp = x[pos]
        xs = xp + s
        d = xs - c * xp
        mats = np.empty((xp.size, alpha + 1, alpha + 1))
        for i in range(1, alpha + 2):
            # sigma_i / eta^(n-1), with the eta powers folded into c / eta = 1 / (eta+1)
            tail = ((n + i - 1) * xs - c * xp) / d
            spow = 1.0 if i == 1 else (c * xp / d) ** (i - 1)
            mats[:, i - 1, 0] = (-1) ** (i + 1) * spow * tail
            for j in range(2, alpha + 2):
                mats[:, i - 1, j - 1] = _lag_array(n + i - j - 1, j, -xs)
        sign, logdet = batched_slogdet(mats)
        lv = (
            lead
            - n * s
            - xp * (n - c)
            + (n * (n + alpha - 1) + n - 1) * np.log(xp)
            - (n - 1) * (n + alpha) * np.log(xs)
            - (n - 1) * (math.log1p(eta) + np.log(d))
            + logdet
        )
        out[pos] = sign * np.exp(lv)
        return out

    return f


def mgf_kappa_sq(s: float, p: ExactPdfParams, abs_tol: float = 1e-12, rel_tol: float = 1e-10) -> float:
    """``E[exp(-s kappa^2)]`` for ``s >= 0`` as a single integral over lambda_min."""
    if s < 0:
        raise ValueError("mgf_kappa_sq needs s >= 0")
    f = _mgf_integrand(float(s), p.n, p.alpha, p.eta, p.c_eta)
    scale = 1.0 / (p.n - p.c_eta)
    pts = [0.1 * scale, scale, 5 * scale]
    return integrate(f, 0.0, math.inf, abs_tol=abs_tol, rel_tol=rel_tol, points=pts).value


# --------------------------------------------------------------------------
# closed-form Laguerre-weight multiple integrals


def _lf(k: int) -> SignedLog:
    return SignedLog(1, log_factorial(k))


def R_det(n: int, alpha: int, t: float) -> SignedLog:
    """``int prod_j e^{-y_j} y_j (t - y_j)^alpha Delta_n(y)^2 dy`` over ``[0, inf)^n``."""
    const = ONE
    for j in range(n):
        const = const * _lf(j + 1) * _lf(j + 1)
    for j in range(alpha):
        const = const * _lf(n + j) / _lf(j)
    rows = [[_lag(n + i - j, j, t) for j in range(1, alpha + 1)] for i in range(1, alpha + 1)]
    sign = -1 if (n * alpha) % 2 else 1
    return SignedLog(sign, 0.0) * const * det(SmallMatrix.from_rows(rows))


def _two_point_det(n, alpha, a, b, first_rho, rest_rho) -> SignedLog:
    rows = []
    for i in range(1, alpha + 2):
        row = [_lag(n + i - 1, first_rho, a)]
        row += [_lag(n + i + 1 - j, rest_rho(j), b) for j in range(2, alpha + 2)]
        rows.append(row)
    return det(SmallMatrix.from_rows(rows))


def _check_ab(alpha, a, b):
    if alpha > 0 and a == b:
        raise ValueError("closed form is singular at a == b when alpha > 0")


def T_det(n: int, alpha: int, a: float, b: float) -> SignedLog:
    """``int prod_i (a - y_i)(b - y_i)^alpha e^{-y_i} y_i^2 Delta_n(y)^2 dy``."""
    _check_ab(alpha, a, b)
    k = ONE
    for j in range(1, alpha + 2):
        k = k * _lf(n + j - 1)
    for j in range(n):
        k = k * _lf(j + 1) * _lf(j + 2)
    for j in range(alpha):
        k = k / _lf(j)
    sign = -1 if (n + alpha * (n + alpha)) % 2 else 1
    d = _two_point_det(n, alpha, a, b, 2, lambda j: j)
    return SignedLog(sign, 0.0) * k * d / SignedLog.from_real(b - a) ** alpha


def Q_det(n: int, alpha: int, a: float, b: float) -> SignedLog:
    """``int prod_i (a - y_i)(b - y_i)^alpha e^{-y_i} Delta_n(y)^2 dy``."""
    _check_ab(alpha, a, b)
    k = ONE
    for j in range(1, alpha + 2):
        k = k * _lf(n + j - 1)
    for j in range(n):
        k = k * _lf(j) * _lf(j + 1)
    for j in range(1, alpha):
        k = k / _lf(j)
    sign = -1 if (n + alpha * (n + alpha)) % 2 else 1
    d = _two_point_det(n, alpha, a, b, 0, lambda j: j - 2)
    return SignedLog(sign, 0.0) * k * d / SignedLog.from_real(b - a) ** alpha

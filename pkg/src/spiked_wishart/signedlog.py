"""Signed log-domain real arithmetic and gamma-family helpers.

Magnitudes such as ``(z - n) ** (n**2 + n*alpha - alpha - 2)`` or ratios of
factorials of order ``n**2`` leave double range long before the quantities
they feed into do.  Every analytic formula in the package therefore carries
its large factors as ``SignedLog`` values and only converts to ``float`` at
the very end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

__all__ = [
    "SignedLog",
    "signedlog_add",
    "signedlog_sum",
    "log_gamma",
    "log_factorial",
    "pochhammer",
    "ZERO",
    "ONE",
]

# |logmag difference| below this with opposite signs is treated as exact cancellation
CANCEL_TOL = 1e-15
_POCH_DIRECT_MAX = 4096


@dataclass(frozen=True, slots=True)
class SignedLog:
    """A real number stored as ``sign * exp(logmag)``.

    ``sign`` is one of -1, 0, +1.  ``sign == 0`` is the canonical zero and
    ``logmag`` is then ignored (it is normalised to ``-inf``).  A value built
    by :meth:`from_real` remembers its float so that converting straight back
    is exact; ``exp(log(x))`` alone can be off by many ulp near the ends of
    the double range.
    """

    sign: int
    logmag: float
    _exact: float | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, "logmag", -math.inf)
        elif math.isnan(self.logmag):
            raise ValueError("logmag is NaN")
        elif self.logmag == -math.inf:
            object.__setattr__(self, "sign", 0)

    @classmethod
    def from_real(cls, x: float) -> "SignedLog":
        x = float(x)
        if x == 0.0:
            return ZERO
        if math.isnan(x):
            raise ValueError("cannot represent NaN")
        return cls(1 if x > 0 else -1, math.log(abs(x)), x)

    @classmethod
    def from_log(cls, logmag: float, sign: int = 1) -> "SignedLog":
        return cls(sign, logmag)

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        if self._exact is not None:
            return self._exact
        return self.sign * math.exp(self.logmag)

    __float__ = to_real

    def is_zero(self) -> bool:
        return self.sign == 0

    def __neg__(self) -> "SignedLog":
        return SignedLog(-self.sign, self.logmag)

    def __abs__(self) -> "SignedLog":
        return SignedLog(abs(self.sign), self.logmag)

    def __mul__(self, other) -> "SignedLog":
        other = _coerce(other)
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return SignedLog(self.sign * other.sign, self.logmag + other.logmag)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SignedLog":
        other = _coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("SignedLog division by zero")
        if self.sign == 0:
            return ZERO
        return SignedLog(self.sign * other.sign, self.logmag - other.logmag)

    def __rtruediv__(self, other) -> "SignedLog":
        return _coerce(other) / self

    def __add__(self, other) -> "SignedLog":
        return signedlog_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other) -> "SignedLog":
        return signedlog_add(self, -_coerce(other))

    def __rsub__(self, other) -> "SignedLog":
        return signedlog_add(_coerce(other), -self)

    def __pow__(self, p) -> "SignedLog":
        if isinstance(p, int) or (isinstance(p, float) and p.is_integer()):
            p = int(p)
            if p == 0:
                return ONE
            if self.sign == 0:
                if p < 0:
                    raise ZeroDivisionError("zero to a negative power")
                return ZERO
            sign = self.sign if p % 2 else 1
            return SignedLog(sign, p * self.logmag)
        if self.sign < 0:
            raise ValueError("non-integer power of a negative number")
        if self.sign == 0:
            if p < 0:
                raise ZeroDivisionError("zero to a negative power")
            return ZERO
        return SignedLog(1, p * self.logmag)

    def __repr__(self) -> str:
        s = {1: "+", -1: "-", 0: "0"}[self.sign]
        return f"SignedLog({s}, {self.logmag!r})"


ZERO = SignedLog(0, -math.inf)
ONE = SignedLog(1, 0.0)


def _coerce(x) -> SignedLog:
    if isinstance(x, SignedLog):
        return x
    return SignedLog.from_real(x)


def signedlog_add(a: SignedLog, b: SignedLog) -> SignedLog:
    """Return ``a + b`` by factoring out the larger magnitude."""
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    if a.logmag < b.logmag:
        a, b = b, a
    d = b.logmag - a.logmag  # <= 0
    if a.sign == b.sign:
        return SignedLog(a.sign, a.logmag + math.log1p(math.exp(d)))
    if -d < CANCEL_TOL:
        return ZERO
    return SignedLog(a.sign, a.logmag + math.log1p(-math.exp(d)))


def signedlog_sum(values: Iterable[SignedLog]) -> SignedLog:
    """Sum many values with a single shared scale (one rounding per term)."""
    vals = [v for v in values if v.sign != 0]
    if not vals:
        return ZERO
    top = max(v.logmag for v in vals)
    acc = math.fsum(v.sign * math.exp(v.logmag - top) for v in vals)
    if acc == 0.0:
        return ZERO
    return SignedLog(1 if acc > 0 else -1, top + math.log(abs(acc)))


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``.

    Backed by the C library ``lgamma`` (``math.lgamma``); poles and the
    negative axis are rejected instead of returning ``inf``.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def log_factorial(k: int) -> float:
    if k < 0:
        raise ValueError(f"factorial of negative integer {k}")
    if k < 2:
        return 0.0
    return math.lgamma(k + 1.0)


def pochhammer(a: float, j: int) -> SignedLog:
    """Rising factorial ``(a)_j = a (a+1) ... (a+j-1)`` with exact sign."""
    if j < 0:
        raise ValueError("pochhammer index must be nonnegative")
    if j == 0:
        return ONE
    a = float(a)
    last = a + j - 1
    if a <= 0.0 and a.is_integer() and last >= 0.0:
        return ZERO
    sign = -1 if (a < 0 and (min(j, math.ceil(-a)) % 2)) else 1
    if j <= _POCH_DIRECT_MAX:
        return SignedLog(sign, math.fsum(math.log(abs(a + i)) for i in range(j)))
    if a > 0.0:
        return SignedLog(1, math.lgamma(a + j) - math.lgamma(a))
    # split at the sign change: negative factors first, then positive ones
    neg = min(j, math.ceil(-a))
    logmag = math.fsum(math.log(abs(a + i)) for i in range(neg))
    if neg < j:
        logmag += math.lgamma(a + j) - math.lgamma(a + neg)
    return SignedLog(sign, logmag)

"""Signed log-domain arithmetic, log-gamma and Pochhammer symbols.

Frozen values were computed with mpmath at 40 digits.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spiked_wishart.signedlog import (
    ONE,
    ZERO,
    SignedLog,
    log_factorial,
    log_gamma,
    pochhammer,
    signedlog_add,
    signedlog_sum,
)

reals = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda v: abs(v) > 1e-300)
logs = st.floats(min_value=-1e5, max_value=1e5)
signs = st.sampled_from([-1, 1])


def sl(sign, logmag):
    return SignedLog(sign, logmag)


class TestSignedLog:
    def test_zero_is_canonical(self):
        z = SignedLog(0, 12.5)
        assert z.is_zero()
        assert z == ZERO
        assert z.to_real() == 0.0

    def test_from_real_zero(self):
        assert SignedLog.from_real(0.0).sign == 0
        assert SignedLog.from_real(-0.0).sign == 0

    @given(reals)
    def test_round_trip_within_4_ulp(self, x):
        back = SignedLog.from_real(x).to_real()
        assert abs(back - x) <= 4 * np.spacing(abs(x))

    def test_round_trip_extremes(self):
        for x in (1e-300, -2.5e-308, 1.7e308, -1e300, 5e-324):
            back = SignedLog.from_real(x).to_real()
            assert abs(back - x) <= 4 * np.spacing(abs(x))

    @given(signs, logs, signs, logs)
    def test_multiplication_never_overflows(self, s1, l1, s2, l2):
        a = sl(s1, l1 * 10)
        b = sl(s2, l2 * 10)
        p = a * b
        assert p.sign == s1 * s2
        assert math.isfinite(p.logmag)

    def test_division(self):
        q = SignedLog.from_real(-6.0) / SignedLog.from_real(3.0)
        assert q.to_real() == pytest.approx(-2.0, rel=1e-15)
        with pytest.raises(ZeroDivisionError):
            ONE / ZERO

    def test_integer_and_real_powers(self):
        assert (SignedLog.from_real(-2.0) ** 3).to_real() == pytest.approx(-8.0, rel=1e-15)
        assert (SignedLog.from_real(-2.0) ** 2).to_real() == pytest.approx(4.0, rel=1e-15)
        assert (SignedLog.from_real(4.0) ** 0.5).to_real() == pytest.approx(2.0, rel=1e-15)
        assert ZERO**0 == ONE


class TestAdd:
    def test_two_plus_three(self):
        r = signedlog_add(sl(1, math.log(2)), sl(1, math.log(3)))
        assert r.sign == 1
        assert r.logmag == pytest.approx(math.log(5), rel=1e-15)

    def test_exact_cancellation(self):
        r = signedlog_add(sl(1, math.log(7)), sl(-1, math.log(7)))
        assert r.sign == 0

    def test_large_magnitudes(self):
        r = signedlog_add(sl(1, 1000.0), sl(1, 999.0))
        assert r.sign == 1
        assert r.logmag == pytest.approx(1000.313261687518222834, rel=1e-15)

    def test_opposite_signs(self):
        r = signedlog_add(sl(1, math.log(5)), sl(-1, math.log(3)))
        assert r.to_real() == pytest.approx(2.0, rel=1e-14)
        r = signedlog_add(sl(-1, math.log(5)), sl(1, math.log(3)))
        assert r.to_real() == pytest.approx(-2.0, rel=1e-14)

    def test_zero_is_identity(self):
        a = sl(-1, 3.3)
        assert signedlog_add(a, ZERO) == a
        assert signedlog_add(ZERO, a) == a

    @given(signs, logs, signs, logs)
    def test_commutative(self, s1, l1, s2, l2):
        a, b = sl(s1, l1), sl(s2, l2)
        assert signedlog_add(a, b) == signedlog_add(b, a)

    @given(st.lists(st.floats(min_value=-50, max_value=50), min_size=3, max_size=3))
    def test_associative_same_sign(self, ls):
        a, b, c = (sl(1, v) for v in ls)
        left = signedlog_add(signedlog_add(a, b), c)
        right = signedlog_add(a, signedlog_add(b, c))
        assert left.sign == right.sign == 1
        assert abs(left.logmag - right.logmag) <= 2 * np.spacing(max(abs(left.logmag), 1.0))

    def test_sum_matches_fsum(self):
        vals = [1e20, -3.5, 1.0, -1e20, 2.25]
        got = signedlog_sum([SignedLog.from_real(v) for v in vals]).to_real()
        assert got == pytest.approx(math.fsum(vals), abs=1e-3)


class TestLogGamma:
    def test_one(self):
        assert log_gamma(1.0) == 0.0

    def test_five(self):
        assert log_gamma(5.0) == pytest.approx(math.log(24), rel=1e-15)

    def test_hundred_and_one(self):
        assert log_gamma(101.0) == pytest.approx(363.73937555556349014408, rel=1e-15)

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
    def test_domain_error(self, x):
        with pytest.raises(ValueError):
            log_gamma(x)

    @given(st.floats(min_value=1.0, max_value=1e4))
    def test_recurrence(self, x):
        # both terms carry rounding error proportional to their own size
        diff = log_gamma(x + 1) - log_gamma(x)
        tol = 4 * np.spacing(log_gamma(x + 1)) + 1e-13 * abs(math.log(x)) + 1e-15
        assert abs(diff - math.log(x)) <= tol

    def test_against_frozen_table(self):
        # mpmath.loggamma at 40 digits
        table = {
            0.5: 0.57236494292470008707171367567652935582,
            2.5: 0.28468287047291915963249466968270192432,
            1e6: 12815504.56914761165997697178501711315369,
        }
        for x, ref in table.items():
            assert log_gamma(x) == pytest.approx(ref, rel=1e-14)

    def test_log_factorial(self):
        assert log_factorial(0) == 0.0
        assert log_factorial(10) == pytest.approx(math.log(3628800), rel=1e-15)


class TestPochhammer:
    def test_empty(self):
        assert pochhammer(3, 0) == ONE

    def test_vanishes_through_zero(self):
        assert pochhammer(-2, 3).is_zero()

    def test_negative_start(self):
        assert pochhammer(-5, 3).to_real() == pytest.approx(-60.0, rel=1e-15)

    def test_negative_stops_before_zero(self):
        assert pochhammer(-5, 5).to_real() == pytest.approx(-120.0, rel=1e-15)

    def test_large_j(self):
        # (1)_j = j!
        assert pochhammer(1, 5000).logmag == pytest.approx(log_factorial(5000), rel=1e-13)

    @given(st.floats(min_value=-30, max_value=30), st.integers(min_value=0, max_value=60))
    def test_step(self, a, j):
        nxt = pochhammer(a, j + 1)
        cur = pochhammer(a, j) * SignedLog.from_real(a + j)
        assert nxt.sign == cur.sign
        if nxt.sign:
            assert abs(nxt.logmag - cur.logmag) <= 2 * np.spacing(max(abs(cur.logmag), 1.0)) + 1e-13

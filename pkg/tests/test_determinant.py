"""Signed-log determinants and Vandermonde products."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spiked_wishart.determinant import (
    SmallMatrix,
    batched_slogdet,
    det,
    det_fraction,
    vandermonde,
)
from spiked_wishart.signedlog import ONE


def D(rows):
    return det(rows).to_real()


class TestDetExamples:
    def test_identity(self):
        assert D(np.eye(3).tolist()) == 1.0

    def test_two_by_two(self):
        assert D([[1, 2], [3, 4]]) == pytest.approx(-2.0, rel=1e-15)

    def test_vandermonde_matrix(self):
        nodes = [1, 2, 3, 5]
        rows = [[x**j for j in range(4)] for x in nodes]
        assert D(rows) == pytest.approx(48.0, rel=1e-13)

    def test_empty(self):
        assert det(SmallMatrix(())) == ONE

    def test_order_cap(self):
        with pytest.raises(ValueError):
            SmallMatrix.from_rows(np.eye(9).tolist())

    def test_not_square(self):
        with pytest.raises(ValueError):
            SmallMatrix.from_rows([[1, 2, 3], [4, 5, 6]])

    def test_singular_is_zero(self):
        assert det([[1, 2], [2, 4]]).is_zero()

    def test_huge_entries(self):
        from spiked_wishart.signedlog import SignedLog

        big = SignedLog(1, 5000.0)
        r = det([[big, ONE], [ONE, big]])
        assert r.sign == 1
        assert r.logmag == pytest.approx(10000.0, rel=1e-15)

    @pytest.mark.parametrize("k", [7, 8])
    def test_elimination_orders(self, k):
        rng = np.random.default_rng(k)
        a = rng.normal(size=(k, k))
        got = det(a.tolist())
        sign, logdet = np.linalg.slogdet(a)
        assert got.sign == sign
        assert got.logmag == pytest.approx(logdet, abs=1e-12)


class TestVandermonde:
    def test_single(self):
        assert vandermonde([3.7]) == ONE

    def test_repeated(self):
        assert vandermonde([1, 1, 2]).is_zero()

    def test_three_nodes(self):
        assert vandermonde([1, 2, 4]).to_real() == pytest.approx(6.0, rel=1e-15)

    def test_descending_sign(self):
        assert vandermonde([2, 1]).to_real() == pytest.approx(-1.0, rel=1e-15)


mats = st.integers(1, 5).flatmap(
    lambda k: st.lists(
        st.lists(st.floats(-10, 10, allow_subnormal=False), min_size=k, max_size=k),
        min_size=k,
        max_size=k,
    )
)


class TestProperties:
    @settings(max_examples=150, deadline=None)
    @given(mats)
    def test_transpose(self, rows):
        m = SmallMatrix.from_rows(rows)
        a, b = det(m), det(m.transpose())
        if a.is_zero() or b.is_zero():
            scale = math.prod(max(1.0, max(abs(v) for v in r)) for r in rows)
            assert abs(a.to_real() - b.to_real()) <= 1e-12 * scale
            return
        # cancellation in the permutation sum limits agreement to the
        # size of the largest term relative to the result
        eps = np.finfo(float).eps
        log_scale = sum(math.log(max(abs(v) for v in r)) for r in rows) + math.lgamma(len(rows) + 1)
        noise = math.log(8 * eps) + log_scale
        if a.logmag <= noise + 1.0 or b.logmag <= noise + 1.0:
            # both results are rounding noise; only their size is meaningful
            assert max(a.logmag, b.logmag) <= noise + 2.0
            return
        tol = 4 * np.spacing(max(abs(a.logmag), 1.0)) + math.exp(noise - a.logmag)
        assert a.sign == b.sign
        assert abs(a.logmag - b.logmag) <= tol

    def test_transpose_well_conditioned_ulps(self):
        rng = np.random.default_rng(5)
        for k in range(1, 6):
            a = rng.normal(size=(k, k)) + 3 * np.eye(k)
            d1, d2 = det(a.tolist()), det(a.T.tolist())
            assert d1.sign == d2.sign
            assert abs(d1.logmag - d2.logmag) <= 4 * np.spacing(max(abs(d1.logmag), 1.0)) + 1e-15

    @pytest.mark.parametrize("seed", range(10))
    def test_multilinear_first_column(self, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(2, 6))
        base = rng.normal(size=(k, k))
        ca, cb = rng.normal(size=k), rng.normal(size=k)

        def with_col(c):
            m = base.copy()
            m[:, 0] = c
            return D(m.tolist())

        lhs = with_col(ca + cb)
        rhs = with_col(ca) + with_col(cb)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("alpha", [1, 2, 3])
    @pytest.mark.parametrize("n", range(1, 7))
    def test_reciprocal_factorial_matrix(self, n, alpha):
        # direct evaluation vs Delta_alpha(1..alpha) / prod (n+alpha-j-1)!
        def inv_fact(k):
            return Fraction(1, math.factorial(k)) if k >= 0 else Fraction(0)

        rows = [[inv_fact(n + i - j - 1) for j in range(1, alpha + 1)] for i in range(1, alpha + 1)]
        direct = det(rows).to_real()
        exact = det_fraction(rows)
        closed = vandermonde(list(range(1, alpha + 1))).to_real() / math.prod(
            math.factorial(n + alpha - j - 1) for j in range(1, alpha + 1)
        )
        assert float(exact) == pytest.approx(closed, rel=1e-14)
        assert direct == pytest.approx(closed, rel=1e-12)


class TestHelpers:
    def test_det_fraction(self):
        assert det_fraction([[Fraction(1, 2), 1], [3, 4]]) == Fraction(-1)
        assert det_fraction([]) == 1

    def test_batched_slogdet_empty(self):
        s, l = batched_slogdet(np.zeros((4, 0, 0)))
        np.testing.assert_array_equal(s, 1.0)
        np.testing.assert_array_equal(l, 0.0)

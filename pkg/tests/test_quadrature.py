"""Adaptive Gauss-Kronrod integration and the ordered-wedge 2-D rule."""
import math

import numpy as np
import pytest

from spiked_wishart.ensemble import Dims, SpikeParams, joint_density
from spiked_wishart.quadrature import (
    DEFAULT_MAX_PANELS,
    IntegrationResult,
    QuadratureError,
    integrate,
    integrate_2d_ordered,
)


class TestIntegrate:
    def test_exponential_tail(self):
        r = integrate(lambda x: np.exp(-x), 0.0, math.inf)
        assert r.value == pytest.approx(1.0, abs=1e-10)

    def test_square(self):
        r = integrate(lambda x: x * x, 0.0, 1.0)
        assert r.value == pytest.approx(1 / 3, abs=1e-12)

    def test_gamma_four(self):
        r = integrate(lambda x: x**3 * np.exp(-x), 0.0, math.inf)
        assert r.value == pytest.approx(6.0, abs=1e-10)

    def test_result_fields(self):
        r = integrate(np.cos, 0.0, 2.0)
        assert isinstance(r, IntegrationResult)
        assert r.error_estimate >= 0
        assert 1 <= r.subdivisions <= DEFAULT_MAX_PANELS
        assert float(r) == r.value

    def test_reversed_limits(self):
        assert integrate(np.sin, 1.0, 0.0).value == pytest.approx(-(1 - math.cos(1.0)), rel=1e-13)

    def test_empty_interval(self):
        assert integrate(np.sin, 2.0, 2.0).value == 0.0

    def test_infinite_lower_limit(self):
        with pytest.raises(ValueError):
            integrate(np.exp, -math.inf, 0.0)

    def test_endpoint_singularity(self):
        r = integrate(lambda x: 1 / np.sqrt(x), 0.0, 1.0, abs_tol=1e-10, rel_tol=1e-10)
        assert r.value == pytest.approx(2.0, abs=1e-8)

    def test_breakpoints(self):
        f = lambda x: np.abs(x - 0.3)  # noqa: E731
        r = integrate(f, 0.0, 1.0, points=[0.3])
        assert r.value == pytest.approx(0.045 + 0.245, abs=1e-13)

    def test_panel_cap(self):
        with pytest.raises(QuadratureError):
            integrate(lambda x: np.sin(1 / x) / x, 1e-9, 1.0, abs_tol=1e-14, rel_tol=1e-14, max_panels=20)

    def test_nonfinite_integrand(self):
        with pytest.raises(QuadratureError):
            integrate(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


def _random_integrands(count, seed):
    """Smooth integrands with closed-form integrals over [0, 1] or [0, inf)."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        kind = rng.integers(4)
        if kind == 0:
            k = int(rng.integers(0, 8))
            lam = rng.uniform(0.3, 5.0)
            yield (lambda x, k=k, lam=lam: x**k * np.exp(-lam * x)), 0.0, math.inf, math.factorial(k) / lam ** (k + 1)
        elif kind == 1:
            w = rng.uniform(0.5, 20.0)
            yield (lambda x, w=w: np.cos(w * x)), 0.0, 1.0, math.sin(w) / w
        elif kind == 2:
            a = rng.uniform(0.05, 2.0)
            yield (lambda x, a=a: 1 / (a * a + x * x)), 0.0, math.inf, math.pi / (2 * a)
        else:
            p = rng.uniform(-0.5, 6.0)
            yield (lambda x, p=p: x**p), 0.0, 1.0, 1 / (p + 1)


def test_error_estimate_is_honest():
    cases = list(_random_integrands(200, 11))
    honest = 0
    for f, a, b, exact in cases:
        r = integrate(f, a, b, abs_tol=1e-6, rel_tol=1e-6)
        honest += abs(r.value - exact) <= r.error_estimate
    assert honest >= 0.95 * len(cases)


class TestOrderedWedge:
    def test_symmetric_exponential(self):
        v = integrate_2d_ordered(lambda x, y: np.exp(-x - y), tol=1e-10)
        assert v == pytest.approx(0.5, abs=1e-8)

    @pytest.mark.parametrize("alpha,eta", [(0, 0.0), (1, 3.0)])
    def test_joint_density_normalizes(self, alpha, eta):
        dims, spike = Dims(2, alpha), SpikeParams(eta)

        def f(x, ys):
            ys = np.asarray(ys)
            out = np.zeros_like(ys)
            ok = ys - x > 1e-9
            pts = np.stack([np.full(ok.sum(), x), ys[ok]], axis=-1)
            out[ok] = joint_density(pts, dims, spike)
            return out

        assert integrate_2d_ordered(f, tol=1e-8) == pytest.approx(1.0, abs=1e-6)

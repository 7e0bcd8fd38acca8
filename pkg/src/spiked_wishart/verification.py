"""Acceptance checks shared by the test-suite and ``spiked-wishart verify``.

Each check returns a :class:`CheckResult`; tolerances are fixed constants
here and are not adjustable from the command line.
"""

from __future__ import annotations

import filecmp
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .asymptotic import AsymptoticParams, cdf_scaled_kappa, pdf_scaled_kappa
from .ensemble import Dims, EmpiricalDistribution, SpikeParams, monte_carlo, simulate
from .exact import (
    ExactPdfParams,
    Q_det,
    R_det,
    T_det,
    cdf_min_eig,
    kappa_sq_cdf_interpolant,
    mgf_kappa_sq,
    pdf_kappa_sq,
    pdf_kappa_sq_alpha0,
    pdf_kappa_sq_alpha1,
    pdf_kappa_sq_white,
    pdf_min_eig,
)
from .quadrature import integrate, integrate_2d_ordered

__all__ = ["CheckResult", "CRITERIA", "run_acceptance", "z_grid"]

SEED = 20240917


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:>2} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def z_grid(n: int, points: int = 20) -> np.ndarray:
    """Geometric grid of ``points`` abscissae in ``(n, 31 n]``."""
    return n + n * np.geomspace(0.01, 30.0, points)


def _rel(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.abs(b)))


def _five_point(f: Callable, x: float, h: float) -> float:
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


# ---------------------------------------------------------------- criteria


def check_normalization(threads=None) -> tuple[bool, str]:
    worst = 0.0
    for n in (2, 3, 5):
        for alpha in range(4):
            for eta in (0.0, 1.0, 10.0):
                p = ExactPdfParams.of(n, alpha, eta)
                total = integrate(lambda z: pdf_kappa_sq(z, p), n, math.inf).value
                worst = max(worst, abs(total - 1.0))
    return worst <= 1e-6, f"max |integral - 1| = {worst:.2e} over 36 configs (tol 1e-06)"


def check_mc_kappa(threads=None) -> tuple[bool, str]:
    p = ExactPdfParams.of(3, 2, 10.0)
    emp = monte_carlo(p.dims, p.spike, 200_000, SEED, "kappa_sq", threads=threads)
    cdf = kappa_sq_cdf_interpolant(p, float(emp.samples[-1]) + 1.0)
    ks = emp.ks_distance(cdf)
    return ks <= 0.01, f"KS = {ks:.4f} at 2e5 draws (tol 0.01)"


def check_white(threads=None) -> tuple[bool, str]:
    worst = 0.0
    for n in range(2, 6):
        for alpha in range(4):
            z = z_grid(n)
            a = pdf_kappa_sq(z, ExactPdfParams.of(n, alpha, 0.0))
            b = pdf_kappa_sq_white(z, Dims(n, alpha))
            worst = max(worst, _rel(a, b))
    return worst <= 1e-10, f"max rel diff = {worst:.2e} (tol 1e-10)"


def check_special_cases(threads=None) -> tuple[bool, str]:
    worst = 0.0
    for n in range(2, 7):
        for eta in (0.0, 0.5, 2.0, 10.0):
            z = z_grid(n)
            p0 = ExactPdfParams.of(n, 0, eta)
            p1 = ExactPdfParams.of(n, 1, eta)
            worst = max(worst, _rel(pdf_kappa_sq_alpha0(z, p0), pdf_kappa_sq(z, p0)))
            worst = max(worst, _rel(pdf_kappa_sq_alpha1(z, p1), pdf_kappa_sq(z, p1)))
    return worst <= 1e-10, f"max rel diff = {worst:.2e} (tol 1e-10)"


def check_min_eig(threads=None) -> tuple[bool, str]:
    fd_worst = 0.0
    for n, alpha, eta in ((3, 1, 5.0), (4, 2, 3.0), (5, 3, 10.0), (5, 3, 0.0)):
        p = ExactPdfParams.of(n, alpha, eta)
        for x in np.array([0.1, 0.5, 1.0, 2.0]) / n:
            fd = _five_point(lambda t: cdf_min_eig(t, p), x, 1e-3 * x)
            fd_worst = max(fd_worst, abs(fd / pdf_min_eig(x, p) - 1.0))
    p = ExactPdfParams.of(3, 1, 5.0)
    emp = monte_carlo(p.dims, p.spike, 200_000, SEED + 1, "min_eig", threads=threads)
    ks = emp.ks_distance(lambda x: cdf_min_eig(x, p))
    closed = 0.0
    for n in range(2, 6):
        for eta in (0.0, 1.0, 10.0):
            p0 = ExactPdfParams.of(n, 0, eta)
            x = np.linspace(0.0, 5.0, 41)
            closed = max(closed, float(np.max(np.abs(
                cdf_min_eig(x, p0) - (1.0 - np.exp(-x * (n - p0.c_eta)))
            ))))
    ok = fd_worst <= 1e-6 and ks <= 0.01 and closed <= 1e-14
    return ok, (
        f"FD rel = {fd_worst:.2e} (tol 1e-06); KS = {ks:.4f} (tol 0.01); "
        f"alpha=0 closed form = {closed:.1e} (tol 1e-14)"
    )


def _rtq_oracles(n: int, alpha: int, t: float, a: float, b: float):
    if n == 1:
        q = lambda f: integrate(f, 0.0, math.inf, abs_tol=1e-13, rel_tol=1e-11).value  # noqa: E731
        r = q(lambda y: np.exp(-y) * y * (t - y) ** alpha)
        tt = q(lambda y: (a - y) * (b - y) ** alpha * np.exp(-y) * y**2)
        qq = q(lambda y: (a - y) * (b - y) ** alpha * np.exp(-y))
        return r, tt, qq
    # symmetric integrands: full quadrant = 2 x ordered wedge
    q2 = lambda f: 2.0 * integrate_2d_ordered(f, tol=1e-11)  # noqa: E731
    r = q2(lambda x, y: np.exp(-x - y) * x * y * ((t - x) * (t - y)) ** alpha * (y - x) ** 2)
    tt = q2(lambda x, y: (a - x) * (a - y) * ((b - x) * (b - y)) ** alpha
            * np.exp(-x - y) * (x * y) ** 2 * (y - x) ** 2)
    qq = q2(lambda x, y: (a - x) * (a - y) * ((b - x) * (b - y)) ** alpha
            * np.exp(-x - y) * (y - x) ** 2)
    return r, tt, qq


def check_rtq(threads=None) -> tuple[bool, str]:
    worst = 0.0
    t, a, b = 1.7, 0.6, 2.9
    for n in (1, 2):
        for alpha in (0, 1, 2):
            r, tt, qq = _rtq_oracles(n, alpha, t, a, b)
            worst = max(
                worst,
                abs(R_det(n, alpha, t).to_real() / r - 1),
                abs(T_det(n, alpha, a, b).to_real() / tt - 1),
                abs(Q_det(n, alpha, a, b).to_real() / qq - 1),
            )
    anchors = max(
        abs(R_det(1, 1, 3.5).to_real() - 1.5),
        abs(T_det(1, 0, 2.0, 7.0).to_real() + 2.0),
        abs(Q_det(1, 0, 4.0, 1.0).to_real() - 3.0),
    )
    ok = worst <= 1e-8 and anchors <= 1e-12
    return ok, f"max rel diff vs quadrature = {worst:.2e} (tol 1e-08); anchors {anchors:.1e}"


def check_mgf(threads=None) -> tuple[bool, str]:
    p = ExactPdfParams.of(2, 1, 2.0)
    at0 = abs(mgf_kappa_sq(0.0, p) - 1.0)
    worst = 0.0
    for s in (0.05, 0.1, 0.5):
        ref = integrate(
            lambda z: np.exp(-s * z) * pdf_kappa_sq(z, p), p.n, math.inf,
            abs_tol=1e-14, rel_tol=1e-12,
        ).value
        worst = max(worst, abs(mgf_kappa_sq(s, p) / ref - 1.0))
    return at0 <= 1e-6 and worst <= 1e-4, (
        f"|M(0) - 1| = {at0:.1e} (tol 1e-06); max rel diff = {worst:.1e} (tol 1e-04)"
    )


def check_asymptotics(threads=None) -> tuple[bool, str]:
    n = 50
    ks = {}
    for alpha in (1, 2):
        emp = monte_carlo(Dims(n, alpha), SpikeParams(1.0 / n), 100_000, SEED + alpha,
                          "kappa_sq", threads=threads)
        scaled = EmpiricalDistribution(emp.samples / n**3)
        ks[alpha] = scaled.ks_distance(lambda v: cdf_scaled_kappa(v, AsymptoticParams(alpha, 1.0)))
    norm = 0.0
    for alpha in range(4):
        pa = AsymptoticParams(alpha, 1.0)
        total = integrate(lambda v: pdf_scaled_kappa(v, pa), 0.0, math.inf,
                          abs_tol=1e-12, rel_tol=1e-12, points=[0.1, 1.0, 10.0]).value
        norm = max(norm, abs(total - 1.0))
    v = np.geomspace(1e-3, 1e3, 200)
    same = all(
        np.array_equal(cdf_scaled_kappa(v, AsymptoticParams(a, 1.0, 0.0)),
                       cdf_scaled_kappa(v, AsymptoticParams(a, 1.0, rho)))
        and np.array_equal(pdf_scaled_kappa(v, AsymptoticParams(a, 1.0, 0.0)),
                           pdf_scaled_kappa(v, AsymptoticParams(a, 1.0, rho)))
        for a in range(4) for rho in (1.0, 10.0)
    )
    ok = max(ks.values()) <= 0.02 and norm <= 1e-8 and same
    return ok, (
        f"KS alpha=1 {ks[1]:.4f}, alpha=2 {ks[2]:.4f} (tol 0.02); "
        f"|integral - 1| = {norm:.1e} (tol 1e-08); rho-independent: {same}"
    )


def check_limits(threads=None) -> tuple[bool, str]:
    big = simulate(Dims(100, 2), SpikeParams(0.01), 10_000, SEED + 3, threads=threads)
    mean = float(big.trace_over_nsq.mean())
    emp = monte_carlo(Dims(5, 495), SpikeParams(10.0), 10_000, SEED + 4, "kappa_sq",
                      threads=threads)
    q1, q3 = (float(v) for v in emp.quantile([0.25, 0.75]))
    ok_a = abs(mean - 1.0) <= 0.05
    ok_b = q1 <= 15.0 <= q3 and q3 - q1 <= 1.0
    return ok_a and ok_b, (
        f"(a) mean tr(W)/n^2 = {mean:.4f} (within 5% of 1: {ok_a}); "
        f"(b) IQR = [{q1:.3f}, {q3:.3f}], width {q3 - q1:.3f} (contains 15 and width <= 1: {ok_b})"
    )


def check_determinism(threads=None) -> tuple[bool, str]:
    from .cli import main

    commands = [
        ["sample", "--n", "3", "--alpha", "2", "--eta", "10", "--trials", "1000", "--seed", "7"],
        ["pdf", "--n", "3", "--alpha", "2", "--eta", "10", "--grid", "3:40:50"],
        ["cdf", "--n", "3", "--alpha", "1", "--eta", "2", "--grid", "3:30:12"],
        ["min-eig-pdf", "--n", "3", "--alpha", "1", "--eta", "5", "--grid", "0:2:40"],
        ["min-eig-cdf", "--n", "3", "--alpha", "1", "--eta", "5", "--grid", "0:2:40"],
        ["asym-cdf", "--alpha", "2", "--mu", "1", "--grid", "0.01:100:60", "--log-grid"],
        ["asym-pdf", "--alpha", "2", "--mu", "1", "--grid", "0.01:100:60", "--log-grid"],
        ["mgf", "--n", "2", "--alpha", "1", "--eta", "2", "--grid", "0:0.5:6"],
    ]
    bad = []
    with tempfile.TemporaryDirectory() as tmp:
        for k, cmd in enumerate(commands):
            outs = []
            for rep in range(2):
                out = Path(tmp) / f"{k}_{rep}.csv"
                args = cmd + ["--out", str(out)]
                if threads:
                    args += ["--threads", str(threads if rep == 0 else 1)]
                if main(args) != 0:
                    bad.append(cmd[0])
                outs.append(out)
            if not filecmp.cmp(outs[0], outs[1], shallow=False):
                bad.append(cmd[0])
    return not bad, (f"{len(commands)} commands byte-identical" if not bad
                     else f"differing outputs: {sorted(set(bad))}")


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "normalization sweep", check_normalization),
    (2, "Monte Carlo vs exact kappa^2 CDF", check_mc_kappa),
    (3, "eta = 0 reduction", check_white),
    (4, "alpha = 0 / 1 closed forms", check_special_cases),
    (5, "minimum-eigenvalue laws", check_min_eig),
    (6, "R / T / Q determinant integrals", check_rtq),
    (7, "Laplace transform", check_mgf),
    (8, "hard-edge asymptotics", check_asymptotics),
    (9, "in-probability limits", check_limits),
    (10, "determinism of CSV output", check_determinism),
]


def run_check(number: int, threads=None) -> CheckResult:
    for num, name, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            try:
                ok, detail = fn(threads)
            except Exception as exc:  # report, don't abort the table
                ok, detail = False, f"error: {type(exc).__name__}: {exc}"
            return CheckResult(num, name, ok, detail, time.perf_counter() - t0)
    raise KeyError(f"no acceptance criterion {number}")


def run_acceptance(only=None, threads=None, report: Callable | None = None) -> list[CheckResult]:
    results = []
    for num, _, _ in CRITERIA:
        if only and num not in only:
            continue
        r = run_check(num, threads)
        if report:
            report(r)
        results.append(r)
    return results

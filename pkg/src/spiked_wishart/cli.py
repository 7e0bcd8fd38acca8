"""Command-line front end: curves, sampling, figure datasets and verification.

Exit status: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .asymptotic import AsymptoticParams, cdf_scaled_kappa, pdf_scaled_kappa
from .ensemble import Dims, SpikeParams, simulate, write_samples_csv
from .exact import (
    ExactPdfParams,
    cdf_kappa_sq,
    cdf_min_eig,
    mgf_kappa_sq,
    pdf_kappa_sq,
    pdf_min_eig,
)
from .quadrature import DEFAULT_ABS_TOL

COMMANDS = (
    "pdf", "cdf", "min-eig-pdf", "min-eig-cdf", "asym-cdf", "asym-pdf",
    "mgf", "sample", "figure", "verify",
)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    points: int

    def values(self, log: bool = False) -> np.ndarray:
        if log:
            if self.lo <= 0:
                raise UsageError("--log-grid needs a positive grid minimum")
            return np.geomspace(self.lo, self.hi, self.points)
        return np.linspace(self.lo, self.hi, self.points)


def parse_grid(text: str) -> Grid:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be min:max:points, got {text!r}")
    try:
        lo, hi, pts = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise argparse.ArgumentTypeError("grid needs finite min < max")
    if pts < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points")
    return Grid(lo, hi, pts)


def _tol(text: str):
    if text == "default":
        return None
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--tol takes 'default' or a positive number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("--tol must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected an integer >= 1")
    return v


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int = 3
    alpha: int = 0
    eta: float = 0.0
    mu: float = 1.0
    rho: float = 0.0
    grid: Grid | None = None
    log_grid: bool = False
    trials: int | None = None
    seed: int = 0
    out: str = "-"
    tol: float | None = None
    threads: int | None = None
    figure: int | None = None
    only: tuple = ()

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.trials is not None and self.trials < 1:
            raise UsageError("--trials must be >= 1")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_curve(path: str, header: tuple, xs, ys) -> None:
    with _open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for x, y in zip(xs, ys):
            w.writerow([_fmt(x), _fmt(y)])


# ---------------------------------------------------------------- figures


def _fig_exact_sets(k: int):
    if k == 1:
        return [(2, 1, 10.0), (3, 2, 10.0), (4, 2, 10.0)]
    if k == 2:
        return [(5, 3, eta) for eta in (0.0, 1.0, 5.0, 10.0)]
    return [(5, alpha, 10.0) for alpha in (0, 1, 2, 3)]


FIGURE_TRIALS = {1: 100_000, 2: 100_000, 3: 100_000, 4: 20_000, 5: 20_000}
ASYM_N = 50


def _label(**kw) -> str:
    return ";".join(f"{k}={v}" for k, v in kw.items())


def run_figure(cfg: RunConfig) -> int:
    k = cfg.figure
    outdir = Path("." if cfg.out == "-" else cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    trials = cfg.trials or FIGURE_TRIALS[k]
    analytic, empirical = [], []
    if k in (1, 2, 3):
        for idx, (n, alpha, eta) in enumerate(_fig_exact_sets(k)):
            label = _label(n=n, m=n + alpha, eta=eta)
            p = ExactPdfParams.of(n, alpha, eta)
            z = np.linspace(n, n + 60.0, 301)
            for zi, fi in zip(z, pdf_kappa_sq(z, p)):
                analytic.append((label, zi, fi))
            res = simulate(p.dims, p.spike, trials, cfg.seed + idx, threads=cfg.threads)
            edges = np.linspace(n, n + 60.0, 121)
            counts, _ = np.histogram(res.kappa_sq, bins=edges)
            dens = counts / (trials * np.diff(edges))
            for c, d in zip(0.5 * (edges[1:] + edges[:-1]), dens):
                empirical.append((label, c, d))
        cols = ("series", "z", "pdf")
    else:
        v = np.geomspace(1e-2, 1e2, 241)
        for alpha in (0, 1, 2):
            label = _label(alpha=alpha, n=ASYM_N, mu=cfg.mu)
            ap = AsymptoticParams(alpha, cfg.mu, cfg.rho)
            curve = cdf_scaled_kappa(v, ap) if k == 4 else pdf_scaled_kappa(v, ap)
            analytic.extend((label, vi, ci) for vi, ci in zip(v, curve))
            res = simulate(Dims(ASYM_N, alpha), SpikeParams(1.0 / ASYM_N), trials,
                           cfg.seed + alpha, threads=cfg.threads)
            scaled = res.kappa_sq / (cfg.mu * ASYM_N**3)
            if k == 4:
                ecdf = np.searchsorted(np.sort(scaled), v, side="right") / trials
                empirical.extend((label, vi, e) for vi, e in zip(v, ecdf))
            else:
                edges = np.geomspace(1e-2, 1e2, 81)
                counts, _ = np.histogram(scaled, bins=edges)
                dens = counts / (trials * np.diff(edges))
                empirical.extend(
                    (label, c, d) for c, d in zip(np.sqrt(edges[1:] * edges[:-1]), dens)
                )
        cols = ("series", "v", "cdf" if k == 4 else "pdf")
    for name, rows in (("analytic", analytic), ("empirical", empirical)):
        with open(outdir / f"fig{k}_{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for label, x, y in rows:
                w.writerow([label, _fmt(x), _fmt(y)])
    return 0


# ---------------------------------------------------------------- dispatch


def _require_grid(cfg: RunConfig) -> np.ndarray:
    if cfg.grid is None:
        raise UsageError(f"{cfg.command} needs --grid min:max:points")
    return cfg.grid.values(cfg.log_grid)


def run(cfg: RunConfig) -> int:
    cmd = cfg.command
    if cmd == "verify":
        from .verification import run_acceptance

        if cfg.tol is not None:
            print("note: acceptance tolerances are fixed; --tol is ignored by verify",
                  file=sys.stderr)
        results = run_acceptance(only=cfg.only or None, threads=cfg.threads,
                                 report=lambda r: print(r.line(), flush=True))
        passed = sum(r.passed for r in results)
        print(f"{passed}/{len(results)} criteria passed")
        return 0 if passed == len(results) else 1
    if cmd == "figure":
        return run_figure(cfg)
    if cmd == "sample":
        res = simulate(Dims(cfg.n, cfg.alpha), SpikeParams(cfg.eta), cfg.trials or 1000,
                       cfg.seed, threads=cfg.threads)
        with _open_out(cfg.out) as fh:
            write_samples_csv(fh, res)
        return 0

    xs = _require_grid(cfg)
    if cmd in ("asym-cdf", "asym-pdf"):
        ap = AsymptoticParams(cfg.alpha, cfg.mu, cfg.rho)
        ys = cdf_scaled_kappa(xs, ap) if cmd == "asym-cdf" else pdf_scaled_kappa(xs, ap)
        write_curve(cfg.out, ("v", "value"), xs, ys)
        return 0
    p = ExactPdfParams.of(cfg.n, cfg.alpha, cfg.eta)
    if cmd == "pdf":
        write_curve(cfg.out, ("z", "value"), xs, pdf_kappa_sq(xs, p))
    elif cmd == "cdf":
        ys = cdf_kappa_sq(xs, p, abs_tol=cfg.tol or DEFAULT_ABS_TOL)
        write_curve(cfg.out, ("z", "value"), xs, ys)
    elif cmd == "min-eig-pdf":
        write_curve(cfg.out, ("x", "value"), xs, pdf_min_eig(xs, p))
    elif cmd == "min-eig-cdf":
        write_curve(cfg.out, ("x", "value"), xs, cdf_min_eig(xs, p))
    elif cmd == "mgf":
        if xs[0] < 0:
            raise UsageError("mgf needs s >= 0")
        ys = [mgf_kappa_sq(s, p, abs_tol=cfg.tol or 1e-12) for s in xs]
        write_curve(cfg.out, ("s", "value"), xs, ys)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=3, help="number of columns (n)")
    common.add_argument("--alpha", type=int, default=0, help="m - n")
    common.add_argument("--eta", type=float, default=0.0, help="spike strength")
    common.add_argument("--mu", type=float, default=1.0, help="asymptotic scale")
    common.add_argument("--rho", type=float, default=0.0, help="spike scale, eta = rho/n")
    common.add_argument("--grid", type=parse_grid, help="min:max:points (linear)")
    common.add_argument("--log-grid", action="store_true", help="geometric grid spacing")
    common.add_argument("--trials", type=_positive_int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="-", help="output file ('-' for stdout)")
    common.add_argument("--tol", type=_tol, default=None, help="quadrature tolerance or 'default'")
    common.add_argument("--threads", type=_positive_int, default=None)

    parser = argparse.ArgumentParser(
        prog="spiked-wishart",
        description="Condition-number laws of single-spiked complex Wishart matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("pdf", "exact density of kappa^2"),
        ("cdf", "exact CDF of kappa^2"),
        ("min-eig-pdf", "density of the smallest eigenvalue"),
        ("min-eig-cdf", "CDF of the smallest eigenvalue"),
        ("asym-cdf", "limiting CDF of kappa^2 / (mu n^3)"),
        ("asym-pdf", "limiting density of kappa^2 / (mu n^3)"),
        ("mgf", "E[exp(-s kappa^2)] over a grid of s"),
        ("sample", "Monte Carlo draws of kappa^2 and lambda_min"),
    ):
        sub.add_parser(name, parents=[common], help=text)
    fig = sub.add_parser("figure", parents=[common], help="paired analytic/empirical datasets")
    fig.add_argument("figure", type=int, choices=range(1, 6), metavar="K")
    ver = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    ver.add_argument("--only", default="", help="comma-separated criterion numbers")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)  # exits 2 on usage errors
    try:
        only = tuple(int(t) for t in getattr(ns, "only", "").split(",") if t.strip())
        cfg = RunConfig(
            command=ns.command, n=ns.n, alpha=ns.alpha, eta=ns.eta, mu=ns.mu, rho=ns.rho,
            grid=ns.grid, log_grid=ns.log_grid, trials=ns.trials, seed=ns.seed, out=ns.out,
            tol=ns.tol, threads=ns.threads, figure=getattr(ns, "figure", None), only=only,
        )
        return run(cfg)
    except (UsageError, ValueError) as exc:
        print(f"spiked-wishart {ns.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

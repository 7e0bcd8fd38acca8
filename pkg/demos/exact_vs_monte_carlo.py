"""Compare the exact kappa^2 law with a Monte Carlo ensemble.

Run:  python demos/exact_vs_monte_carlo.py
"""
from __future__ import annotations

import numpy as np

from spiked_wishart import Dims, ExactPdfParams, SpikeParams, monte_carlo, pdf_kappa_sq
from spiked_wishart.exact import kappa_sq_cdf_interpolant


def main() -> None:
    n, alpha = 3, 2
    print(f"n={n}, m={n + alpha}")
    print(f"{'eta':>6} {'MC median':>10} {'KS distance':>12}")
    for eta in (0.0, 1.0, 10.0):
        p = ExactPdfParams.of(n, alpha, eta)
        draws = monte_carlo(Dims(n, alpha), SpikeParams(eta), 50_000, seed=1)
        cdf = kappa_sq_cdf_interpolant(p, z_max=float(draws.samples[-1]) + 1.0)
        print(f"{eta:6.1f} {draws.median():10.3f} {draws.ks_distance(cdf):12.4f}")

    # a coarse text histogram against the density
    p = ExactPdfParams.of(n, alpha, 10.0)
    draws = monte_carlo(p.dims, p.spike, 50_000, seed=2)
    edges = np.linspace(n, n + 30, 16)
    counts, _ = np.histogram(draws.samples, bins=edges)
    mids = 0.5 * (edges[1:] + edges[:-1])
    dens = counts / (draws.count * np.diff(edges))
    print("\n   z     exact  simulated")
    for z, d, f in zip(mids, dens, pdf_kappa_sq(mids, p)):
        print(f"{z:5.1f}  {f:.5f}  {d:.5f}  {'#' * int(200 * f)}")


if __name__ == "__main__":
    main()

"""Watch kappa^2 / n^3 approach its hard-edge limit as n grows.

The distance to the limit shrinks roughly like 1/n; dividing out the
trace factor tr(W)/n^2 removes most of the leading correction.

Run:  python demos/hard_edge_limit.py
"""
from __future__ import annotations

from spiked_wishart import AsymptoticParams, Dims, EmpiricalDistribution, SpikeParams, simulate
from spiked_wishart.asymptotic import cdf_scaled_kappa


def main() -> None:
    print(f"{'n':>4} {'alpha':>5} {'KS raw':>8} {'KS trace-corrected':>19}")
    for alpha in (1, 2):
        limit = AsymptoticParams(alpha)
        law = lambda v: cdf_scaled_kappa(v, limit)  # noqa: E731
        for n in (10, 25, 50):
            res = simulate(Dims(n, alpha), SpikeParams(1.0 / n), 10_000, seed=n)
            raw = EmpiricalDistribution(res.kappa_sq / n**3)
            fixed = EmpiricalDistribution(res.kappa_sq / n**3 / res.trace_over_nsq)
            print(f"{n:4d} {alpha:5d} {raw.ks_distance(law):8.4f} {fixed.ks_distance(law):19.4f}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Alignment-event frequency against its union bound as blocks grow.

Uses the wide preset margins (nu = N^3.5, beta = N^3, N' = N^4), where the
bound is 4 K sigma^2 / N, and prints one line per block length.
"""

import argparse
import math

from driftlink import analysis
from driftlink.diamond import NetworkConfig
from driftlink.harness import ExperimentSpec, run_experiment


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sigma2", type=float, default=0.3)
    parser.add_argument("--trials", type=int, default=400)
    parser.add_argument("--sizes", type=int, nargs="+", default=[6, 8, 10, 12])
    args = parser.parse_args()

    P1, P2, _ = analysis.select_powers(2, 1.0, 1.0, 1.0)
    print(f"{'N':>4} {'T':>9} {'measured':>9} {'bound':>7}")
    for N in args.sizes:
        nu, beta = analysis.paper_margins(N)
        cfg = NetworkConfig.symmetric(
            K=2, g=1.0, h=1.0, mu=1.0, sigma2=args.sigma2, N=N, Nprime=N**4,
            P1=P1, P2=P2, nu=nu, beta=beta, seed=100 + N,
        )
        spec = ExperimentSpec(cfg=cfg, M=4, trials=args.trials, decompose=False)
        res = run_experiment(spec)
        bound = analysis.e_idc_probability_bound(2, N, args.sigma2)
        se = 3 * math.sqrt(max(res.e_idc_freq * (1 - res.e_idc_freq), 1e-9) / args.trials)
        flag = "" if res.e_idc_freq <= bound + se else "  VIOLATION"
        print(f"{N:>4} {cfg.T:>9} {res.e_idc_freq:>9.4f} {bound:>7.4f}{flag}")


if __name__ == "__main__":
    main()

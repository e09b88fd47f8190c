"""Compare C_N(alpha, beta) with three Monte Carlo estimators.

Simplex importance sampling, the Gamma-weighted orthant integral and the
Lorentz-ensemble integral each estimate a different rescaling of 1/C_N;
all are mapped back to C_N and printed with their z-scores.

    python scripts/constants_mc.py --max-n 4 --samples 1000000
"""

import argparse
import csv
import math
import sys
from fractions import Fraction

from bures_geom import measures as ms
from bures_geom.montecarlo import MCConfig, default_workers, mc_gamma_trick_integral, mc_lorentz_integral, mc_simplex_integral


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--samples", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = MCConfig(samples=args.samples, seed=args.seed, workers=default_workers())
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["N", "alpha", "beta", "C_exact", "C_float", "z_simplex", "z_gamma", "z_lorentz"])
    for n in range(2, args.max_n + 1):
        for beta in (1, 2):
            for alpha in (Fraction(1), 1 + Fraction(beta, 2), Fraction(1 + beta)):
                p = ms.EnsembleParams(n, alpha, beta)
                c = ms.generalized_constant(p)
                a, b = float(alpha), float(beta)
                top = math.exp(math.lgamma(n * (2 * a - 1 + (n - 1) * b / 2) / 2))
                simplex = mc_simplex_integral(p, cfg).z_score(1 / float(c))
                gamma = mc_gamma_trick_integral(p, cfg).z_score(top / float(c))
                g = (n - 1) * b / 2 + a
                pref = math.exp(sum(math.lgamma(a + j * b / 2) for j in range(n)) - n * 0.5 * math.log(math.pi))
                lorentz = mc_lorentz_integral(g, b, n, cfg).scaled(pref).z_score(top / float(c))
                w.writerow([n, alpha, beta, c.to_string(), repr(float(c)), f"{simplex:.2f}", f"{gamma:.2f}", f"{lorentz:.2f}"])


if __name__ == "__main__":
    main()

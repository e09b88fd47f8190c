"""Print Bures volumes of all rank strata for N <= M as CSV, both fields.

    python scripts/volume_table.py --max-n 6
"""

import argparse
import csv
import sys

from bures_geom import measures as ms


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["beta", "N", "k", "d_k", "exact", "float", "two_route_rel_err"])
    for beta in (1, 2):
        for n in range(1, args.max_n + 1):
            for k in range(n):
                v = ms.submanifold_volume(n, k, beta)
                alt = ms.submanifold_volume_via_constants(n, k, beta)
                err = abs(float(v) - float(alt)) / float(v)
                w.writerow([beta, n, k, ms.dim_submanifold(n, k, beta), v.to_string(), repr(float(v)), f"{err:.1e}"])


if __name__ == "__main__":
    main()

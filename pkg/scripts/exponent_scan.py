"""Scan E(x) for the built-in functions and compare fitted slopes with the predicted exponents.

    python3 scripts/exponent_scan.py --xmax 1e9 --points 40 --out scan.csv
"""

import argparse
import csv
import sys
import time

from fracsums.asymptotics import error_term, fit_exponent, geometric_grid, predicted_exponents
from fracsums.functions import LOG_FLOOR, ONE, SQRT_FLOOR, pow_floor


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--xmin", type=float, default=1e4)
    ap.add_argument("--xmax", type=float, default=1e8)
    ap.add_argument("--points", type=int, default=30)
    ap.add_argument("--out", help="per-point CSV (default: none)")
    args = ap.parse_args(argv)

    fns = [ONE, LOG_FLOOR, pow_floor(1 / 3), SQRT_FLOOR, pow_floor(0.75)]
    xs = geometric_grid(args.xmin, args.xmax, args.points)
    samples = []
    print(f"{'f':>18} {'alpha':>6} {'slope':>8} {'theorem':>8} {'zhai_wu':>8} {'seconds':>8}")
    for f in fns:
        t0 = time.perf_counter()
        errs = [(x, error_term(f, x).value) for x in xs]
        fit = fit_exponent(errs)
        ex = predicted_exponents(f.alpha)
        samples += [(f.name, x, e) for x, e in errs]
        print(f"{f.name:>18} {f.alpha:6.3f} {fit.slope:8.4f} {ex.theorem:8.4f} "
              f"{ex.zhai_wu:8.4f} {time.perf_counter() - t0:8.1f}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["f", "x", "E"])
            w.writerows(samples)
    return 0


if __name__ == "__main__":
    sys.exit(main())

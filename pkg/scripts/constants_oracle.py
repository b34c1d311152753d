#!/usr/bin/env python3
"""Direct partial sums of C1 and C3 for f(n) = floor(sqrt n) up to d = 10**9.

Slow (a few minutes); the result is cached in tests/data and read by the
constants tests.  Usage: python scripts/constants_oracle.py [--dmax N] [--out PATH]
"""

import argparse
import json
import math
import time
from pathlib import Path

import numpy as np

CHUNK = 10**7


def isqrt_array(d):
    r = np.floor(np.sqrt(d.astype(np.float64))).astype(np.int64)
    r -= r * r > d
    r += (r + 1) * (r + 1) <= d
    return r.astype(np.float64)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dmax", type=lambda v: int(float(v)), default=10**9)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1]
                                         / "tests" / "data" / "sqrt_floor_direct.json"))
    args = ap.parse_args()

    t0 = time.time()
    s1, s3 = [], []
    for lo in range(1, args.dmax + 1, CHUNK):
        d = np.arange(lo, min(lo + CHUNK, args.dmax + 1), dtype=np.int64)
        f = isqrt_array(d)
        df = d.astype(np.float64)
        s1.append(math.fsum(f / (df * (df + 1))))
        s3.append(math.fsum(f * (np.log(df) / df - np.log(df + 1) / (df + 1))))
    doc = {"f": "sqrt_floor", "dmax": args.dmax,
           "c1_partial": repr(math.fsum(s1)), "c3_partial": repr(math.fsum(s3)),
           "seconds": round(time.time() - t0, 1)}
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    print(json.dumps(doc))


if __name__ == "__main__":
    main()

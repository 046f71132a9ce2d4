#!/usr/bin/env python3
"""Scan the number-theoretic anchors the structured route relies on.

Checks v_2(5^w - 1) = v_2(w) + 2 (even w) / 2 (odd w), and at odd primes
v_p((1+p)^w - 1) = v_p(w) + 1, over a configurable range; prints a small
histogram of the torsion exponents appearing in the s = 1 row.
"""

import argparse
import collections
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from stabcoh.exact_linalg import vp


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--wmax", type=int, default=4096)
    ap.add_argument("--p", type=int, default=2)
    args = ap.parse_args()

    p, wmax = args.p, args.wmax
    gamma = 5 if p == 2 else p + 1
    hist = collections.Counter()
    for w in range(1, wmax + 1):
        v = vp(gamma**w - 1, p)
        if p == 2:
            want = vp(w, 2) + 2 if w % 2 == 0 else 2
        else:
            want = vp(w, p) + 1
        if v != want:
            print(f"ANCHOR VIOLATED at w={w}: v={v}, predicted {want}")
            return 1
        hist[v] += 1
    print(f"anchor holds for 1 <= w <= {wmax} at p={p}")
    for v in sorted(hist):
        print(f"  v={v}: {hist[v]} weights")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

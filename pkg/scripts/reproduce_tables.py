#!/usr/bin/env python3
"""Reproduce the p = 2 tables by every route and write them to disk.

Emits, under --out (default ./tables):
  golden.json / golden.csv          the reference cohomology table
  hovey_sadofsky.json               the uncompleted Ext input
  ss.json                           the collapsed two-column page
  structured.json, brute.json       the two direct computational routes
and prints a pairwise agreement summary.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from stabcoh.cli import compute_route_table
from stabcoh.config import RunConfig
from stabcoh.spectral import (
    compare_tables,
    hovey_sadofsky_table,
    table_to_csv,
    table_to_json,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-lo", type=int, default=-48)
    ap.add_argument("--t-hi", type=int, default=48)
    ap.add_argument("--smax", type=int, default=5)
    ap.add_argument("--out", default="tables")
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig(p=2, t_lo=args.t_lo, t_hi=args.t_hi, s_max=args.smax)

    tables = {}
    for route in ("golden", "ss", "structured", "brute"):
        tables[route] = compute_route_table(route, cfg)
        (out / f"{route}.json").write_text(table_to_json(tables[route]))
        print(f"wrote {route}.json ({len(tables[route].cells)} nonzero cells)")
    (out / "golden.csv").write_text(table_to_csv(tables["golden"]))
    hs = hovey_sadofsky_table(2, (args.t_lo, args.t_hi), args.smax)
    (out / "hovey_sadofsky.json").write_text(table_to_json(hs))
    print(f"wrote hovey_sadofsky.json ({len(hs.cells)} nonzero cells)")

    ok = True
    names = list(tables)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            diffs = compare_tables(tables[a], tables[b])
            print(f"{a:10s} vs {b:10s}: {len(diffs)} differing cells")
            ok = ok and not diffs
    print("AGREE" if ok else "DISAGREE")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())

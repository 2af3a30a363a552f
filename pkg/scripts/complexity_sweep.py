#!/usr/bin/env python3
"""Greedy operation counts versus instance size, as a plot-ready CSV.

Hub count and per-hub link cap stay fixed while the cell count grows, with
a handful of seeds per size for spread. Prints the least-squares line
through the per-size means; the counter is designed to grow linearly in the
number of cells, so R^2 should sit very close to 1.
"""

import argparse
import csv

import numpy as np

from skyhaul.harness import complexity_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="10,25,50,100,200",
                    help="comma-separated cell counts")
    ap.add_argument("--repeats", type=int, default=5,
                    help="independent seeds per size")
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--hubs", type=int, default=4)
    ap.add_argument("--link-cap", type=int, default=7)
    ap.add_argument("--out", default="complexity_sweep.csv")
    args = ap.parse_args()

    sizes = tuple(sorted(int(s) for s in args.sizes.split(",")))
    rows = []
    for rep in range(args.repeats):
        for row in complexity_sweep(args.seed + rep, sizes=sizes,
                                    n_hubs=args.hubs, link_cap=args.link_cap):
            row["rep"] = rep
            rows.append(row)

    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["rep", "n_cells", "n_hubs",
                                                "link_cap", "op_count",
                                                "sum_rate_bps"])
        writer.writeheader()
        writer.writerows(rows)

    n = np.array(sizes, dtype=float)
    means = np.array([np.mean([r["op_count"] for r in rows if r["n_cells"] == s])
                      for s in sizes])
    slope, intercept = np.polyfit(n, means, 1)
    pred = slope * n + intercept
    r2 = 1.0 - float(((means - pred) ** 2).sum()) / float(((means - means.mean()) ** 2).sum())
    for s, m in zip(sizes, means):
        print(f"  n={s:4d}  mean ops {m:10.1f}")
    print(f"fit: ops ~ {slope:.2f} * n + {intercept:.2f}   R^2 = {r2:.5f}")
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()

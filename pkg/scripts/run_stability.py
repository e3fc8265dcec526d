#!/usr/bin/env python3
"""Reproduce the decision-change table and conflict histograms.

With the defaults this runs 2·10⁵ accepted pairs per class count under the
uniform-mass law and writes plot-ready CSVs next to the chosen output stem:
<stem>.csv for the table and <stem>_hist_<n>.csv for the per-class-count
conflict histograms (all pairs vs decision-change pairs).
"""

import argparse
import csv
from pathlib import Path

from expertfuse.stability import (
    SAMPLING_LAWS,
    conflict_density,
    stability_table,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=200_000,
                        help="accepted pairs per class count")
    parser.add_argument("--seed", type=int, default=2026)
    parser.add_argument("--law", choices=SAMPLING_LAWS, default="uniform")
    parser.add_argument("--classes", type=int, nargs="+", default=[2, 3, 4, 5, 6, 7])
    parser.add_argument("--bins", type=int, default=30)
    parser.add_argument("--stem", type=Path, default=Path("stability"),
                        help="output path stem")
    args = parser.parse_args()

    results = stability_table(args.classes, args.samples, args.seed, law=args.law)
    print(f"{'n':>3} {'pairs':>9} {'change_rate':>12} {'ci':>8} "
          f"{'mean_conflict':>14} {'mean|changed':>13}")
    table_path = args.stem.with_suffix(".csv")
    with open(table_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("n", "samples", "change_rate", "ci"))
        for r in results:
            print(f"{r.n_classes:>3} {r.accepted_pairs:>9} {r.change_rate:>12.4f} "
                  f"{r.ci_halfwidth:>8.4f} {r.mean_conflict:>14.4f} "
                  f"{r.mean_conflict_changed:>13.4f}")
            writer.writerow((r.n_classes, r.accepted_pairs,
                             repr(r.change_rate), repr(r.ci_halfwidth)))
    print(f"wrote {table_path}")

    for n in args.classes:
        full = conflict_density(n, args.samples, args.bins, "all",
                                args.seed, args.law)
        flipped = conflict_density(n, args.samples, args.bins, "decision_change",
                                   args.seed, args.law)
        hist_path = args.stem.parent / f"{args.stem.name}_hist_{n}.csv"
        with open(hist_path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(("bin_low", "bin_high", "freq_all", "freq_change"))
            for i in range(args.bins):
                writer.writerow((repr(full.bin_edges[i]), repr(full.bin_edges[i + 1]),
                                 repr(full.frequencies[i]), repr(flipped.frequencies[i])))
        print(f"wrote {hist_path}")


if __name__ == "__main__":
    main()

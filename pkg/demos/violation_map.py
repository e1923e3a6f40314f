#!/usr/bin/env python3
"""Regions of CHSH violation in the squeezing-temperature plane.

Compares the bin-optimized pseudospins against the unbinned (sign /
reflection) choice on a coarse grid.  The unbinned operators win at small
squeezing and low temperature (they violate for every r > 0 at T = 0);
the binned family overtakes them once the temperature is large enough.
"""

import csv
import pathlib

import numpy as np

from gaussbell import Binned, GridSpec, LGrid, SeriesControl, TmstParams, \
    Unbinned, violation_map

OUT = pathlib.Path(__file__).resolve().parent / "output"


def main():
    OUT.mkdir(exist_ok=True)
    ctrl = SeriesControl(tail_tol=1e-7)
    lgrid = LGrid(-2.0, 2.0, 41)
    r_vals = [round(r, 2) for r in np.arange(0.25, 3.76, 0.25)]
    t_vals = [round(t, 2) for t in np.arange(0.0, 2.01, 0.25)]

    results = {}
    for name, op in (("binned", Binned(1.0)), ("unbinned", Unbinned())):
        grid = GridSpec(r_vals, t_vals, lgrid, op, ctrl)
        cols, rows = violation_map(grid, threads=4)
        results[name] = rows
        with open(OUT / f"violation_map_{name}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(cols)
            writer.writerows(rows)
        print(f"wrote {OUT / f'violation_map_{name}.csv'} ({len(rows)} rows)")

    lookup = {(row[0], row[1]): row for row in results["binned"]}
    print("\n     " + "  ".join(f"T={t:4.2f}" for t in t_vals))
    for r in r_vals:
        cells = []
        for t in t_vals:
            b = lookup[(r, t)][4]
            u = next(row for row in results["unbinned"]
                     if row[0] == r and row[1] == t)[4]
            cells.append({(0, 0): "  .   ", (1, 0): "  B   ",
                          (0, 1): "  U   ", (1, 1): "  BU  "}[(b, u)])
        print(f"r={r:4.2f} " + "".join(cells))
    print("\nB = only bin-optimized violates, U = only unbinned violates,")
    print("BU = both, . = neither")


if __name__ == "__main__":
    main()

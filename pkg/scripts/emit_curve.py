#!/usr/bin/env python3
"""Emit the critical-curve CSV and a crossing-probability curve CSV.

These two files are the interchange contract consumed by the plotting
package in frontend/.
"""

import sys

from cdperc.cli import run


def main() -> int:
    rc = run(["curve", "emit", "--b-min", "0.5", "--b-max", "1.0",
              "--step", "0.005", "--out", "curve.csv"])
    # Bernoulli reference curve on Z^2 windows (kappa = 2d)
    grid = [f"{0.05 * i:.2f}" for i in range(1, 20)]
    rc |= run(["simulate", "--kind", "hypercubic", "--d", "2",
               "--kappa", "4", "--t", *grid, "--n", "20",
               "--samples", "400", "--seed", "7", "--out", "theta.csv"])
    return rc


if __name__ == "__main__":
    sys.exit(main())

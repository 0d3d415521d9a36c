#!/usr/bin/env python3
"""Exploration batches plus dominance verdicts for both algorithms.

Tune --runs upward for tighter confidence bounds; tallies merge across
invocations by concatenating runs under different seeds.
"""

import sys

from cdperc.cli import run


def main() -> int:
    rc = run(["explore", "--variant", "general", "--d", "10", "--kappa", "10",
              "--t", "0.17", "--runs", "60", "--seed", "21",
              "--stop-open", "2000", "--out", "tally_general.csv"])
    rc |= run(["dominance", "--tally", "tally_general.csv",
               "--s", "0.9765", "--b", "0.5622",
               "--out", "verdicts_general.csv"])
    rc |= run(["explore", "--variant", "cubic", "--kappa", "5", "--t", "0.62",
               "--runs", "70", "--seed", "22", "--stop-open", "2000",
               "--trace", "trace_cubic.txt", "--out", "tally_cubic.csv"])
    rc |= run(["dominance", "--tally", "tally_cubic.csv", "--p", "0.5",
               "--out", "verdicts_cubic.csv"])
    return rc


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Run every closed-form verification and write a JSON report.

Exits nonzero if any strict inequality fails, so this doubles as a CI gate.
"""

import sys

from cdperc.cli import run


def main() -> int:
    rc = run(["bounds", "verify-theorem1", "--kappa", "10",
              "--d-max", "4000", "--out", "theorem1_report.json"])
    rc |= run(["bounds", "theorem3", "--t", "62/100", "--p", "1/2",
               "--out", "theorem3_report.json"])
    return rc


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Death census for the open-halfplane module, window by window.

The module is one-dimensional where x + y < 0 and zero elsewhere.  Its
extension has a single birth at the bottom corner, but a death on every
antidiagonal point (n, -n): the census below shows the interior death count
growing linearly with the window, so no finite window ever stabilizes it and
no finite presentation exists.

Usage: python scripts/antidiagonal_deaths.py [--max-n 6] [--field-p 2]
"""

import argparse
import time

from detmod import Box, NEG_INF, PrimeField, diagram_births_deaths, window_module


def halfplane(p):
    return 1 if p[0] + p[1] < 0 else 0


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=6)
    parser.add_argument("--field-p", type=int, default=2)
    args = parser.parse_args()

    field = PrimeField(args.field_p)
    print(f"{'N':>3} {'points':>7} {'births':>7} {'interior deaths':>16} {'secs':>7}")
    for n in range(2, args.max_n + 1):
        start = time.perf_counter()
        diagram = window_module(field, Box((-n, -n), (n, n)), halfplane)
        report = diagram_births_deaths(diagram)
        interior = sorted(p for p in report.deaths
                          if all(c != NEG_INF and -n < c < n for c in p))
        elapsed = time.perf_counter() - start
        print(f"{n:>3} {len(diagram.points):>7} {len(report.births):>7} "
              f"{len(interior):>16} {elapsed:>7.2f}")
        assert len(interior) == 2 * n - 1
        assert all(p == (p[0], -p[0]) for p in interior)
    print("interior deaths sit exactly on the antidiagonal; the count 2N-1 "
          "never stabilizes")


if __name__ == "__main__":
    main()

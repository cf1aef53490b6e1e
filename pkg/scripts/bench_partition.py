"""Measure greedy partition growth and build time by depth.

The growth conditions force |I_{n+1}| >= 2^(n+1) |I_n|^2, so interval
sizes gain roughly a doubling digit count per level and build times grow
by about a factor of three per level past depth 20.  This script prints
the measured wall times and digit counts so the depth-30 infeasibility
documented in the acceptance suite can be reproduced on any machine.

Usage: python scripts/bench_partition.py [MAX_DEPTH] [--budget SECONDS]
"""

import argparse
import sys
import time

from idealbench.construction import build_partition, verify_partition


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("max_depth", nargs="?", type=int, default=24)
    parser.add_argument("--budget", type=float, default=60.0,
                        help="stop once one build exceeds this many seconds")
    args = parser.parse_args()

    for depth in range(4, args.max_depth + 1, 2):
        t0 = time.time()
        p = build_partition(depth)
        build = time.time() - t0
        t1 = time.time()
        passed = verify_partition(p).passed
        verify = time.time() - t1
        bits = p.lengths[-1].bit_length()
        print(
            f"depth {depth:2d}: build {build:8.3f}s verify {verify:8.3f}s "
            f"last interval ~{bits / 3.32:.3g} digits passed={passed}"
        )
        if build > args.budget:
            print("budget exceeded, stopping")
            break
    return 0


if __name__ == "__main__":
    sys.exit(main())

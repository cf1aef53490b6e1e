"""Run the acceptance suite and write all certificates to a directory.

Usage: python scripts/run_suite.py [OUT_DIR] [--seed N] [--budget SECONDS]
"""

import argparse
import sys

from idealbench.acceptance import run_all


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", nargs="?", default="certificates")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget", type=float, default=15.0)
    args = parser.parse_args()

    results = run_all(seed=args.seed, out_dir=args.out_dir, depth30_budget=args.budget)
    for result in results:
        print(result.line())
    written = sum(len(r.certificates) for r in results)
    print(f"{written} certificates written to {args.out_dir}/")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())

"""Smallest Ramsey witnesses in truncated linear orders.

For each pair of sizes (a, b) and color count, report the least n such that
[n] is a witness for ([a], [b]) inside the category of orders of size <= N.
With a=2, b=3 and two colors this is the classical R(3,3) = 6.
"""

import argparse
import time

from koenig_ramsey.corpus import linear_orders
from koenig_ramsey.ramsey import find_witness
from koenig_ramsey.relstruct import structures_category


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--bound", type=int, default=6, help="largest order in the truncation")
    ap.add_argument("--colors", type=int, nargs="+", default=[2])
    args = ap.parse_args(argv)
    cat = structures_category(linear_orders(args.bound))
    for n in args.colors:
        for a in range(1, args.bound + 1):
            for b in range(a, args.bound + 1):
                start = time.perf_counter()
                c = find_witness(cat, f"o{a}", f"o{b}", n)
                found = "absent" if c is None else f"[{c[1:]}]"
                print(f"colors={n} A=[{a}] B=[{b}] witness={found} ({time.perf_counter() - start:.2f}s)")


if __name__ == "__main__":
    main()

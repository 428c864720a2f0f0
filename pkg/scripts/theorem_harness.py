"""Run the solvability harness over the standard corpus and print a table."""

import argparse
import json
import random
import time

from koenig_ramsey.corpus import standard_corpus
from koenig_ramsey.harness import check_category


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--max-size", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="one JSON object per line")
    args = ap.parse_args(argv)
    ok = True
    for i, entry in enumerate(standard_corpus()):
        start = time.perf_counter()
        res = check_category(entry.category, max_size=args.max_size, samples=args.samples, rng=random.Random(args.seed + i))
        ok &= res.consistent
        if args.json:
            print(json.dumps({"name": entry.name, **res.as_dict()}))
            continue
        if res.obstruction is None:
            detail = f"{res.diagrams_checked} diagrams, {res.unsolved} unsolved"
        else:
            detail = f"{res.obstruction} obstruction at {tuple(res.obstruction_pair)}, solvable={res.obstruction_solvable}"
        print(f"{entry.name:18s} confluent={res.confluent!s:5s} ramsey={res.ramsey!s:5s} "
              f"{'ok ' if res.consistent else 'BAD'} {detail}  ({time.perf_counter() - start:.2f}s)")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())

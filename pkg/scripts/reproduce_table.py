#!/usr/bin/env python3
"""Print the bounds table for RP^n, n = 1..23, and flag where each bound is tight."""
import argparse

from tcrp import bounds


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=bounds.TABLE_MAX_N)
    args = ap.parse_args()
    print(f"{'n':>3} {'lower':>5} {'TC':>4} {'upper':>5}  tight")
    for n in range(1, args.max + 1):
        r = bounds.bounds_report(n)
        tags = []
        if r.tight_lower:
            tags.append("lower")
        if r.upper_milgram == r.table_value:
            tags.append("milgram")
        print(f"{n:>3} {r.lower:>5} {r.table_value:>4} {r.upper:>5}  {','.join(tags)}")


if __name__ == "__main__":
    main()

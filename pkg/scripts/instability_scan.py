#!/usr/bin/env python3
"""Instability estimates against sample size, for built-in and Veronese planners.

The estimate is a lower bound on the order of instability and is monotone in
the sample count; the rule count bounds it above.
"""
import argparse

from tcrp.instability import estimate_instability
from tcrp.planner import builtin_planner, veronese_planner


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--delta", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = (10**2, 10**3, 10**4, 10**5)
    print("planner     n  rules  " + "  ".join(f"{s:>7}" for s in sizes))
    for n in range(1, args.max_n + 1):
        for name, p in (("builtin", builtin_planner(n)), ("veronese", veronese_planner(n))):
            est = [estimate_instability(p, s, args.delta, seed=args.seed).order for s in sizes]
            print(f"{name:<10} {n:>2} {len(p):>6}  " + "  ".join(f"{e:>7}" for e in est))


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Scan the ring's per-node age over sqrt(n) and locate where it crosses 1.25.

The 1.25*sqrt(n) line is an empirical approximation, not a bound; this
script shows the ratio creeping up through the corridor and reports the
first size at which the age exceeds the approximation.
"""

import argparse
import math

from gossip_age import ring_age_profile


def ratio(n, lambda_self, lam):
    return ring_age_profile(n, lambda_self, lam).per_node_age / math.sqrt(n)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="100,500,1000,5000,10000,20000,40000",
                    help="comma-separated ring sizes for the table")
    ap.add_argument("--scan-from", type=int, default=40_390)
    ap.add_argument("--scan-to", type=int, default=40_410)
    ap.add_argument("--lambda-self", dest="lambda_self", type=float, default=1.0)
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    args = ap.parse_args()

    print(f"{'n':>8} {'age':>14} {'age/sqrt(n)':>12}")
    for n in (int(s) for s in args.sizes.split(",")):
        r = ratio(n, args.lambda_self, args.lam)
        age = r * math.sqrt(n)
        print(f"{n:>8} {age:>14.6f} {r:>12.9f}")

    crossing = None
    for n in range(args.scan_from, args.scan_to + 1):
        if ratio(n, args.lambda_self, args.lam) > 1.25:
            crossing = n
            break
    if crossing is None:
        print(f"\nno crossing of 1.25 in [{args.scan_from}, {args.scan_to}]")
    else:
        print(f"\nage first exceeds 1.25*sqrt(n) at n = {crossing}")
        for n in (crossing - 1, crossing):
            print(f"  ratio({n}) = {ratio(n, args.lambda_self, args.lam):.12f}")


if __name__ == "__main__":
    main()

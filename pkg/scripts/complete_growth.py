#!/usr/bin/env python3
"""Tabulate the complete graph's per-node age against its harmonic bounds.

The relative gap between the bounds shrinks as n grows, making the
logarithmic growth of the age visible directly from the table.
"""

import argparse
import math

from gossip_age import complete_age_profile, complete_bounds


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1,2,4,8,16,64,256,1024,10000,100000",
                    help="comma-separated network sizes")
    ap.add_argument("--lambda-self", dest="lambda_self", type=float, default=1.0)
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'n':>8} {'age':>12} {'lower':>12} {'upper':>12} {'age/ln(n)':>10} {'rel gap':>10}")
    for n in sizes:
        age = complete_age_profile(n, args.lambda_self, args.lam).per_node_age
        b = complete_bounds(n, args.lambda_self, args.lam)
        log_ratio = age / math.log(n) if n > 1 else float("nan")
        rel_gap = (b.upper - b.lower) / age
        print(f"{n:>8} {age:>12.6f} {b.lower:>12.6f} {b.upper:>12.6f} {log_ratio:>10.4f} {rel_gap:>10.2e}")


if __name__ == "__main__":
    main()

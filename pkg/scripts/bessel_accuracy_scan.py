"""Scan bessel_j against the quadrature oracle on a random (nu, x) grid.

Reports the worst absolute and relative deviation per evaluation regime and
counts points outside "relative 1e-9 or absolute 1e-12".  Relative error
near a zero of J is rounding-limited, so the absolute column matters there.

    python scripts/bessel_accuracy_scan.py --points 500
"""
import argparse
import collections
import sys
import time

import numpy as np

from fluxscat.specfun import bessel_j, bessel_j_oracle


def run():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=500)
    parser.add_argument("--nu-max", type=float, default=150.0)
    parser.add_argument("--x-max", type=float, default=200.0)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    worst = collections.defaultdict(lambda: [0, 0.0, 0.0, 0])
    started = time.perf_counter()
    for nu, x in zip(rng.uniform(0, args.nu_max, args.points), rng.uniform(0.5, args.x_max, args.points)):
        ev = bessel_j(nu, x)
        ref = bessel_j_oracle(nu, x)
        diff = abs(ev.value - ref)
        stats = worst[ev.method]
        stats[0] += 1
        stats[1] = max(stats[1], diff)
        if abs(ref) > 1e-12:
            stats[2] = max(stats[2], diff / abs(ref))
        stats[3] += diff > max(1e-9 * abs(ref), 1e-12)
    for method, (count, absmax, relmax, bad) in sorted(worst.items()):
        print(f"{method:>10}: {count:4d} points, max abs diff {absmax:.2e}, max rel diff {relmax:.2e},"
              f" {bad} outside tolerance")
    print(f"{time.perf_counter() - started:.1f} s")
    return 0


if __name__ == "__main__":
    sys.exit(run())

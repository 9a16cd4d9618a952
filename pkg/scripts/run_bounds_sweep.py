#!/usr/bin/env python3
"""
Script to run the random polygon sweep of pi <= L / delta <= 2 pi
"""
import argparse
import math
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from oval.core.config import settings
from oval.core.exceptions import OvalError
from oval.core.logging import setup_logging
from oval.services.isoperimetric_service import IsoperimetricService


def run_bounds_sweep(count: int, seed: int, n_min: int, n_max: int) -> int:
    """Sweep and print a summary; returns the process exit code"""
    print("=" * 60)
    print(f"Bounds sweep: {count} polygons, seed {seed}, {n_min} <= n <= {n_max}")
    print("=" * 60 + "\n")

    try:
        result = IsoperimetricService().bounds_sweep(count, seed, n_min, n_max)
    except OvalError as e:
        print(f"\nError: {e.message}")
        return e.exit_code

    print(f"min L/delta:   {result.min_quotient:.10f}  (pi = {math.pi:.10f})")
    print(f"max L/delta:   {result.max_quotient:.10f}  (2 pi = {2 * math.pi:.10f})")
    print(f"L < pi delta:  {result.conjecture_violations}")
    print(f"skipped:       {result.skipped}")
    if result.argmin_polygon is not None:
        print("\nPolygon with the smallest quotient:")
        for x, y in result.argmin_polygon.xy:
            print(f"{x!r} {y!r}")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=100000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--n-min", type=int, default=3)
    parser.add_argument("--n-max", type=int, default=12)
    args = parser.parse_args()

    setup_logging(settings)
    sys.exit(run_bounds_sweep(args.count, args.seed, args.n_min, args.n_max))

#!/usr/bin/env python3
"""Cross-check the independent force routes against each other.

Prints, for a grid of separations and cutoffs, the closed-form force and
the relative deviation of the numeric-quadrature sum, the exact per-n sum,
and the truncated asymptotic series.  The first two should sit at the
requested summation tolerance; the series drifts with lambda^6 once the
cutoff stops being small.

Example:
    python3 scripts/route_comparison.py --tol 1e-10
"""

import argparse
import math

from casimir_plates import regsum
from casimir_plates.units import NATURAL


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--a", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    parser.add_argument("--ratios", type=float, nargs="+",
                        default=[0.05, 0.1, 0.5, 1.0],
                        help="values of lambda pi / a")
    parser.add_argument("--tol", type=float, default=1e-10,
                        help="numeric-route tolerance")
    args = parser.parse_args()

    print(f"{'a':>6} {'lam*pi/a':>9} {'closed form':>18} "
          f"{'numeric dev':>12} {'per-n dev':>12} {'series dev':>12}")
    worst = 0.0
    for a in args.a:
        for ratio in args.ratios:
            reg = regsum.Regulator(ratio * a / math.pi)
            closed = regsum.force_closed_form(a, reg, NATURAL)
            numeric = regsum.force_sum_numeric(a, reg, NATURAL, tol=args.tol)
            per_n = regsum.force_per_n_sum(a, reg, NATURAL)
            series, _ = regsum.series_value(a, reg, NATURAL)
            scale = abs(closed)
            devs = [abs(v - closed) / scale for v in (numeric, per_n, series)]
            worst = max(worst, *devs[:2])
            print(f"{a:6.2f} {ratio:9.3f} {closed:18.10e} "
                  f"{devs[0]:12.3e} {devs[1]:12.3e} {devs[2]:12.3e}")
    print(f"# worst summation-route deviation: {worst:.3e}")


if __name__ == "__main__":
    main()

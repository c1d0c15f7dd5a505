"""Total Gauss area of the (p, q) family on growing disks, against the radial closed form.

Prints CSV: p, q, R, total/2π, closed/2π, rel_err.
"""
import argparse
import math
import sys

from minsurf4 import area as ar
from minsurf4 import catalog
from minsurf4.surface import sample_surface


def closed_form(p, q, R):
    return sum(k * R ** (2 * k) / (1 + R ** (2 * k)) for k in (p, q))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=1)
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--radii", type=float, nargs="+", default=[0.5, 1, 2, 5, 10, 20, 50])
    ap.add_argument("--grid", type=int, default=32)
    args = ap.parse_args(argv)
    print("p,q,R,total_over_2pi,closed_over_2pi,rel_err")
    for R in args.radii:
        s = sample_surface(catalog.sigma_pq(args.p, args.q, R, args.grid))
        got = ar.to_grassmannian(ar.gauss_curve_area(s)) / (2 * math.pi)
        want = closed_form(args.p, args.q, R)
        print(f"{args.p},{args.q},{R:g},{got:.10g},{want:.10g},{abs(got - want) / want:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

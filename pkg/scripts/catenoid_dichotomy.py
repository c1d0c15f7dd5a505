"""Catenoid slabs |x| <= c: eigenvalue of the Gauss image, certificate, and second variation sign.

The stability switch should sit where the numeric eigenvalue crosses 2
and the discretized second variation changes sign.
"""
import argparse
import sys

from minsurf4 import catalog
from minsurf4.pipeline import RunConfig, analyze


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--half-widths", type=float, nargs="+", default=[0.3, 0.6, 0.9, 1.2, 1.5, 2.0, 2.5])
    ap.add_argument("--grid", type=int, default=32)
    ap.add_argument("--mesh-level", type=int, default=5)
    args = ap.parse_args(argv)
    cfg = RunConfig(grid=args.grid, mesh_level=args.mesh_level)
    print("half_width,image_prop,lambda1_numeric,verdict,second_variation_min")
    for c in args.half_widths:
        a = analyze(catalog.catenoid(-c, c, args.grid, f"catenoid_{c:g}"), cfg)
        fn = a.certificates["flat_normal"]
        lam = a.facts.get("lambda1_numeric")
        sv = a.second_variation.min_eig if a.second_variation else float("nan")
        lam_txt = "none" if lam is None else f"{lam:.6g}"
        print(f"{c:g},{a.areas.aL_cov_prop:.6g},{lam_txt},{fn.verdict.value},{sv:.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

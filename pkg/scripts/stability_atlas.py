"""Draw the proportionate-area atlas with every catalog surface placed on it."""
import argparse
import sys
from pathlib import Path

from minsurf4 import catalog
from minsurf4.cli import atlas_svg, surface_point
from minsurf4.pipeline import RunConfig


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("atlas.svg"))
    ap.add_argument("--grid", type=int, default=16)
    ap.add_argument("--pullback", action="store_true", help="use clipped pullback areas instead of coverage")
    args = ap.parse_args(argv)
    cfg = RunConfig(grid=args.grid, coverage=not args.pullback)
    pts = []
    for name in catalog.DEFAULT_SET:
        label, a, b = surface_point(catalog.by_name(name, args.grid), cfg)
        pts.append((label, a, b))
        print(f"{label}: a = {a:.4f}, b = {b:.4f}")
    args.out.write_text(atlas_svg(pts), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Write classification atlas slices x3 = s as CSV files, one per slice.

    python scripts/atlas_slices.py --out atlas --grid 201 --s 0.1 0.22 0.25 0.3

Also prints per-slice tag counts, which is a quick way to see the C1 set
shrink away from the ellipse once s passes 1/5.
"""

import argparse
import os
from collections import Counter

from pgcubic.cli import SCAN_COLUMNS, RunConfig, cmd_region_scan, render


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="atlas", help="output directory")
    ap.add_argument("--grid", type=int, default=101)
    ap.add_argument("--s", type=float, nargs="+", default=[0.1, 0.2, 0.22, 0.25, 0.28, 0.31])
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    config = RunConfig(grid=(args.grid, args.grid, max(2, len(args.s))), workers=args.workers)
    for s in args.s:
        records = cmd_region_scan(s, config)
        path = os.path.join(args.out, f"slice_s{s:.4f}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(render([r.__dict__ for r in records], SCAN_COLUMNS, config))
        counts = Counter(r.tag.value for r in records)
        print(f"s={s:.4f}  {path}  " + "  ".join(f"{k}={v}" for k, v in sorted(counts.items())))


if __name__ == "__main__":
    main()

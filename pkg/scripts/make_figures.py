"""Write the four (beta, measure) region plots as CSV and SVG.

    python3 scripts/make_figures.py [--out figures] [--resolution 201]
"""

import argparse
from pathlib import Path

from betabounds.bounds import ENVELOPE_KINDS
from betabounds.region import export_curve, render_svg, sample_region


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("figures"))
    ap.add_argument("--resolution", type=int, default=201)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for kind in ENVELOPE_KINDS:
        curve = sample_region(kind, args.resolution)
        for ext, data in (("csv", export_curve(curve, "csv")), ("svg", render_svg(curve))):
            path = args.out / f"region_{kind.value}.{ext}"
            path.write_bytes(data)
            print(path)


if __name__ == "__main__":
    main()

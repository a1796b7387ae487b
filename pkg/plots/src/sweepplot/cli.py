"""CLI: plot-sweep --in sweep.csv --out figure.png [--families a,b] [--guides]"""

from __future__ import annotations

import argparse
import sys

from .render import EmptyData, PlotSpec, SchemaMismatch, render_sweep_plot


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot-sweep", description=__doc__)
    parser.add_argument("--in", dest="input_csv", required=True, help="sweep CSV file")
    parser.add_argument("--out", dest="output_path", required=True, help="PNG or SVG path")
    parser.add_argument("--families", default="", help="comma-separated family filter")
    parser.add_argument(
        "--guides",
        action="store_true",
        help="draw the slope-1/2 and slope-1 reference lines",
    )
    args = parser.parse_args(argv)
    families = tuple(f for f in args.families.split(",") if f)
    spec = PlotSpec(
        input_csv=args.input_csv,
        output_path=args.output_path,
        families=families,
        show_half_guide=args.guides,
        show_linear_guide=args.guides,
    )
    try:
        path = render_sweep_plot(spec)
    except (SchemaMismatch, EmptyData, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(path)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())

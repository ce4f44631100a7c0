"""Command line: rmplot render --fer in.csv --out out.png
                 rmplot render --tables in.csv --out out.csv"""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, RenderError, render_fer, render_tables


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmplot")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render FER curves or complexity tables")
    p.add_argument("--fer", metavar="CSV", help="input CSV for FER curves")
    p.add_argument("--tables", metavar="CSV", help="input CSV for the table grid")
    p.add_argument("--out", required=True)
    p.add_argument("--ml-overlay", action="store_true")
    p.set_defaults(func=cmd_render)
    return parser


def cmd_render(args) -> int:
    if bool(args.fer) == bool(args.tables):
        raise RenderError("pass exactly one of --fer or --tables")
    if args.fer:
        spec = PlotSpec(csv_paths=[args.fer], ml_overlay=args.ml_overlay,
                        out_image=args.out)
        caption = render_fer(spec)
        print(caption)
    else:
        spec = PlotSpec(csv_paths=[args.tables], out_table=args.out)
        render_tables(spec)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RenderError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: one figure per invocation."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import Family, FigureSpec, PlotError, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdnbench-plot",
        description="Render a chart from sdnbench benchmark CSVs.",
    )
    parser.add_argument(
        "--family",
        required=True,
        choices=[f.value for f in Family],
        help="chart family to draw",
    )
    parser.add_argument(
        "--csv",
        required=True,
        action="append",
        metavar="PATH",
        help="input CSV (repeat to combine several files)",
    )
    parser.add_argument("--topology", help="keep only rows for this topology")
    parser.add_argument("--hosts", type=int, help="keep only rows for this host count")
    parser.add_argument(
        "--out",
        required=True,
        metavar="IMG",
        help="output image path (.png or .svg)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    spec = FigureSpec(
        family=Family(args.family),
        csv_paths=tuple(Path(p) for p in args.csv),
        out_path=Path(args.out),
        topology=args.topology,
        hosts=args.hosts,
    )
    try:
        render(spec)
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Batch driver: render every figure slice found in a directory.

Usage: ``render_figures <csv_dir> <out_dir> [--format png|svg]``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import SchemaError, render
from .specs import SUPPORTED_IDS


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="render_figures")
    parser.add_argument("csv_dir", type=Path)
    parser.add_argument("out_dir", type=Path)
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    args = parser.parse_args(argv)

    if not args.csv_dir.is_dir():
        print(f"error: {args.csv_dir} is not a directory", file=sys.stderr)
        return 1

    rendered = 0
    for figure_id in SUPPORTED_IDS:
        source = args.csv_dir / f"fig{figure_id}.csv"
        if not source.exists():
            print(f"skip fig{figure_id}: no {source.name} in {args.csv_dir}")
            continue
        target = args.out_dir / f"fig{figure_id}.{args.format}"
        try:
            render(figure_id, source, target)
        except SchemaError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"wrote {target}")
        rendered += 1

    if rendered == 0:
        print("error: no figure slices found", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

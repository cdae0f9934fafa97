"""Command-line front end: ``plot --kind level --in level.csv --out level.png``."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureSpec, SchemaError, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render figures from ksdgof result CSVs."
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument(
        "--in", dest="inputs", required=True, nargs="+", help="input CSV path(s)"
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--alpha", type=float, default=0.01)
    parser.add_argument(
        "--no-confidence-band",
        dest="confidence_band",
        action="store_false",
        help="suppress binomial error bars",
    )
    args = parser.parse_args(argv)
    spec = FigureSpec(
        inputs=tuple(args.inputs),
        kind=args.kind,
        output=args.out,
        confidence_band=args.confidence_band,
        alpha=args.alpha,
    )
    try:
        render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

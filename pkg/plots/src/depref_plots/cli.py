"""plots <kind> --in <csv> [--in <csv> ...] --out <png|svg>

Exit codes: 0 success (including a skipped empty convergence plot),
2 usage or schema error, 3 I/O error.
"""
import argparse
import sys

from .data import SchemaError
from .render import KINDS, PlotSpec, render


def build_parser():
    ap = argparse.ArgumentParser(prog="plots", description="Render figures from depref CSV files")
    ap.add_argument("kind", choices=KINDS)
    ap.add_argument("--in", dest="inputs", action="append", required=True,
                    metavar="CSV", help="input CSV (repeatable for convergence overlays)")
    ap.add_argument("--out", required=True, help="output image (png or svg)")
    ap.add_argument("--title", default="")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = PlotSpec(kind=args.kind, inputs=tuple(args.inputs), output=args.out,
                        title=args.title)
        result = render(spec)
    except SchemaError as exc:
        print(f"plots: schema error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"plots: invalid input: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"plots: I/O error: {exc}", file=sys.stderr)
        return 3
    if result.skipped:
        print("plots: nothing to draw (empty input), skipped")
    else:
        print(f"plots: wrote {result.output} ({len(result.curves)} curves)")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end: mdvne-plot RUN_DIR [--out DIR] [--format png|svg]."""

import argparse
import sys

from .loader import LoaderError
from .render import render

EXIT_OK = 0
EXIT_INPUT = 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mdvne-plot",
        description="Render comparison panels from a simulator run directory")
    parser.add_argument("run_dir",
                        help="directory holding the per-seed CSVs and summary.json")
    parser.add_argument("--out", default="figures",
                        help="output directory (default: figures)")
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    args = parser.parse_args(argv)
    try:
        written = render(args.run_dir, args.out, fmt=args.format)
    except (LoaderError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

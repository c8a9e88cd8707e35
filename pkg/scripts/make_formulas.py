#!/usr/bin/env python3
"""Regenerate the shipped formula corpus.

The equitable colouring/connected sentences are generated per part count;
pass --parts to emit extra instances beyond the default c=3.
"""

import argparse
from pathlib import Path

from cardmso import corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="formulas", help="output directory")
    parser.add_argument(
        "--parts", type=int, nargs="*", default=[],
        help="additional part counts for the equitable sentences",
    )
    args = parser.parse_args()
    out = Path(args.out)
    written = corpus.write_corpus(out)
    for c in args.parts:
        path = out / f"equitable_coloring_{c}.cms"
        path.write_text(corpus.equitable_coloring(c))
        written.append(path.name)
        path = out / f"equitable_connected_{c}.cms"
        path.write_text(corpus.equitable_connected(c))
        written.append(path.name)
    for name in written:
        print(out / name)


if __name__ == "__main__":
    main()

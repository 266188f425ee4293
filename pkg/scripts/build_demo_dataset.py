#!/usr/bin/env python3
"""Materialise the bundled four-day demo dataset and print serve instructions.

The dataset is synthetic but shaped like a real curation run: a corpus
store, 1,185 thread documents across four days, and a fully annotated
event log (291 rumours in 42 stories).
"""

import argparse
import sys
from pathlib import Path

from rumourkit.fixtures import build_ferguson_fixture, write_ferguson_dataset


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo-dataset", help="output directory")
    parser.add_argument("--unannotated", action="store_true", help="skip the annotation log (fresh labelling run)")
    args = parser.parse_args()

    out = Path(args.out)
    fixture = build_ferguson_fixture()
    paths = write_ferguson_dataset(fixture, out)
    if args.unannotated:
        paths["log"].write_text("", encoding="utf-8")
    print(f"corpus store: {paths['corpus']}")
    print(f"thread docs:  {paths['threads']} ({len(fixture.threads)} threads)")
    print(f"annotations:  {paths['log']}")
    print()
    print("serve it with:")
    print(f"  rumourkit serve --threads-dir {paths['threads']} --log {paths['log']} --port 8100")
    print("then report with:")
    print(f"  rumourkit report --threads-dir {paths['threads']} --log {paths['log']} --out report.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Compute orbit closures for the problem documents in scripts/problems.

    python3 scripts/closure_examples.py [--trace] [files...]
"""

import argparse
import json
import sys
import time
from pathlib import Path

from planeorbit.cli import dumps, run

HERE = Path(__file__).resolve().parent


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("files", nargs="*", type=Path)
    parser.add_argument("--trace", action="store_true")
    args = parser.parse_args(argv)
    files = args.files or sorted((HERE / "problems").glob("*.json"))
    for path in files:
        doc = json.loads(path.read_text())
        start = time.perf_counter()
        report = run("closure", doc, trace=args.trace)
        elapsed = time.perf_counter() - start
        gens = ", ".join(g if isinstance(g, str) else "(" + ", ".join(g) + ")" for g in doc["generators"])
        print(f"# {path.name}: <{gens}> at {tuple(doc['point'])}  [{elapsed:.2f} s]")
        print(dumps(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())

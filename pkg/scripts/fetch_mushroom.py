#!/usr/bin/env python3
"""Download the UCI mushroom dataset for the offline loader and tests.

The classification corpus (8124 gilled mushrooms, 22 categorical features,
edible or poisonous) is not redistributable inside this repository, so the
loader reads it from data/agaricus-lepiota.data (or $EVORULES_MUSHROOM) and
the test suite skips mushroom cases when the file is absent. Run this once
on a machine with network access:

    python3 scripts/fetch_mushroom.py

The download is validated structurally (row count, column count, the
class and field alphabets) before anything is written to the destination.
"""

from __future__ import annotations

import argparse
import os
import sys
import urllib.error
import urllib.request

CANONICAL_URL = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/mushroom/agaricus-lepiota.data"
)

EXPECTED_ROWS = 8124
EXPECTED_COLS = 23


def validate(text: str) -> list[str]:
    lines = [ln for ln in text.strip().split("\n") if ln]
    if len(lines) != EXPECTED_ROWS:
        raise ValueError(f"expected {EXPECTED_ROWS} rows, got {len(lines)}")
    for i, line in enumerate(lines):
        parts = line.split(",")
        if len(parts) != EXPECTED_COLS:
            raise ValueError(f"row {i}: expected {EXPECTED_COLS} fields, got {len(parts)}")
        if parts[0] not in ("e", "p"):
            raise ValueError(f"row {i}: class field {parts[0]!r} is not 'e' or 'p'")
        for j, cell in enumerate(parts[1:], 1):
            if len(cell) != 1 or not (cell.isalpha() or cell == "?"):
                raise ValueError(f"row {i}, field {j}: unexpected cell {cell!r}")
    return lines


def fetch(url: str, timeout: float) -> str:
    req = urllib.request.Request(url, headers={"User-Agent": "dataset-fetch/1.0"})
    with urllib.request.urlopen(req, timeout=timeout) as resp:
        return resp.read().decode("utf-8")


def main() -> int:
    repo = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument(
        "--dest",
        default=os.path.join(repo, "data", "agaricus-lepiota.data"),
        help="where to write the validated file (default: data/ in the repo)",
    )
    parser.add_argument("--timeout", type=float, default=60.0)
    parser.add_argument(
        "--url",
        action="append",
        default=[],
        help="extra source to try before the canonical UCI address (repeatable)",
    )
    args = parser.parse_args()

    if os.path.exists(args.dest):
        try:
            with open(args.dest, encoding="utf-8") as fh:
                validate(fh.read())
        except ValueError as e:
            print(f"existing {args.dest} fails validation ({e}); refetching", file=sys.stderr)
        else:
            print(f"{args.dest} already present and valid ({EXPECTED_ROWS} rows)")
            return 0

    last_error: Exception | None = None
    for url in [*args.url, CANONICAL_URL]:
        print(f"fetching {url} ...")
        try:
            text = fetch(url, args.timeout)
            validate(text)
        except (urllib.error.URLError, OSError, ValueError) as e:
            print(f"  failed: {e}", file=sys.stderr)
            last_error = e
            continue
        os.makedirs(os.path.dirname(args.dest), exist_ok=True)
        with open(args.dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text.strip() + "\n")
        print(f"wrote {EXPECTED_ROWS} rows to {args.dest}")
        print("mushroom tests will now run; see tests/test_acceptance.py")
        return 0

    print(f"all sources failed; last error: {last_error}", file=sys.stderr)
    print("if this machine has no network access, copy agaricus-lepiota.data", file=sys.stderr)
    print(f"from elsewhere to {args.dest} or set EVORULES_MUSHROOM to its path", file=sys.stderr)
    return 1


if __name__ == "__main__":
    raise SystemExit(main())

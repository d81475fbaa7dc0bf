"""Bundled study datasets.

Tic-tac-toe endgames are reconstructed exactly by enumerating every completed
game (958 boards: 626 where x has a three-in-a-row, 332 where it does not),
so that study runs without any network access. The mushroom loader parses the
classic 8124-row agaricus-lepiota.data file when a local copy exists; use
scripts/fetch_mushroom.py on a networked machine to download it.
"""
from __future__ import annotations

import csv
import os

import numpy as np

from .data import CATEGORICAL, Dataset, FeatureSchema
from .oracle import format_cell

TTT_FEATURES = [
    "top-left-square",
    "top-middle-square",
    "top-right-square",
    "middle-left-square",
    "middle-middle-square",
    "middle-right-square",
    "bottom-left-square",
    "bottom-middle-square",
    "bottom-right-square",
]

_LINES = [(0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8), (2, 4, 6)]


def _winner(board: list[str]) -> str | None:
    for i, j, k in _LINES:
        if board[i] != "b" and board[i] == board[j] == board[k]:
            return board[i]
    return None


def tictactoe_dataset() -> Dataset:
    """All terminal tic-tac-toe boards ('x' moves first), plus a class column:
    'positive' when x wins, else 'negative'."""
    terminal: set[tuple[str, ...]] = set()

    def play(board: list[str], player: str):
        if _winner(board) is not None or "b" not in board:
            terminal.add(tuple(board))
            return
        nxt = "o" if player == "x" else "x"
        for i in range(9):
            if board[i] == "b":
                board[i] = player
                play(board, nxt)
                board[i] = "b"

    play(["b"] * 9, "x")
    boards = sorted(terminal)
    rows = [list(b) + ["positive" if _winner(list(b)) == "x" else "negative"] for b in boards]
    return dataset_from_string_rows(TTT_FEATURES + ["class"], rows)


def dataset_from_string_rows(names: list[str], rows: list[list[str]]) -> Dataset:
    """All-categorical dataset; category order is first appearance."""
    schema = []
    columns = []
    for j, name in enumerate(names):
        cats: list[str] = []
        seen: dict[str, int] = {}
        codes = np.empty(len(rows), dtype=np.int32)
        for i, row in enumerate(rows):
            v = row[j]
            if v not in seen:
                seen[v] = len(cats)
                cats.append(v)
            codes[i] = seen[v]
        schema.append(FeatureSchema(name, CATEGORICAL, categories=tuple(cats)))
        columns.append(codes)
    return Dataset(schema, columns)


def write_csv(data: Dataset, path: str, extra_columns: dict[str, list[str]] | None = None):
    """Write a dataset (plus optional label columns) as a headered CSV."""
    extras = extra_columns or {}
    for name, col in extras.items():
        if len(col) != data.n_rows:
            raise ValueError(f"extra column {name!r} has wrong length")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([f.name for f in data.schema] + list(extras))
        for i in range(data.n_rows):
            row = [format_cell(v) for v in data.row(i)]
            row += [extras[name][i] for name in extras]
            w.writerow(row)


MUSHROOM_FEATURES = [
    "cap-shape",
    "cap-surface",
    "cap-color",
    "bruises",
    "odor",
    "gill-attachment",
    "gill-spacing",
    "gill-size",
    "gill-color",
    "stalk-shape",
    "stalk-root",
    "stalk-surface-above-ring",
    "stalk-surface-below-ring",
    "stalk-color-above-ring",
    "stalk-color-below-ring",
    "veil-type",
    "veil-color",
    "ring-number",
    "ring-type",
    "spore-print-color",
    "population",
    "habitat",
]

_MUSHROOM_CODES: dict[str, dict[str, str]] = {
    "class": {"e": "edible", "p": "poisonous"},
    "cap-shape": {"b": "bell", "c": "conical", "x": "convex", "f": "flat", "k": "knobbed", "s": "sunken"},
    "cap-surface": {"f": "fibrous", "g": "grooves", "y": "scaly", "s": "smooth"},
    "cap-color": {"n": "brown", "b": "buff", "c": "cinnamon", "g": "gray", "r": "green", "p": "pink", "u": "purple", "e": "red", "w": "white", "y": "yellow"},
    "bruises": {"t": "bruises", "f": "no"},
    "odor": {"a": "almond", "l": "anise", "c": "creosote", "y": "fishy", "f": "foul", "m": "musty", "n": "none", "p": "pungent", "s": "spicy"},
    "gill-attachment": {"a": "attached", "d": "descending", "f": "free", "n": "notched"},
    "gill-spacing": {"c": "close", "w": "crowded", "d": "distant"},
    "gill-size": {"b": "broad", "n": "narrow"},
    "gill-color": {"k": "black", "n": "brown", "b": "buff", "h": "chocolate", "g": "gray", "r": "green", "o": "orange", "p": "pink", "u": "purple", "e": "red", "w": "white", "y": "yellow"},
    "stalk-shape": {"e": "enlarging", "t": "tapering"},
    "stalk-root": {"b": "bulbous", "c": "club", "u": "cup", "e": "equal", "z": "rhizomorphs", "r": "rooted", "?": "missing"},
    "stalk-surface-above-ring": {"f": "fibrous", "y": "scaly", "k": "silky", "s": "smooth"},
    "stalk-surface-below-ring": {"f": "fibrous", "y": "scaly", "k": "silky", "s": "smooth"},
    "stalk-color-above-ring": {"n": "brown", "b": "buff", "c": "cinnamon", "g": "gray", "o": "orange", "p": "pink", "e": "red", "w": "white", "y": "yellow"},
    "stalk-color-below-ring": {"n": "brown", "b": "buff", "c": "cinnamon", "g": "gray", "o": "orange", "p": "pink", "e": "red", "w": "white", "y": "yellow"},
    "veil-type": {"p": "partial", "u": "universal"},
    "veil-color": {"n": "brown", "o": "orange", "w": "white", "y": "yellow"},
    "ring-number": {"n": "none", "o": "one", "t": "two"},
    "ring-type": {"c": "cobwebby", "e": "evanescent", "f": "flaring", "l": "large", "n": "none", "p": "pendant", "s": "sheathing", "z": "zone"},
    "spore-print-color": {"k": "black", "n": "brown", "b": "buff", "h": "chocolate", "r": "green", "o": "orange", "u": "purple", "w": "white", "y": "yellow"},
    "population": {"a": "abundant", "c": "clustered", "n": "numerous", "s": "scattered", "v": "several", "y": "solitary"},
    "habitat": {"g": "grasses", "l": "leaves", "m": "meadows", "p": "paths", "u": "urban", "w": "waste", "d": "woods"},
}


def mushroom_dataset(path: str) -> Dataset:
    """Parse the raw UCI mushroom file into a decoded categorical dataset.

    The file has no header; column 1 is the class (e/p) followed by 22
    single-letter features. '?' in stalk-root decodes to 'missing'. The class
    column is kept as a feature named 'class'.
    """
    names = ["class"] + MUSHROOM_FEATURES
    rows: list[list[str]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != len(names):
                raise ValueError(f"{path}: line {lineno} has {len(cells)} cells, expected {len(names)}")
            decoded = []
            for name, cell in zip(names, cells):
                table = _MUSHROOM_CODES[name]
                if cell not in table:
                    raise ValueError(f"{path}: line {lineno}: unknown code {cell!r} for {name!r}")
                decoded.append(table[cell])
            rows.append(decoded)
    if not rows:
        raise ValueError(f"{path}: no rows")
    return dataset_from_string_rows(names, rows)


def default_mushroom_path() -> str:
    env = os.environ.get("EVORULES_MUSHROOM")
    if env:
        return env
    repo = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    return os.path.join(repo, "data", "agaricus-lepiota.data")

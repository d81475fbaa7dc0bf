"""Tabular data handling: schema, CSV loading, discretization, splits.

Numeric features are stored as float64 columns and discretized into bins by
entropy-based cut points; categorical features are stored as integer codes
into an ordered category list. Everything downstream works on bin indices.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

NUMERIC = "numeric"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class FeatureSchema:
    """Name, kind, and the value domain of one feature.

    For categorical features `categories` is the ordered list of distinct
    values (order of first appearance in the source). For numeric features
    `cuts` holds the strictly increasing bin boundaries once the feature has
    been discretized; bin i is [cuts[i-1], cuts[i]) with the first bin open
    below and the last bin closed above.
    """

    name: str
    kind: str
    categories: tuple[str, ...] | None = None
    cuts: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in (NUMERIC, CATEGORICAL):
            raise ValueError(f"unknown feature kind: {self.kind!r}")
        if self.kind == CATEGORICAL:
            if not self.categories:
                raise ValueError(f"categorical feature {self.name!r} needs categories")
            if len(set(self.categories)) != len(self.categories):
                raise ValueError(f"duplicate categories in feature {self.name!r}")
            if self.cuts is not None:
                raise ValueError(f"categorical feature {self.name!r} cannot have cuts")
        else:
            if self.categories is not None:
                raise ValueError(f"numeric feature {self.name!r} cannot have categories")
            if self.cuts is not None:
                arr = tuple(float(c) for c in self.cuts)
                if any(b <= a for a, b in zip(arr, arr[1:])):
                    raise ValueError(f"cuts for {self.name!r} must be strictly increasing")

    @property
    def domain_size(self) -> int:
        if self.kind == CATEGORICAL:
            return len(self.categories)
        return 1 if self.cuts is None else len(self.cuts) + 1

    def value_label(self, bin_index: int) -> str:
        """Human-readable name of one bin / category."""
        if self.kind == CATEGORICAL:
            return self.categories[bin_index]
        cuts = self.cuts or ()
        if not cuts:
            return "any"
        if bin_index == 0:
            return f"{self.name} < {cuts[0]:g}"
        if bin_index == len(cuts):
            return f"{self.name} ≥ {cuts[-1]:g}"
        return f"{cuts[bin_index - 1]:g} ≤ {self.name} < {cuts[bin_index]:g}"


def schema_to_json(schema: list[FeatureSchema]) -> list[dict]:
    out = []
    for f in schema:
        d: dict = {"name": f.name, "kind": f.kind}
        if f.kind == CATEGORICAL:
            d["categories"] = list(f.categories)
        elif f.cuts is not None:
            d["cuts"] = [float(c) for c in f.cuts]
        out.append(d)
    return out


def schema_from_json(items: list[dict]) -> list[FeatureSchema]:
    schema = []
    for d in items:
        schema.append(
            FeatureSchema(
                name=d["name"],
                kind=d["kind"],
                categories=tuple(d["categories"]) if d.get("categories") is not None else None,
                cuts=tuple(d["cuts"]) if d.get("cuts") is not None else None,
            )
        )
    return schema


class Dataset:
    """Column-oriented table tied to a schema.

    Columns are float64 arrays for numeric features and int32 code arrays
    (indices into schema categories) for categorical ones.
    """

    def __init__(self, schema: list[FeatureSchema], columns: list[np.ndarray]):
        if len(schema) != len(columns):
            raise ValueError("schema/column count mismatch")
        if not schema:
            raise ValueError("dataset needs at least one feature")
        n = len(columns[0])
        cols = []
        for f, col in zip(schema, columns):
            arr = np.asarray(col)
            if len(arr) != n:
                raise ValueError("ragged columns")
            if f.kind == NUMERIC:
                arr = arr.astype(np.float64)
            else:
                arr = arr.astype(np.int32)
                if len(arr) and (arr.min() < 0 or arr.max() >= len(f.categories)):
                    raise ValueError(f"category code out of range for {f.name!r}")
            cols.append(arr)
        if n == 0:
            raise ValueError("dataset needs at least one row")
        self.schema = list(schema)
        self.columns = cols
        self._index = {f.name: i for i, f in enumerate(schema)}
        if len(self._index) != len(schema):
            raise ValueError("duplicate feature names")

    @property
    def n_rows(self) -> int:
        return len(self.columns[0])

    @property
    def n_features(self) -> int:
        return len(self.schema)

    def feature_index(self, name: str) -> int:
        if name not in self._index:
            raise KeyError(f"no feature named {name!r}")
        return self._index[name]

    def row(self, i: int) -> tuple:
        """Raw values of row i (floats and category strings)."""
        out = []
        for f, col in zip(self.schema, self.columns):
            v = col[i]
            out.append(float(v) if f.kind == NUMERIC else f.categories[int(v)])
        return tuple(out)

    def rows(self, indices=None) -> list[tuple]:
        idx = range(self.n_rows) if indices is None else indices
        return [self.row(int(i)) for i in idx]

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.schema, [col[idx] for col in self.columns])

    def concat(self, other: "Dataset") -> "Dataset":
        if [f.name for f in other.schema] != [f.name for f in self.schema]:
            raise ValueError("schema mismatch in concat")
        return Dataset(
            self.schema,
            [np.concatenate([a, b]) for a, b in zip(self.columns, other.columns)],
        )

    def drop(self, name: str) -> "Dataset":
        i = self.feature_index(name)
        return Dataset(
            [f for j, f in enumerate(self.schema) if j != i],
            [c for j, c in enumerate(self.columns) if j != i],
        )

    def column_strings(self, name: str) -> list[str]:
        i = self.feature_index(name)
        f = self.schema[i]
        if f.kind != CATEGORICAL:
            raise ValueError(f"{name!r} is numeric; label columns must be categorical")
        return [f.categories[int(c)] for c in self.columns[i]]

    def with_cuts(self, cuts_by_name: dict[str, tuple[float, ...]]) -> "Dataset":
        """New dataset whose numeric schema entries carry the given cut points."""
        schema = []
        for f in self.schema:
            if f.name in cuts_by_name:
                if f.kind != NUMERIC:
                    raise ValueError(f"cuts given for categorical feature {f.name!r}")
                schema.append(replace(f, cuts=tuple(float(c) for c in cuts_by_name[f.name])))
            else:
                schema.append(f)
        return Dataset(schema, self.columns)

    def binned_matrix(self) -> np.ndarray:
        """(n_rows, n_features) int32 matrix of bin indices / category codes."""
        cols = []
        for f, col in zip(self.schema, self.columns):
            if f.kind == CATEGORICAL:
                cols.append(col)
            elif f.cuts is None:
                cols.append(np.zeros(self.n_rows, dtype=np.int32))
            else:
                cols.append(np.searchsorted(np.asarray(f.cuts), col, side="right").astype(np.int32))
        return np.stack(cols, axis=1)

    def bin_rows(self, rows: list[tuple]) -> np.ndarray:
        """Discretize raw value tuples against this dataset's schema.

        Unknown categorical values map to code -1, which no condition covers.
        """
        out = np.empty((len(rows), self.n_features), dtype=np.int32)
        for j, f in enumerate(self.schema):
            if f.kind == NUMERIC:
                vals = np.array([float(r[j]) for r in rows], dtype=np.float64)
                if f.cuts is None:
                    out[:, j] = 0
                else:
                    out[:, j] = np.searchsorted(np.asarray(f.cuts), vals, side="right")
            else:
                lookup = {c: k for k, c in enumerate(f.categories)}
                out[:, j] = [lookup.get(str(r[j]), -1) for r in rows]
        return out


def conform_to_schema(data: Dataset, schema: list[FeatureSchema]) -> Dataset:
    """Re-express a dataset under a reference schema (same names and kinds).

    Categorical codes are remapped into the reference category order; values
    missing from the reference domain are an error. Numeric columns pass
    through and pick up the reference cut points. Extra columns in `data` are
    dropped; missing ones are an error.
    """
    columns = []
    for f in schema:
        j = data.feature_index(f.name)
        src = data.schema[j]
        if src.kind != f.kind:
            raise ValueError(f"feature {f.name!r} is {src.kind} here, {f.kind} in the reference")
        col = data.columns[j]
        if f.kind == NUMERIC:
            columns.append(col)
        else:
            mapping = np.empty(len(src.categories), dtype=np.int32)
            lookup = {c: k for k, c in enumerate(f.categories)}
            for code, cat in enumerate(src.categories):
                if cat not in lookup:
                    raise ValueError(f"feature {f.name!r}: value {cat!r} not in reference schema")
                mapping[code] = lookup[cat]
            columns.append(mapping[col])
    return Dataset(list(schema), columns)


def load_csv(path: str, schema_hints: dict[str, str] | None = None) -> Dataset:
    """Load a headered CSV into a Dataset.

    A column is numeric when every cell parses as float, unless a hint in
    `schema_hints` ({"name": "numeric"|"categorical"}) says otherwise. Ragged
    rows and empty cells are rejected with the offending data row number
    (1-based, header excluded).
    """
    hints = schema_hints or {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        raw_rows = list(reader)
    if not raw_rows:
        raise ValueError(f"{path}: no data rows")
    m = len(header)
    for r, row in enumerate(raw_rows, start=1):
        if len(row) != m:
            raise ValueError(f"{path}: row {r} has {len(row)} cells, expected {m}")
        for name, cell in zip(header, row):
            if cell == "":
                raise ValueError(f"{path}: row {r} has an empty cell in column {name!r}")
    for name, hint in hints.items():
        if hint not in (NUMERIC, CATEGORICAL):
            raise ValueError(f"bad schema hint for {name!r}: {hint!r}")
        if name not in header:
            raise ValueError(f"schema hint names unknown column {name!r}")

    schema: list[FeatureSchema] = []
    columns: list[np.ndarray] = []
    for j, name in enumerate(header):
        cells = [row[j] for row in raw_rows]
        parsed = _try_floats(cells)
        kind = hints.get(name)
        if kind is None:
            kind = NUMERIC if parsed is not None else CATEGORICAL
        if kind == NUMERIC:
            if parsed is None:
                r = next(i for i, c in enumerate(cells, start=1) if not _is_float(c))
                raise ValueError(f"{path}: row {r} column {name!r} is not numeric")
            schema.append(FeatureSchema(name, NUMERIC))
            columns.append(parsed)
        else:
            cats: list[str] = []
            seen: dict[str, int] = {}
            codes = np.empty(len(cells), dtype=np.int32)
            for i, c in enumerate(cells):
                if c not in seen:
                    seen[c] = len(cats)
                    cats.append(c)
                codes[i] = seen[c]
            schema.append(FeatureSchema(name, CATEGORICAL, categories=tuple(cats)))
            columns.append(codes)
    return Dataset(schema, columns)


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _try_floats(cells: list[str]) -> np.ndarray | None:
    try:
        return np.array([float(c) for c in cells], dtype=np.float64)
    except ValueError:
        return None


# --- splits ---------------------------------------------------------------


@dataclass(frozen=True)
class SplitAssignment:
    """Disjoint row index arrays for the train / validation / scoring splits."""

    train: np.ndarray
    valid: np.ndarray
    score: np.ndarray


def split(n_rows: int, seed: int) -> SplitAssignment:
    """Seeded 60/20/20 partition of row indices.

    A random permutation is cut at round(0.6*n) and round(0.8*n); every index
    lands in exactly one part.
    """
    if n_rows < 5:
        raise ValueError(f"need at least 5 rows to split, got {n_rows}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n_rows)
    a = int(n_rows * 0.6 + 0.5)
    b = int(n_rows * 0.8 + 0.5)
    return SplitAssignment(train=perm[:a], valid=perm[a:b], score=perm[b:])


# --- entropy discretization -------------------------------------------------


def _entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def entropy_bin(values, labels, max_bins: int = 4) -> tuple[float, ...]:
    """Supervised cut points for one numeric column (Fayyad-Irani style).

    Candidate cuts are midpoints between adjacent distinct sorted values; the
    cut minimizing weighted child entropy is accepted only when information
    gain beats the MDL threshold
        gain > (log2(N-1) + delta) / N,
        delta = log2(3^k - 2) - (k*E - k1*E1 - k2*E2),
    and recursion continues on both sides (leftmost-first) until rejection or
    the max_bins cap. Returns () for constant or unsplittable columns.
    """
    if max_bins < 1:
        raise ValueError("max_bins must be >= 1")
    vals = np.asarray(values, dtype=np.float64)
    _, codes = np.unique(np.asarray(labels), return_inverse=True)
    if len(vals) != len(codes):
        raise ValueError("values/labels length mismatch")
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    codes = codes[order]
    n_classes = int(codes.max()) + 1 if len(codes) else 1

    cuts: list[float] = []
    bins = 1

    def class_counts(lo: int, hi: int) -> np.ndarray:
        return np.bincount(codes[lo:hi], minlength=n_classes)

    def best_boundary(lo: int, hi: int):
        """Index b in (lo, hi) minimizing weighted entropy, or None."""
        seg = vals[lo:hi]
        change = np.nonzero(seg[1:] != seg[:-1])[0] + 1  # offsets within segment
        if len(change) == 0:
            return None
        # prefix class counts at every candidate boundary
        onehot = np.zeros((hi - lo, n_classes), dtype=np.int64)
        onehot[np.arange(hi - lo), codes[lo:hi]] = 1
        prefix = np.cumsum(onehot, axis=0)
        total = prefix[-1]
        n = hi - lo
        best = None
        for b in change:
            left = prefix[b - 1]
            right = total - left
            w = (b / n) * _entropy(left) + ((n - b) / n) * _entropy(right)
            if best is None or w < best[1] - 1e-12:
                best = (int(b), w)
        return best

    def accept(lo: int, hi: int, b: int, weighted: float) -> bool:
        n = hi - lo
        parent = class_counts(lo, hi)
        left = class_counts(lo, lo + b)
        right = class_counts(lo + b, hi)
        e = _entropy(parent)
        gain = e - weighted
        k = int((parent > 0).sum())
        k1 = int((left > 0).sum())
        k2 = int((right > 0).sum())
        delta = math.log2(3**k - 2) - (k * e - k1 * _entropy(left) - k2 * _entropy(right))
        return gain > (math.log2(n - 1) + delta) / n

    def recurse(lo: int, hi: int):
        nonlocal bins
        if bins >= max_bins or hi - lo < 2:
            return
        found = best_boundary(lo, hi)
        if found is None:
            return
        b, weighted = found
        if not accept(lo, hi, b, weighted):
            return
        cut = (vals[lo + b - 1] + vals[lo + b]) / 2.0
        cuts.append(float(cut))
        bins += 1
        recurse(lo, lo + b)
        recurse(lo + b, hi)

    recurse(0, len(vals))
    return tuple(sorted(cuts))

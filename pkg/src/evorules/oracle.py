"""Black-box label sources: builtin CART-style models and external processes.

Every oracle exposes predict_batch(rows) -> list of class labels, caches by
exact feature tuple, and is safe to call from multiple threads. The external
oracle speaks a line protocol over stdin/stdout: parent sends a batch count
line then that many CSV rows, child answers with one label line per row.
"""
from __future__ import annotations

import subprocess
import threading
from dataclasses import dataclass, field

import numpy as np

from .data import CATEGORICAL, NUMERIC, Dataset, FeatureSchema


class OracleError(RuntimeError):
    pass


class Oracle:
    """Base class: labels, caching, thread safety. Subclasses fill _predict."""

    def __init__(self, class_labels, cache: bool = True):
        labels = tuple(str(c) for c in class_labels)
        if not labels or len(set(labels)) != len(labels):
            raise ValueError("class_labels must be a non-empty list of distinct strings")
        self.class_labels = labels
        self._cache: dict[tuple, str] | None = {} if cache else None
        self._cache_lock = threading.Lock()
        self.backend_batches = 0
        self.backend_rows = 0

    def predict_batch(self, rows) -> list[str]:
        rows = [tuple(r) for r in rows]
        if not rows:
            return []
        if self._cache is None:
            labels = self._checked_predict(rows)
            return labels
        with self._cache_lock:
            missing = []
            seen = set()
            for r in rows:
                if r not in self._cache and r not in seen:
                    seen.add(r)
                    missing.append(r)
        if missing:
            labels = self._checked_predict(missing)
            with self._cache_lock:
                for r, lab in zip(missing, labels):
                    self._cache[r] = lab
        with self._cache_lock:
            return [self._cache[r] for r in rows]

    def _checked_predict(self, rows: list[tuple]) -> list[str]:
        self.backend_batches += 1
        self.backend_rows += len(rows)
        labels = self._predict(rows)
        if len(labels) != len(rows):
            raise OracleError(f"oracle returned {len(labels)} labels for {len(rows)} rows")
        bad = next((lab for lab in labels if lab not in self.class_labels), None)
        if bad is not None:
            raise OracleError(f"oracle produced unknown class label {bad!r}")
        return list(labels)

    def _predict(self, rows: list[tuple]) -> list[str]:
        raise NotImplementedError

    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


# --- CART-style trees -------------------------------------------------------


@dataclass
class TreeNode:
    """Internal node (feature + test) or leaf (label code)."""

    label: int = -1
    feature: int = -1
    kind: str = ""
    threshold: float = 0.0  # numeric: left when value <= threshold
    category: int = -1  # categorical: left when code == category
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - (p * p).sum())


def grow_tree(columns, kinds, y_codes, max_depth: int, n_classes: int) -> TreeNode:
    """Greedy gini tree. Ties keep the lower feature index, then the lower
    threshold / category code (strict-improvement scan order does this)."""
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    cols = [np.asarray(c) for c in columns]
    y = np.asarray(y_codes)

    def build(idx: np.ndarray, depth: int) -> TreeNode:
        counts = np.bincount(y[idx], minlength=n_classes)
        majority = int(np.argmax(counts))
        if depth >= max_depth or counts.max() == len(idx) or len(idx) < 2:
            return TreeNode(label=majority)
        parent = _gini(counts)
        best = None  # (weighted, feature, kind, threshold, category, left_mask)
        n = len(idx)
        for f, kind in enumerate(kinds):
            v = cols[f][idx]
            if kind == NUMERIC:
                order = np.argsort(v, kind="stable")
                sv = v[order]
                sy = y[idx][order]
                change = np.nonzero(sv[1:] != sv[:-1])[0] + 1
                if len(change) == 0:
                    continue
                onehot = np.zeros((n, n_classes), dtype=np.int64)
                onehot[np.arange(n), sy] = 1
                prefix = np.cumsum(onehot, axis=0)
                total = prefix[-1]
                for b in change:
                    left = prefix[b - 1]
                    right = total - left
                    w = (b / n) * _gini(left) + ((n - b) / n) * _gini(right)
                    if best is None or w < best[0] - 1e-12:
                        thr = float((sv[b - 1] + sv[b]) / 2.0)
                        best = (w, f, kind, thr, -1, v <= thr)
            else:
                for cat in np.unique(v):
                    left_mask = v == cat
                    nl = int(left_mask.sum())
                    if nl == 0 or nl == n:
                        continue
                    cl = np.bincount(y[idx][left_mask], minlength=n_classes)
                    cr = counts - cl
                    w = (nl / n) * _gini(cl) + ((n - nl) / n) * _gini(cr)
                    if best is None or w < best[0] - 1e-12:
                        best = (w, f, kind, 0.0, int(cat), left_mask)
        if best is None or best[0] >= parent - 1e-12:
            return TreeNode(label=majority)
        w, f, kind, thr, cat, left_mask = best
        return TreeNode(
            feature=f,
            kind=kind,
            threshold=thr,
            category=cat,
            left=build(idx[left_mask], depth + 1),
            right=build(idx[~left_mask], depth + 1),
        )

    return build(np.arange(len(y)), 0)


def eval_tree(root: TreeNode, columns) -> np.ndarray:
    """Label codes for every row of the given feature columns."""
    n = len(columns[0])
    out = np.empty(n, dtype=np.int64)

    def walk(node: TreeNode, idx: np.ndarray):
        if node.is_leaf:
            out[idx] = node.label
            return
        v = columns[node.feature][idx]
        go_left = v <= node.threshold if node.kind == NUMERIC else v == node.category
        walk(node.left, idx[go_left])
        walk(node.right, idx[~go_left])

    walk(root, np.arange(n))
    return out


def tree_depth(root: TreeNode) -> int:
    if root.is_leaf:
        return 0
    return 1 + max(tree_depth(root.left), tree_depth(root.right))


def _rows_to_columns(rows: list[tuple], schema: list[FeatureSchema]) -> list[np.ndarray]:
    cols = []
    for j, f in enumerate(schema):
        if f.kind == NUMERIC:
            cols.append(np.array([float(r[j]) for r in rows], dtype=np.float64))
        else:
            lookup = {c: k for k, c in enumerate(f.categories)}
            cols.append(np.array([lookup.get(str(r[j]), -1) for r in rows], dtype=np.int64))
    return cols


class TreeOracle(Oracle):
    def __init__(self, schema, root: TreeNode, class_labels, cache: bool = True):
        super().__init__(class_labels, cache=cache)
        self.schema = list(schema)
        self.root = root

    def _predict(self, rows):
        cols = _rows_to_columns(rows, self.schema)
        codes = eval_tree(self.root, cols)
        return [self.class_labels[c] for c in codes]


class ForestOracle(Oracle):
    """Bagged trees, majority vote; vote ties go to the earlier class label."""

    def __init__(self, schema, roots: list[TreeNode], class_labels, cache: bool = True):
        super().__init__(class_labels, cache=cache)
        self.schema = list(schema)
        self.roots = list(roots)

    def _predict(self, rows):
        cols = _rows_to_columns(rows, self.schema)
        votes = np.stack([eval_tree(root, cols) for root in self.roots], axis=0)
        out = []
        for i in range(votes.shape[1]):
            counts = np.bincount(votes[:, i], minlength=len(self.class_labels))
            out.append(self.class_labels[int(np.argmax(counts))])
        return out


def fit_builtin_tree(data: Dataset, labels, max_depth: int = 8, cache: bool = True) -> TreeOracle:
    """Train a gini decision tree on raw columns; class order is sorted labels."""
    class_labels = sorted(set(str(v) for v in labels))
    code_of = {c: i for i, c in enumerate(class_labels)}
    y = np.array([code_of[str(v)] for v in labels], dtype=np.int64)
    if len(y) != data.n_rows:
        raise ValueError("labels/rows length mismatch")
    kinds = [f.kind for f in data.schema]
    root = grow_tree(data.columns, kinds, y, max_depth, len(class_labels))
    return TreeOracle(data.schema, root, class_labels, cache=cache)


def fit_builtin_forest(
    data: Dataset,
    labels,
    n_trees: int = 25,
    max_depth: int = 8,
    seed: int = 0,
    cache: bool = True,
) -> ForestOracle:
    """Bagging: tree t is grown on a bootstrap sample drawn with rng (seed, t)."""
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    class_labels = sorted(set(str(v) for v in labels))
    code_of = {c: i for i, c in enumerate(class_labels)}
    y = np.array([code_of[str(v)] for v in labels], dtype=np.int64)
    kinds = [f.kind for f in data.schema]
    n = data.n_rows
    roots = []
    for t in range(n_trees):
        rng = np.random.default_rng((seed, t))
        idx = rng.integers(0, n, size=n)
        cols = [c[idx] for c in data.columns]
        roots.append(grow_tree(cols, kinds, y[idx], max_depth, len(class_labels)))
    return ForestOracle(data.schema, roots, class_labels, cache=cache)


# --- external process oracle -------------------------------------------------


def format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ExternalOracle(Oracle):
    """Child-process model speaking the batch line protocol.

    One exchange: write "N\\n" + N comma-joined rows (schema order), flush,
    then read exactly N label lines. The child must flush after each batch and
    exit cleanly when stdin closes.
    """

    def __init__(self, argv: list[str], class_labels, cache: bool = True):
        super().__init__(class_labels, cache=cache)
        self.argv = list(argv)
        self._io_lock = threading.Lock()
        try:
            self._proc = subprocess.Popen(
                self.argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                encoding="utf-8",
            )
        except OSError as e:
            raise OracleError(f"could not start oracle process {self.argv!r}: {e}") from e

    def _predict(self, rows):
        with self._io_lock:
            proc = self._proc
            if proc.poll() is not None:
                raise OracleError(self._death_note("process already exited"))
            try:
                proc.stdin.write(f"{len(rows)}\n")
                for row in rows:
                    proc.stdin.write(",".join(format_cell(v) for v in row) + "\n")
                proc.stdin.flush()
            except (BrokenPipeError, OSError) as e:
                raise OracleError(self._death_note(f"write failed: {e}")) from e
            labels = []
            for i in range(len(rows)):
                line = proc.stdout.readline()
                if line == "":
                    raise OracleError(
                        self._death_note(f"EOF after {i} of {len(rows)} label lines")
                    )
                labels.append(line.rstrip("\n"))
            return labels

    def _death_note(self, what: str) -> str:
        try:
            rc = self._proc.wait(timeout=2)
        except subprocess.TimeoutExpired:
            rc = self._proc.poll()
        err = ""
        if rc is not None:
            try:
                err = self._proc.stderr.read() or ""
            except (OSError, ValueError):
                err = ""
        note = f"external oracle {self.argv!r}: {what}"
        if rc is not None:
            note += f" (exit code {rc})"
        if err.strip():
            note += f"; stderr: {err.strip()[-500:]}"
        return note

    def close(self):
        proc = getattr(self, "_proc", None)
        if proc is None:
            return
        with self._io_lock:
            if proc.stdin and not proc.stdin.closed:
                try:
                    proc.stdin.close()
                except OSError:
                    pass
            try:
                proc.wait(timeout=10)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
            for stream in (proc.stdout, proc.stderr):
                if stream and not stream.closed:
                    try:
                        stream.close()
                    except OSError:
                        pass


def connect_external(command: list[str], class_labels, cache: bool = True) -> ExternalOracle:
    return ExternalOracle(command, class_labels, cache=cache)


# --- model artifact export ----------------------------------------------------


def _node_to_json(node: TreeNode, schema: list[FeatureSchema], class_labels) -> dict:
    if node.is_leaf:
        return {"label": class_labels[node.label]}
    out: dict = {"feature": node.feature}
    if node.kind == NUMERIC:
        out["threshold"] = node.threshold
    else:
        out["category"] = schema[node.feature].categories[node.category]
    out["left"] = _node_to_json(node.left, schema, class_labels)
    out["right"] = _node_to_json(node.right, schema, class_labels)
    return out


def oracle_to_artifact(oracle: Oracle) -> dict:
    """JSON-serializable model for out-of-process reimplementations.

    Internal numeric nodes route left when value <= threshold; categorical
    nodes route left on equality with the named category. Forest prediction is
    a majority vote with ties going to the earlier entry of class_labels.
    """
    if isinstance(oracle, TreeOracle):
        kind, schema, roots = "tree", oracle.schema, [oracle.root]
    elif isinstance(oracle, ForestOracle):
        kind, schema, roots = "forest", oracle.schema, oracle.roots
    else:
        raise ValueError("only builtin tree/forest oracles can be exported")
    features = []
    for f in schema:
        d: dict = {"name": f.name, "kind": f.kind}
        if f.kind == CATEGORICAL:
            d["categories"] = list(f.categories)
        features.append(d)
    return {
        "format": "oracle/1",
        "kind": kind,
        "class_labels": list(oracle.class_labels),
        "features": features,
        "trees": [_node_to_json(r, schema, oracle.class_labels) for r in roots],
    }

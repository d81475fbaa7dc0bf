"""Distribution-shift evaluation and training-data augmentation.

Three generators build synthetic scoring partitions from a source dataset:
bootstrap resamples whole rows, marginal samples each feature independently
from its empirical distribution (breaking inter-feature correlation), uniform
draws numeric values uniformly over the observed range and categorical values
uniformly over the observed category list. Interpretations are re-scored on
oracle-labeled partitions; mean and population standard deviation summarize
the spread. Augmentation appends oracle-labeled marginal and uniform rows to
the training data; the oracle itself is never retrained or relabeled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import NUMERIC, Dataset
from .oracle import Oracle, OracleError
from .scoring import Interpretation, set_score

BOOTSTRAP = "bootstrap"
MARGINAL = "marginal"
UNIFORM = "uniform"
METHOD_KINDS = (BOOTSTRAP, MARGINAL, UNIFORM)


@dataclass(frozen=True)
class ShiftMethod:
    kind: str
    partitions: int = 10
    fraction: float = 0.10
    seed: int = 0

    def __post_init__(self):
        if self.kind not in METHOD_KINDS:
            raise ValueError(f"unknown shift method {self.kind!r}")
        if self.partitions < 1:
            raise ValueError("partitions must be >= 1")
        if not (0.0 <= self.fraction <= 1.0):
            raise ValueError("fraction must be in [0, 1]")


def _partition_size(method: ShiftMethod, n_source: int) -> int:
    return math.ceil(method.fraction * n_source)


def perturb(method: ShiftMethod, source: Dataset) -> list[Dataset]:
    """Synthetic partitions sharing the source schema (cuts included).

    Partition p draws from rng seeded (method.seed, p), so partitions are
    independent of each other but fully reproducible.
    """
    size = _partition_size(method, source.n_rows)
    if size == 0:
        raise ValueError("partition size is zero; raise fraction or source size")
    out = []
    n = source.n_rows
    for p in range(method.partitions):
        rng = np.random.default_rng((method.seed, p))
        if method.kind == BOOTSTRAP:
            idx = rng.integers(0, n, size=size)
            out.append(source.subset(idx))
            continue
        cols = []
        for f, col in zip(source.schema, source.columns):
            if method.kind == MARGINAL:
                cols.append(col[rng.integers(0, n, size=size)])
            elif f.kind == NUMERIC:
                lo = float(col.min())
                hi = float(col.max())
                cols.append(lo + rng.random(size) * (hi - lo))
            else:
                observed = np.unique(col)
                cols.append(observed[rng.integers(0, len(observed), size=size)])
        out.append(Dataset(source.schema, cols))
    return out


@dataclass
class RobustnessReport:
    """Set-Score spread per (approach, method kind): mean, population std."""

    cells: dict[tuple[str, str], tuple[float, float]]
    partitions: int
    scores: dict[tuple[str, str], list[float]]

    def merged_with(self, other: "RobustnessReport") -> "RobustnessReport":
        if other.partitions != self.partitions:
            raise ValueError("cannot merge reports with different partition counts")
        cells = dict(self.cells)
        cells.update(other.cells)
        scores = dict(self.scores)
        scores.update(other.scores)
        return RobustnessReport(cells, self.partitions, scores)


def uncertainty_analysis(
    interp: Interpretation,
    oracle: Oracle,
    source: Dataset,
    methods: list[ShiftMethod],
    approach: str = "evolved",
) -> RobustnessReport:
    """Score one interpretation on oracle-labeled synthetic partitions."""
    cells: dict[tuple[str, str], tuple[float, float]] = {}
    scores: dict[tuple[str, str], list[float]] = {}
    partitions = methods[0].partitions if methods else 0
    for method in methods:
        vals = []
        for p, part in enumerate(perturb(method, source)):
            rows = part.rows()
            try:
                labels = oracle.predict_batch(rows)
            except OracleError as e:
                raise OracleError(f"{method.kind} partition {p}: {e}") from e
            vals.append(set_score(interp, part.binned_matrix(), labels))
        arr = np.asarray(vals)
        cells[(approach, method.kind)] = (float(arr.mean()), float(arr.std()))
        scores[(approach, method.kind)] = [float(v) for v in vals]
    return RobustnessReport(cells, partitions, scores)


def augment(
    train: Dataset,
    oracle: Oracle,
    fraction: float = 0.10,
    seed: int = 0,
) -> tuple[Dataset, list[str]]:
    """Append one marginal and one uniform partition to the training rows.

    Returns the widened dataset and oracle labels for every row (original
    rows keep their oracle labels; synthetic rows are labeled by the same
    oracle, never by an interpretation). fraction 0 is the identity.
    """
    if not (0.0 <= fraction <= 1.0):
        raise ValueError("fraction must be in [0, 1]")
    data = train
    if fraction > 0.0:
        for kind in (MARGINAL, UNIFORM):
            method = ShiftMethod(kind, partitions=1, fraction=fraction, seed=seed)
            data = data.concat(perturb(method, train)[0])
    labels = oracle.predict_batch(data.rows())
    return data, labels

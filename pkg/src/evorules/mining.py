"""Condition pools: the raw material the evolutionary search works over.

Two miners produce per-class pools of single-feature conditions. The local
surrogate miner perturbs one instance at a time in discretized space, asks the
oracle to label the perturbations, fits a weighted ridge regression of the
one-vs-rest response on same-bin indicators, and keeps the strongest positive
coefficients. The frequent miner simply keeps every (feature, bin) whose
within-class support clears a threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import NUMERIC, Dataset
from .oracle import Oracle
from .rules import Condition


@dataclass(frozen=True)
class WeightedCondition:
    condition: Condition
    weight: float


@dataclass(frozen=True)
class LocalExplainConfig:
    samples: int = 5000
    top_k: int = 10
    kernel_width: float | None = None  # None: 0.75 * sqrt(n_perturbable_features)
    ridge_lambda: float = 1.0

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.kernel_width is not None and self.kernel_width <= 0:
            raise ValueError("kernel_width must be positive")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be >= 0")


@dataclass(frozen=True)
class ConditionPool:
    """Ordered, duplicate-free candidate conditions for one class."""

    class_label: str
    conditions: tuple[Condition, ...]
    provenance: str

    def __post_init__(self):
        if len(set(self.conditions)) != len(self.conditions):
            raise ValueError("condition pool contains duplicates")


def _usable_features(data: Dataset) -> list[int]:
    return [j for j, f in enumerate(data.schema) if f.domain_size >= 2]


def _numeric_edges(data: Dataset, j: int) -> np.ndarray:
    """Materialization bounds for each bin of numeric feature j."""
    col = data.columns[j]
    cuts = data.schema[j].cuts or ()
    lo = float(col.min())
    hi = float(col.max())
    return np.array([lo, *cuts, hi], dtype=np.float64)


def local_explain(
    instance: tuple,
    oracle: Oracle,
    target_class: str,
    background: Dataset,
    cfg: LocalExplainConfig,
    seed: int,
) -> list[WeightedCondition]:
    """Explain one instance: positive-weight same-bin conditions, strongest first.

    Perturbations keep each feature's bin with probability 1/2, otherwise draw
    a bin from the background empirical marginal; a concrete value is then
    materialized uniformly inside the chosen numeric bin (or as the category).
    Sample weight is exp(-d^2 / kernel_width^2) with d = (#differing bins)/sqrt(m).
    """
    rng = np.random.default_rng(seed)
    usable = _usable_features(background)
    if not usable:
        return []
    m = len(usable)
    inst_bins = background.bin_rows([tuple(instance)])[0]
    binned = background.binned_matrix()
    n_samples = cfg.samples

    keep = rng.random((n_samples, len(background.schema))) < 0.5
    bins = np.empty((n_samples, len(background.schema)), dtype=np.int32)
    raw_columns: list = [None] * len(background.schema)
    for j, f in enumerate(background.schema):
        if j not in usable:
            bins[:, j] = inst_bins[j]
        else:
            counts = np.bincount(binned[:, j], minlength=f.domain_size)
            probs = counts / counts.sum()
            draws = rng.choice(f.domain_size, size=n_samples, p=probs)
            bins[:, j] = np.where(keep[:, j], inst_bins[j], draws)
        if f.kind == NUMERIC:
            edges = _numeric_edges(background, j)
            lo = edges[bins[:, j]]
            hi = edges[bins[:, j] + 1]
            raw_columns[j] = lo + rng.random(n_samples) * (hi - lo)
        else:
            raw_columns[j] = [f.categories[b] for b in bins[:, j]]

    rows = [tuple(raw_columns[j][i] for j in range(len(background.schema))) for i in range(n_samples)]
    labels = oracle.predict_batch(rows)
    y = np.array([1.0 if lab == target_class else 0.0 for lab in labels])
    if y.min() == y.max():
        return []  # oracle is constant on the neighborhood; nothing to attribute

    design = (bins[:, usable] == inst_bins[usable]).astype(np.float64)
    diff = len(usable) - design.sum(axis=1)
    dist = diff / math.sqrt(m)
    width = cfg.kernel_width if cfg.kernel_width is not None else 0.75 * math.sqrt(m)
    w = np.exp(-(dist**2) / (width**2))

    # weighted ridge with unpenalized intercept, closed form
    A = np.hstack([np.ones((n_samples, 1)), design])
    AtW = A.T * w
    gram = AtW @ A
    penalty = np.eye(m + 1) * cfg.ridge_lambda
    penalty[0, 0] = 0.0
    beta = np.linalg.solve(gram + penalty, AtW @ y)
    coefs = beta[1:]

    ranked = sorted(
        (
            (float(c), j_usable)
            for c, j_usable in zip(coefs, usable)
            if c > 0.0
        ),
        key=lambda t: (-abs(t[0]), t[1]),
    )
    out = []
    for c, j in ranked[: cfg.top_k]:
        cond = Condition(j, frozenset([int(inst_bins[j])]), background.schema[j].domain_size)
        out.append(WeightedCondition(cond, c))
    return out


def mine_conditions_local(
    class_label: str,
    data: Dataset,
    model_labels,
    oracle: Oracle,
    cfg: LocalExplainConfig,
    seed: int,
    budget_factor: int = 10,
) -> ConditionPool:
    """Coverage loop: explain random uncovered class instances until every
    instance of the class is covered by at least one pooled condition (or the
    explanation budget of budget_factor * class size runs out), then patch the
    stragglers with their purest single condition."""
    labels = np.asarray([str(v) for v in model_labels])
    if len(labels) != data.n_rows:
        raise ValueError("labels/rows length mismatch")
    class_idx = np.nonzero(labels == class_label)[0]
    if len(class_idx) == 0:
        raise ValueError(f"no instances with model label {class_label!r}")
    binned = data.binned_matrix()
    class_bins = binned[class_idx]

    rng = np.random.default_rng(seed)
    conditions: list[Condition] = []
    have = set()
    covered = np.zeros(len(class_idx), dtype=bool)

    budget = budget_factor * len(class_idx)
    calls = 0
    while not covered.all() and calls < budget:
        pending = np.nonzero(~covered)[0]
        pick = int(pending[rng.integers(len(pending))])
        row = data.row(int(class_idx[pick]))
        sub_seed = int(rng.integers(2**63))
        found = local_explain(row, oracle, class_label, data, cfg, seed=sub_seed)
        calls += 1
        for wc in found:
            cond = wc.condition
            if cond not in have:
                have.add(cond)
                conditions.append(cond)
                covered |= np.isin(class_bins[:, cond.feature], cond.sorted_values())

    # purity fallback for anything the surrogate never pinned down
    usable = _usable_features(data)
    for pick in np.nonzero(~covered)[0]:
        if covered[pick]:
            continue
        best = None
        for j in usable:
            b = int(class_bins[pick, j])
            in_bin = binned[:, j] == b
            denom = int(in_bin.sum())
            purity = float((labels[in_bin] == class_label).sum() / denom) if denom else 0.0
            if best is None or purity > best[0] + 1e-12:
                best = (purity, j, b)
        if best is None:
            break  # no usable features at all; nothing can cover anything
        _, j, b = best
        cond = Condition(j, frozenset([b]), data.schema[j].domain_size)
        if cond not in have:
            have.add(cond)
            conditions.append(cond)
        covered |= np.isin(class_bins[:, j], [b])

    return ConditionPool(class_label, tuple(conditions), "local-surrogate")


def mine_conditions_frequent(
    class_label: str,
    data: Dataset,
    model_labels,
    support_threshold: float,
) -> ConditionPool:
    """Every single-bin condition whose within-class support >= threshold."""
    if not (0.0 < support_threshold < 1.0):
        raise ValueError("support_threshold must be in (0, 1)")
    labels = np.asarray([str(v) for v in model_labels])
    if len(labels) != data.n_rows:
        raise ValueError("labels/rows length mismatch")
    class_idx = np.nonzero(labels == class_label)[0]
    if len(class_idx) == 0:
        raise ValueError(f"no instances with model label {class_label!r}")
    binned = data.binned_matrix()[class_idx]
    n = len(class_idx)
    conditions = []
    for j in _usable_features(data):
        dom = data.schema[j].domain_size
        counts = np.bincount(binned[:, j], minlength=dom)
        for b in range(dom):
            if counts[b] / n >= support_threshold:
                conditions.append(Condition(j, frozenset([b]), dom))
    return ConditionPool(class_label, tuple(conditions), f"frequent({support_threshold:g})")

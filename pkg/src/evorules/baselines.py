"""Rule-extraction baselines: decision-tree surrogate and Apriori itemsets.

Both work in the discretized space, produce the same Rule type as the
evolutionary search, and attach signed-MI fitness so their output can flow
through the same greedy selection and scoring.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import CATEGORICAL, NUMERIC, Dataset
from .oracle import TreeNode, grow_tree
from .rules import Condition, Rule, contingency, fitness


@dataclass(frozen=True)
class BaselineConfig:
    """Hyperparameter grids swept by the comparison pipeline."""

    dt_depth_grid: tuple[int, ...] = (4, 5, 6, 7, 8, 9, 10)
    apriori_support_grid: tuple[float, ...] = (0.01, 0.02, 0.05, 0.10)
    apriori_max_clause_len: int = 3

    def __post_init__(self):
        if not self.dt_depth_grid or any(d < 0 for d in self.dt_depth_grid):
            raise ValueError("dt_depth_grid must hold non-negative depths")
        if not self.apriori_support_grid or any(
            not (0.0 < s < 1.0) for s in self.apriori_support_grid
        ):
            raise ValueError("apriori supports must be in (0, 1)")
        if self.apriori_max_clause_len < 1:
            raise ValueError("apriori_max_clause_len must be >= 1")


def dt_surrogate_rules(
    data: Dataset, model_labels, max_depth: int
) -> list[tuple[Rule, float]]:
    """Fit a gini tree on the discretized matrix and read its paths as rules.

    Numeric features split by bin-index threshold, categorical by equality, so
    every root-to-leaf path converts exactly to bin-set conditions. The rules
    partition the discretized space (mutually exclusive, exhaustive). A
    depth-0 tree yields the single is_default rule, the only empty clause
    allowed anywhere.
    """
    labels = [str(v) for v in model_labels]
    if len(labels) != data.n_rows:
        raise ValueError("labels/rows length mismatch")
    class_labels = sorted(set(labels))
    code_of = {c: i for i, c in enumerate(class_labels)}
    y = np.array([code_of[v] for v in labels], dtype=np.int64)
    binned = data.binned_matrix()
    kinds = [f.kind for f in data.schema]
    columns = [binned[:, j] for j in range(data.n_features)]
    root = grow_tree(columns, kinds, y, max_depth, len(class_labels))

    domains = [f.domain_size for f in data.schema]
    out: list[tuple[Rule, float]] = []

    def emit(rule: Rule):
        out.append((rule, fitness(contingency(rule, binned, labels))))

    def walk(node: TreeNode, lo: list[int], hi: list[int], allowed: list[set[int] | None]):
        if node.is_leaf:
            clause = []
            for f in range(data.n_features):
                if kinds[f] == NUMERIC or allowed[f] is None:
                    if lo[f] == 0 and hi[f] == domains[f] - 1:
                        continue
                    values = frozenset(range(lo[f], hi[f] + 1))
                else:
                    if len(allowed[f]) == domains[f]:
                        continue
                    values = frozenset(allowed[f])
                clause.append(Condition(f, values, domains[f]))
            label = class_labels[node.label]
            if clause:
                emit(Rule(tuple(clause), label))
            else:
                emit(Rule((), label, is_default=True))
            return
        f = node.feature
        if node.kind == NUMERIC:
            cut = int(math.floor(node.threshold))
            old = hi[f]
            hi[f] = min(hi[f], cut)
            walk(node.left, lo, hi, allowed)
            hi[f] = old
            old = lo[f]
            lo[f] = max(lo[f], cut + 1)
            walk(node.right, lo, hi, allowed)
            lo[f] = old
        else:
            cat = node.category
            old_set = allowed[f]
            allowed[f] = {cat}
            walk(node.left, lo, hi, allowed)
            allowed[f] = old_set - {cat}
            walk(node.right, lo, hi, allowed)
            allowed[f] = old_set

    walk(
        root,
        [0] * data.n_features,
        [d - 1 for d in domains],
        [set(range(d)) if k == CATEGORICAL else None for d, k in zip(domains, kinds)],
    )
    return out


def apriori_rules(
    data: Dataset,
    model_labels,
    support: float,
    max_clause_len: int = 3,
) -> list[tuple[Rule, float]]:
    """Levelwise frequent-itemset rules over (feature, bin) items.

    Items are single-bin conditions; an itemset is frequent when the fraction
    of rows matching all its items is >= support. Each frequent itemset (up to
    max_clause_len items, distinct features) becomes a rule predicting the
    majority model label among the rows it covers, ranked by fitness.
    """
    if not (0.0 < support < 1.0):
        raise ValueError("support must be in (0, 1)")
    if max_clause_len < 1:
        raise ValueError("max_clause_len must be >= 1")
    labels = [str(v) for v in model_labels]
    if len(labels) != data.n_rows:
        raise ValueError("labels/rows length mismatch")
    y = np.asarray(labels)
    class_labels = sorted(set(labels))
    binned = data.binned_matrix()
    n = data.n_rows

    items: list[tuple[int, int]] = []
    masks: dict[tuple[int, int], np.ndarray] = {}
    for f in range(data.n_features):
        dom = data.schema[f].domain_size
        if dom < 2:
            continue
        col = binned[:, f]
        for b in range(dom):
            m = col == b
            if np.count_nonzero(m) / n >= support:
                items.append((f, b))
                masks[(f, b)] = m

    frequent: list[tuple[tuple[tuple[int, int], ...], np.ndarray]] = []
    level = [((it,), masks[it]) for it in items]
    frequent.extend(level)
    size = 1
    while level and size < max_clause_len:
        prev = {iset for iset, _ in level}
        nxt: list[tuple[tuple[tuple[int, int], ...], np.ndarray]] = []
        for i in range(len(level)):
            a, mask_a = level[i]
            for j in range(i + 1, len(level)):
                b, _ = level[j]
                if a[:-1] != b[:-1]:
                    break  # lexicographic level order: no later join partners
                tail = b[-1]
                if tail[0] == a[-1][0]:
                    continue  # same feature twice can never cover anything
                cand = a + (tail,)
                if any(
                    tuple(cand[:m] + cand[m + 1 :]) not in prev for m in range(len(cand) - 1)
                ):
                    continue  # downward closure
                m_cand = mask_a & masks[tail]
                if np.count_nonzero(m_cand) / n >= support:
                    nxt.append((cand, m_cand))
        level = nxt
        frequent.extend(level)
        size += 1

    out: list[tuple[Rule, float]] = []
    for iset, mask in frequent:
        covered = y[mask]
        counts = {c: 0 for c in class_labels}
        for v in covered:
            counts[v] += 1
        label = max(class_labels, key=lambda c: (counts[c], -class_labels.index(c)))
        clause = tuple(
            Condition(f, frozenset([b]), data.schema[f].domain_size)
            for f, b in sorted(iset)
        )
        rule = Rule(clause, label)
        out.append((rule, fitness(contingency(rule, binned, y))))
    out.sort(key=lambda rf: (-rf[1], rf[0].n_conditions(), rf[0].clause_key()))
    return out

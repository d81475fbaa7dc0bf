"""Conditions, rules, and the contingency-table scores that rank them.

A condition restricts one feature to a proper non-empty subset of its bins
(numeric) or categories. A rule is a conjunction of conditions over distinct
features plus a predicted class label. Rules are scored against model labels
through a 2x2 contingency table: signed mutual information (bits) is the
fitness, F1 the companion diagnostic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import CATEGORICAL, NUMERIC, FeatureSchema

EMPTY_RULE_FITNESS = -2.0


@dataclass(frozen=True)
class Condition:
    """feature_index in values, where values is a proper subset of the domain."""

    feature: int
    values: frozenset[int]
    domain_size: int

    def __post_init__(self):
        if self.feature < 0:
            raise ValueError("feature index must be >= 0")
        if not self.values:
            raise ValueError("condition needs at least one value")
        if any(v < 0 or v >= self.domain_size for v in self.values):
            raise ValueError("condition value outside feature domain")
        if len(self.values) >= self.domain_size:
            raise ValueError("condition covering the full domain is vacuous")

    def sorted_values(self) -> tuple[int, ...]:
        return tuple(sorted(self.values))


@dataclass(frozen=True)
class Rule:
    """Conjunction of conditions (one per feature, ascending) with a prediction.

    `is_default` marks the one permitted empty-clause rule: the fallback leaf
    of a depth-0 decision-tree surrogate, which covers everything.
    """

    clause: tuple[Condition, ...]
    prediction: str
    is_default: bool = False

    def __post_init__(self):
        feats = [c.feature for c in self.clause]
        if any(b <= a for a, b in zip(feats, feats[1:])):
            raise ValueError("clause conditions must have strictly increasing features")
        if self.is_default and self.clause:
            raise ValueError("default rule cannot carry conditions")
        if not self.is_default and not self.clause:
            raise ValueError("empty clause is only allowed on a default rule")

    def clause_key(self) -> tuple:
        """Canonical hashable identity of the clause (for dedup and ordering)."""
        return tuple((c.feature, c.sorted_values()) for c in self.clause)

    def n_conditions(self) -> int:
        return len(self.clause)


def covers(rule: Rule, binned_row) -> bool:
    row = np.asarray(binned_row)
    return all(int(row[c.feature]) in c.values for c in rule.clause)


def cover_mask(rule: Rule, binned: np.ndarray) -> np.ndarray:
    """Boolean mask of rows covered by the rule's clause."""
    X = np.asarray(binned)
    mask = np.ones(len(X), dtype=bool)
    for c in rule.clause:
        mask &= np.isin(X[:, c.feature], c.sorted_values())
    return mask


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 rule-vs-class table.

    n11 covered & model label == prediction, n12 covered & label differs,
    n21 uncovered & label == prediction, n22 uncovered & label differs.
    """

    n11: int
    n12: int
    n21: int
    n22: int

    def __post_init__(self):
        if min(self.n11, self.n12, self.n21, self.n22) < 0:
            raise ValueError("contingency counts must be non-negative")
        if self.n == 0:
            raise ValueError("contingency table needs at least one instance")

    @property
    def n(self) -> int:
        return self.n11 + self.n12 + self.n21 + self.n22

    @property
    def r1(self) -> int:  # covered
        return self.n11 + self.n12

    @property
    def r2(self) -> int:  # not covered
        return self.n21 + self.n22

    @property
    def c1(self) -> int:  # model label == prediction
        return self.n11 + self.n21

    @property
    def c2(self) -> int:
        return self.n12 + self.n22


def contingency(rule: Rule, binned: np.ndarray, model_labels) -> ContingencyTable:
    X = np.asarray(binned)
    y = np.asarray(model_labels)
    if len(X) != len(y):
        raise ValueError("rows/labels length mismatch")
    cov = cover_mask(rule, X)
    hit = y == rule.prediction
    n11 = int(np.count_nonzero(cov & hit))
    n12 = int(np.count_nonzero(cov)) - n11
    n21 = int(np.count_nonzero(hit)) - n11
    n22 = len(y) - n11 - n12 - n21
    return ContingencyTable(n11, n12, n21, n22)


def mutual_information(t: ContingencyTable) -> float:
    """Mutual information of the table in bits; 0 when a margin is empty."""
    n = t.n
    if t.r1 == 0 or t.r2 == 0 or t.c1 == 0 or t.c2 == 0:
        return 0.0
    total = 0.0
    for nab, ra, cb in (
        (t.n11, t.r1, t.c1),
        (t.n12, t.r1, t.c2),
        (t.n21, t.r2, t.c1),
        (t.n22, t.r2, t.c2),
    ):
        if nab:
            total += nab * math.log2(nab * n / (ra * cb))
    # true MI is >= 0; floating-point dust can dip just below on near-independence
    return max(total / n, 0.0)


def fitness(t: ContingencyTable) -> float:
    """Signed MI: positive when the rule over-covers its class, else negated.

    Sign test n11 >= r1*c1/n is done in integers to avoid float drift.
    """
    mi = mutual_information(t)
    return mi if t.n11 * t.n >= t.r1 * t.c1 else -mi


def f1(t: ContingencyTable) -> float:
    precision = t.n11 / t.r1 if t.r1 else 0.0
    recall = t.n11 / t.c1 if t.c1 else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def precision_coverage(t: ContingencyTable) -> tuple[float, float]:
    precision = t.n11 / t.r1 if t.r1 else 0.0
    return precision, t.r1 / t.n


# --- serialization ----------------------------------------------------------


def condition_to_json(cond: Condition, schema: list[FeatureSchema]) -> dict:
    f = schema[cond.feature]
    bins = list(cond.sorted_values())
    out: dict = {"feature": f.name, "op": "in"}
    if f.kind == NUMERIC:
        out["bins"] = bins
        out["values"] = [f.value_label(b) for b in bins]
    else:
        out["values"] = [f.categories[b] for b in bins]
    return out


def condition_from_json(d: dict, schema: list[FeatureSchema]) -> Condition:
    names = [f.name for f in schema]
    idx = names.index(d["feature"])
    f = schema[idx]
    if f.kind == NUMERIC:
        values = frozenset(int(b) for b in d["bins"])
    else:
        values = frozenset(f.categories.index(v) for v in d["values"])
    return Condition(idx, values, f.domain_size)


def rule_to_json(
    rule: Rule,
    schema: list[FeatureSchema],
    precision: float | None = None,
    coverage: float | None = None,
    fitness: float | None = None,
) -> dict:
    out: dict = {
        "clause": [condition_to_json(c, schema) for c in rule.clause],
        "prediction": rule.prediction,
    }
    if rule.is_default:
        out["default_rule"] = True
    if precision is not None:
        out["precision"] = precision
    if coverage is not None:
        out["coverage"] = coverage
    if fitness is not None:
        out["fitness"] = fitness
    return out


def rule_from_json(d: dict, schema: list[FeatureSchema]) -> Rule:
    return Rule(
        clause=tuple(
            sorted(
                (condition_from_json(c, schema) for c in d["clause"]),
                key=lambda c: c.feature,
            )
        ),
        prediction=d["prediction"],
        is_default=bool(d.get("default_rule", False)),
    )


def describe_condition(cond: Condition, schema: list[FeatureSchema]) -> str:
    f = schema[cond.feature]
    bins = cond.sorted_values()
    if f.kind == CATEGORICAL:
        if len(bins) == 1:
            return f"{f.name} = {f.categories[bins[0]]}"
        options = ", ".join(f.categories[b] for b in bins)
        return f"{f.name} in {{{options}}}"
    parts = [f.value_label(b) for b in bins]
    return parts[0] if len(parts) == 1 else "(" + " or ".join(parts) + ")"


def describe_rule(rule: Rule, schema: list[FeatureSchema], class_name: str = "class") -> str:
    if rule.is_default:
        return f"IF (anything else) THEN {class_name} = {rule.prediction}"
    body = " AND ".join(describe_condition(c, schema) for c in rule.clause)
    return f"IF {body} THEN {class_name} = {rule.prediction}"

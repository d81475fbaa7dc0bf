"""Scoring interpretations against the model they explain.

An interpretation is an ordered list of rules with cached precision and
coverage. Prediction arbitration: among the rules covering an instance the
highest-precision one wins (ties: higher coverage, then earlier list order);
no covering rule means abstention. Set-Score is the percentage of instances
whose arbitrated rule prediction matches the model label, with abstentions
counting as misses.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rules import Rule, contingency, cover_mask, precision_coverage


@dataclass(frozen=True)
class SelectedRule:
    rule: Rule
    precision: float
    coverage: float
    fitness: float


@dataclass
class Interpretation:
    rules: list[SelectedRule]
    metadata: dict = field(default_factory=dict)


def predict_with_rules(interp: Interpretation, binned_row) -> str | None:
    """Arbitrated prediction for one discretized row; None = abstain."""
    row = np.asarray(binned_row)
    best = None
    for order, sr in enumerate(interp.rules):
        if all(int(row[c.feature]) in c.values for c in sr.rule.clause):
            key = (-sr.precision, -sr.coverage, order)
            if best is None or key < best[0]:
                best = (key, sr.rule.prediction)
    return None if best is None else best[1]


def _arbitrate(interp: Interpretation, binned: np.ndarray) -> np.ndarray:
    """Vectorized winner predictions; '' where every rule abstains."""
    n = len(binned)
    best_p = np.full(n, -np.inf)
    best_c = np.full(n, -np.inf)
    pred = np.full(n, "", dtype=object)
    for sr in interp.rules:  # ascending order: later rules must win strictly
        m = cover_mask(sr.rule, binned)
        better = m & (
            (sr.precision > best_p) | ((sr.precision == best_p) & (sr.coverage > best_c))
        )
        if better.any():
            best_p[better] = sr.precision
            best_c[better] = sr.coverage
            pred[better] = sr.rule.prediction
    return pred


def set_score(interp: Interpretation, binned, model_labels) -> float:
    """Percentage of rows whose arbitrated prediction matches the model."""
    X = np.asarray(binned)
    y = np.asarray([str(v) for v in model_labels])
    if len(X) != len(y):
        raise ValueError("rows/labels length mismatch")
    if len(y) == 0:
        raise ValueError("set_score needs at least one row")
    if not interp.rules:
        return 0.0
    pred = _arbitrate(interp, X)
    return float(np.count_nonzero(pred == y) / len(y) * 100.0)


def greedy_select(
    candidates: list[tuple[Rule, float]],
    k: int,
    binned,
    model_labels,
    metadata: dict | None = None,
) -> Interpretation:
    """Forward selection of at most k rules maximizing incremental Set-Score.

    Candidate stats (precision, coverage) are computed on the given reference
    rows, normally the validation split. Each step adds the candidate whose
    inclusion raises the interpretation's Set-Score the most (ties: higher
    fitness, fewer conditions, earlier candidate order) and stops early when
    nothing improves strictly.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    X = np.asarray(binned)
    y = np.asarray([str(v) for v in model_labels])
    if len(X) != len(y) or len(y) == 0:
        raise ValueError("reference rows/labels empty or mismatched")

    seen: set[tuple] = set()
    pool: list[tuple[int, Rule, float, float, float, np.ndarray]] = []
    for order, (rule, fit) in enumerate(candidates):
        ident = (rule.clause_key(), rule.prediction)
        if ident in seen:
            continue
        seen.add(ident)
        t = contingency(rule, X, y)
        prec, cov = precision_coverage(t)
        pool.append((order, rule, fit, prec, cov, cover_mask(rule, X)))

    n = len(y)
    best_p = np.full(n, -np.inf)
    best_c = np.full(n, -np.inf)
    current_pred = np.full(n, "", dtype=object)
    current_score = 0.0
    chosen: list[SelectedRule] = []
    used: set[int] = set()

    while len(chosen) < k and len(used) < len(pool):
        best_step = None
        for order, rule, fit, prec, cov, mask in pool:
            if order in used:
                continue
            beat = mask & ((prec > best_p) | ((prec == best_p) & (cov > best_c)))
            trial = np.where(beat, rule.prediction, current_pred)
            score = float(np.count_nonzero(trial == y) / n * 100.0)
            step_key = (score, fit, -rule.n_conditions(), -order)
            if best_step is None or step_key > best_step[0]:
                best_step = (step_key, order, rule, fit, prec, cov, mask)
        if best_step is None or best_step[0][0] <= current_score:
            break
        _, order, rule, fit, prec, cov, mask = best_step
        used.add(order)
        beat = mask & ((prec > best_p) | ((prec == best_p) & (cov > best_c)))
        best_p[beat] = prec
        best_c[beat] = cov
        current_pred[beat] = rule.prediction
        current_score = float(np.count_nonzero(current_pred == y) / n * 100.0)
        chosen.append(SelectedRule(rule, prec, cov, fit))

    meta = dict(metadata or {})
    meta.setdefault("selection_size", k)
    meta.setdefault("reference_split", "validation")
    return Interpretation(chosen, meta)

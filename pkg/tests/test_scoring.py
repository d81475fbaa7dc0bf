import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evorules import (
    Condition,
    Interpretation,
    Rule,
    SelectedRule,
    cover_mask,
    greedy_select,
    predict_with_rules,
    set_score,
)


def sel(rule, precision, coverage, fitness=0.0):
    return SelectedRule(rule, precision, coverage, fitness)


def rule_on(feature, bins, prediction, domain=3):
    return Rule((Condition(feature, frozenset(bins), domain),), prediction)


def test_predict_highest_precision_wins():
    # rows have f0 and f1; both rules cover row [0, 0]
    interp = Interpretation(
        [
            sel(rule_on(0, [0], "a"), 0.8, 0.5),
            sel(rule_on(1, [0], "b"), 0.9, 0.1),
        ]
    )
    assert predict_with_rules(interp, [0, 0]) == "b"
    assert predict_with_rules(interp, [0, 1]) == "a"
    assert predict_with_rules(interp, [1, 0]) == "b"
    assert predict_with_rules(interp, [1, 1]) is None


def test_predict_precision_tie_goes_to_coverage():
    interp = Interpretation(
        [
            sel(rule_on(0, [0], "a"), 0.9, 0.2),
            sel(rule_on(1, [0], "b"), 0.9, 0.6),
        ]
    )
    assert predict_with_rules(interp, [0, 0]) == "b"


def test_predict_full_tie_goes_to_order():
    interp = Interpretation(
        [
            sel(rule_on(0, [0], "a"), 0.9, 0.5),
            sel(rule_on(1, [0], "b"), 0.9, 0.5),
        ]
    )
    assert predict_with_rules(interp, [0, 0]) == "a"


def test_default_rule_covers_everything():
    interp = Interpretation([sel(Rule((), "a", is_default=True), 0.5, 1.0)])
    assert predict_with_rules(interp, [2, 2]) == "a"


def test_set_score_counts_abstentions_as_misses():
    binned = np.array([[0], [0], [1], [2]])
    labels = ["a", "a", "a", "a"]
    interp = Interpretation([sel(rule_on(0, [0], "a"), 1.0, 0.5)])
    # two covered and correct, one uncovered, one covered? no: bins 1 and 2 abstain
    assert set_score(interp, binned, labels) == pytest.approx(50.0)


def test_set_score_wrong_prediction_is_miss():
    binned = np.array([[0], [0], [1], [1]])
    labels = ["a", "a", "b", "b"]
    interp = Interpretation(
        [sel(rule_on(0, [0], "a"), 1.0, 0.5), sel(rule_on(0, [1], "a"), 0.0, 0.5)]
    )
    assert set_score(interp, binned, labels) == pytest.approx(50.0)


def test_set_score_empty_interpretation_is_zero():
    assert set_score(Interpretation([]), np.array([[0]]), ["a"]) == 0.0


def test_set_score_validates_lengths():
    interp = Interpretation([sel(rule_on(0, [0], "a"), 1.0, 1.0)])
    with pytest.raises(ValueError):
        set_score(interp, np.array([[0], [1]]), ["a"])
    with pytest.raises(ValueError):
        set_score(interp, np.empty((0, 1), dtype=int), [])


def test_arbitration_matches_rowwise_prediction():
    rng = np.random.default_rng(0)
    binned = rng.integers(0, 3, size=(60, 2))
    labels = np.where(binned[:, 0] == 0, "a", "b").tolist()
    interp = Interpretation(
        [
            sel(rule_on(0, [0], "a"), 0.9, 0.4),
            sel(rule_on(1, [1, 2], "b"), 0.9, 0.4),
            sel(rule_on(0, [1], "b"), 0.7, 0.3),
        ]
    )
    per_row = [predict_with_rules(interp, row) for row in binned]
    hits = sum(1 for p, y in zip(per_row, labels) if p == y)
    assert set_score(interp, binned, labels) == pytest.approx(hits / len(labels) * 100.0)


def two_feature_problem(seed=1, n=200):
    rng = np.random.default_rng(seed)
    binned = np.column_stack([rng.integers(0, 3, n), rng.integers(0, 3, n)])
    labels = np.where((binned[:, 0] == 0) | (binned[:, 1] == 2), "pos", "neg").tolist()
    cands = []
    for f in (0, 1):
        for b in range(3):
            for lab in ("pos", "neg"):
                cands.append((rule_on(f, [b], lab), float(10 - f - b)))
    return cands, binned, labels


def test_greedy_improves_then_stops():
    cands, binned, labels = two_feature_problem()
    small = greedy_select(cands, 2, binned, labels)
    big = greedy_select(cands, 8, binned, labels)
    assert set_score(big, binned, labels) >= set_score(small, binned, labels)
    # strict-improvement stopping: the selection never pads with useless rules
    assert len(big.rules) <= 8
    scores = []
    for size in range(1, len(big.rules) + 1):
        prefix = Interpretation(big.rules[:size])
        scores.append(set_score(prefix, binned, labels))
    assert scores == sorted(scores)
    assert all(b > a for a, b in zip(scores, scores[1:]))


def test_greedy_prefix_property():
    # the first rules of a larger selection are exactly the smaller selection
    cands, binned, labels = two_feature_problem(seed=7)
    small = greedy_select(cands, 3, binned, labels)
    big = greedy_select(cands, 6, binned, labels)
    assert big.rules[: len(small.rules)] == small.rules


def test_greedy_never_repeats_a_rule():
    cands, binned, labels = two_feature_problem(seed=3)
    out = greedy_select(cands, 10, binned, labels)
    keys = [(sr.rule.clause_key(), sr.rule.prediction) for sr in out.rules]
    assert len(keys) == len(set(keys))


def test_greedy_dedups_candidates():
    binned = np.array([[0], [0], [1], [1]])
    labels = ["a", "a", "b", "b"]
    r = rule_on(0, [0], "a")
    out = greedy_select([(r, 0.5), (r, 0.5), (r, 0.9)], 3, binned, labels)
    assert len(out.rules) >= 1
    keys = [(sr.rule.clause_key(), sr.rule.prediction) for sr in out.rules]
    assert len(keys) == len(set(keys))


def test_greedy_tie_prefers_higher_fitness():
    binned = np.array([[0, 0], [0, 0], [1, 1], [1, 1]])
    labels = ["a", "a", "b", "b"]
    # both candidates produce the same score gain; fitness breaks the tie
    lo = (rule_on(0, [0], "a", domain=2), 0.1)
    hi = (rule_on(1, [0], "a", domain=2), 0.9)
    out = greedy_select([lo, hi], 1, binned, labels)
    assert out.rules[0].rule == hi[0]


def test_greedy_tie_prefers_fewer_conditions():
    binned = np.array([[0, 0], [0, 0], [1, 1], [1, 1]])
    labels = ["a", "a", "b", "b"]
    long_rule = Rule(
        (Condition(0, frozenset([0]), 2), Condition(1, frozenset([0]), 2)), "a"
    )
    short_rule = rule_on(1, [0], "a", domain=2)
    out = greedy_select([(long_rule, 0.5), (short_rule, 0.5)], 1, binned, labels)
    assert out.rules[0].rule == short_rule


def test_greedy_metadata_defaults():
    binned = np.array([[0], [1]])
    labels = ["a", "b"]
    out = greedy_select([(rule_on(0, [0], "a"), 0.5)], 4, binned, labels, {"seed": 7})
    assert out.metadata["seed"] == 7
    assert out.metadata["selection_size"] == 4
    assert out.metadata["reference_split"] == "validation"
    with pytest.raises(ValueError):
        greedy_select([(rule_on(0, [0], "a"), 0.5)], 0, binned, labels)


def test_greedy_stats_match_reference_rows():
    cands, binned, labels = two_feature_problem(seed=5)
    out = greedy_select(cands, 5, binned, labels)
    y = np.array(labels)
    for sr in out.rules:
        m = cover_mask(sr.rule, binned)
        covered = int(m.sum())
        correct = int(np.count_nonzero(m & (y == sr.rule.prediction)))
        assert sr.precision == pytest.approx(correct / covered)
        assert sr.coverage == pytest.approx(covered / len(y))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 8))
def test_greedy_score_never_below_single_best(seed, k):
    cands, binned, labels = two_feature_problem(seed=seed, n=80)
    out = greedy_select(cands, k, binned, labels)
    best_single = max(
        set_score(greedy_select([c], 1, binned, labels), binned, labels) for c in cands
    )
    assert set_score(out, binned, labels) >= best_single - 1e-9

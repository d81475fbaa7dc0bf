import json

import pytest

from evorules import (
    CATEGORICAL,
    Condition,
    FeatureSchema,
    Interpretation,
    Rule,
    RobustnessReport,
    SelectedRule,
    dump_json,
    interpretation_from_json,
    interpretation_to_json,
    robustness_markdown,
    robustness_to_json,
    rules_markdown,
    write_json,
)

SCHEMA = [
    FeatureSchema("odor", CATEGORICAL, categories=("none", "foul", "almond")),
    FeatureSchema("habitat", CATEGORICAL, categories=("woods", "urban")),
]


def small_interp():
    rules = [
        SelectedRule(
            Rule((Condition(0, frozenset([0]), 3),), "edible"), 0.97, 0.4, 0.31
        ),
        SelectedRule(
            Rule((Condition(1, frozenset([1]), 2),), "poisonous"), 0.88, 0.2, 0.12
        ),
    ]
    return Interpretation(rules, {"approach": "evolved", "selection_size": 5,
                                  "reference_split": "validation", "seed": 3,
                                  "config_hash": "abc123"})


def test_dump_json_is_stable_and_sorted():
    text = dump_json({"b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')
    assert dump_json({"b": 1, "a": 2}) == text


def test_write_json_trailing_newline(tmp_path):
    path = tmp_path / "doc.json"
    write_json(str(path), {"x": 1})
    raw = path.read_text()
    assert raw.endswith("\n")
    assert json.loads(raw) == {"x": 1}


def test_interpretation_round_trip():
    interp = small_interp()
    doc = interpretation_to_json(interp, SCHEMA, ("edible", "poisonous"),
                                 scores={"validation": 91.5, "scoring": 90.0})
    assert doc["format"] == "interpretation/1"
    assert doc["set_scores"] == {"validation": 91.5, "scoring": 90.0}
    back, schema, class_labels = interpretation_from_json(doc)
    assert schema == SCHEMA
    assert list(class_labels) == ["edible", "poisonous"]
    assert len(back.rules) == 2
    assert back.rules[0].rule == interp.rules[0].rule
    assert back.rules[0].precision == pytest.approx(0.97)
    assert back.metadata["config_hash"] == "abc123"


def test_rules_markdown_one_row_per_rule():
    md = rules_markdown(small_interp(), SCHEMA)
    lines = md.splitlines()
    assert lines[0].startswith("| # | Rule |")
    assert len(lines) == 2 + 2  # header, separator, two rules
    assert "odor = none" in md
    assert "THEN class = edible" in md


def test_robustness_report_serialization():
    report = RobustnessReport(
        cells={("evolved", "bootstrap"): (90.0, 1.5), ("evolved", "uniform"): (60.0, 8.0)},
        partitions=10,
        scores={("evolved", "bootstrap"): [89.0, 91.0], ("evolved", "uniform"): [52.0, 68.0]},
    )
    doc = robustness_to_json(report)
    assert doc["format"] == "robustness/1"
    assert doc["approaches"]["evolved"]["bootstrap"]["mean"] == 90.0
    md = robustness_markdown(report)
    assert "Method 1 (bootstrap)" in md
    assert "Method 3 (uniform)" in md
    assert "90.00 ± 1.50" in md
    assert "60.00 ± 8.00" in md

"""Serialization of run outputs: interpretation JSON, Markdown, robustness.

JSON output is canonical (sorted keys, no timestamps) so reruns with the same
seed produce byte-identical files.
"""
from __future__ import annotations

import json

from .data import FeatureSchema, schema_from_json, schema_to_json
from .rules import describe_rule, rule_from_json, rule_to_json
from .scoring import Interpretation, SelectedRule
from .shift import RobustnessReport

INTERPRETATION_FORMAT = "interpretation/1"


def interpretation_to_json(
    interp: Interpretation,
    schema: list[FeatureSchema],
    class_labels,
    scores: dict[str, float] | None = None,
) -> dict:
    doc = {
        "format": INTERPRETATION_FORMAT,
        "approach": interp.metadata.get("approach", "evolved"),
        "selection_size": interp.metadata.get("selection_size"),
        "reference_split": interp.metadata.get("reference_split", "validation"),
        "seed": interp.metadata.get("seed"),
        "config_hash": interp.metadata.get("config_hash"),
        "class_labels": list(class_labels),
        "schema": schema_to_json(schema),
        "rules": [
            rule_to_json(sr.rule, schema, precision=sr.precision, coverage=sr.coverage, fitness=sr.fitness)
            for sr in interp.rules
        ],
    }
    if scores:
        doc["set_scores"] = {k: v for k, v in scores.items()}
    return doc


def interpretation_from_json(doc: dict) -> tuple[Interpretation, list[FeatureSchema], list[str]]:
    if doc.get("format") != INTERPRETATION_FORMAT:
        raise ValueError(f"not an interpretation file (format={doc.get('format')!r})")
    schema = schema_from_json(doc["schema"])
    rules = []
    for rd in doc["rules"]:
        rules.append(
            SelectedRule(
                rule=rule_from_json(rd, schema),
                precision=float(rd["precision"]),
                coverage=float(rd["coverage"]),
                fitness=float(rd.get("fitness", 0.0)),
            )
        )
    meta = {
        "approach": doc.get("approach", "evolved"),
        "selection_size": doc.get("selection_size"),
        "reference_split": doc.get("reference_split", "validation"),
        "seed": doc.get("seed"),
        "config_hash": doc.get("config_hash"),
    }
    return Interpretation(rules, meta), schema, list(doc["class_labels"])


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(path: str, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(doc))


def rules_markdown(interp: Interpretation, schema: list[FeatureSchema]) -> str:
    lines = [
        "| # | Rule | Precision | Coverage |",
        "| --- | --- | --- | --- |",
    ]
    for i, sr in enumerate(interp.rules, start=1):
        text = describe_rule(sr.rule, schema)
        lines.append(f"| {i} | {text} | {sr.precision:.3f} | {sr.coverage:.3f} |")
    return "\n".join(lines)


def explain_markdown(
    schema: list[FeatureSchema],
    interps: dict[int, Interpretation],
    validation_scores: dict[int, float],
    scoring_scores: dict[int, float],
    title: str = "Model interpretation",
) -> str:
    parts = [f"# {title}", ""]
    parts.append("| Rules kept | Validation Set-Score | Scoring Set-Score |")
    parts.append("| --- | --- | --- |")
    for k in sorted(interps):
        parts.append(f"| {k} | {validation_scores[k]:.2f} | {scoring_scores[k]:.2f} |")
    parts.append("")
    for k in sorted(interps):
        parts.append(f"## Top {k} rules")
        parts.append("")
        parts.append(rules_markdown(interps[k], schema))
        parts.append("")
    return "\n".join(parts)


METHOD_TITLES = {
    "bootstrap": "Method 1 (bootstrap)",
    "marginal": "Method 2 (marginal)",
    "uniform": "Method 3 (uniform)",
}


def robustness_to_json(report: RobustnessReport) -> dict:
    rows = {}
    for (approach, kind), (mean, std) in report.cells.items():
        rows.setdefault(approach, {})[kind] = {
            "mean": mean,
            "std": std,
            "scores": report.scores[(approach, kind)],
        }
    return {"format": "robustness/1", "partitions": report.partitions, "approaches": rows}


def robustness_markdown(report: RobustnessReport) -> str:
    kinds = [k for k in ("bootstrap", "marginal", "uniform") if any(key[1] == k for key in report.cells)]
    approaches = sorted({a for a, _ in report.cells})
    head = "| Approach | " + " | ".join(METHOD_TITLES[k] for k in kinds) + " |"
    sep = "| --- |" + " --- |" * len(kinds)
    lines = [head, sep]
    for a in approaches:
        cells = []
        for k in kinds:
            mean, std = report.cells[(a, k)]
            cells.append(f"{mean:.2f} ± {std:.2f}")
        lines.append(f"| {a} | " + " | ".join(cells) + " |")
    return "\n".join(lines)


def comparison_to_json(matrix: dict[str, dict[int, float]], chosen: dict[str, dict]) -> dict:
    return {
        "format": "comparison/1",
        "scores": {a: {str(k): v for k, v in row.items()} for a, row in matrix.items()},
        "chosen_params": chosen,
    }


def comparison_markdown(matrix: dict[str, dict[int, float]]) -> str:
    sizes = sorted({k for row in matrix.values() for k in row})
    head = "| Approach | " + " | ".join(f"top {k}" for k in sizes) + " |"
    sep = "| --- |" + " --- |" * len(sizes)
    lines = [head, sep]
    for a in sorted(matrix):
        cells = [f"{matrix[a][k]:.2f}" if k in matrix[a] else "-" for k in sizes]
        lines.append(f"| {a} | " + " | ".join(cells) + " |")
    return "\n".join(lines)

"""Command line front end.

Subcommands: explain (mine + evolve + select + report), robustness (score
saved interpretations on synthetic shift partitions), compare (evolved rules
vs decision-tree surrogate vs apriori), predict (apply a saved interpretation
to new rows). Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import shlex
import sys

from .baselines import BaselineConfig
from .data import conform_to_schema, load_csv
from .oracle import OracleError
from .pipeline import RunConfig, compare_run, explain_run, robustness_run
from .reports import interpretation_from_json, robustness_markdown
from .scoring import predict_with_rules

CONFIG_KEYS = {
    "data_path": str,
    "label_column": str,
    "oracle_kind": str,
    "oracle_command": str,
    "class_labels": str,
    "oracle_depth": int,
    "forest_trees": int,
    "miner": str,
    "support_threshold": float,
    "samples": int,
    "top_k": int,
    "kernel_width": float,
    "ridge_lambda": float,
    "max_bins": int,
    "generations": int,
    "population_size": int,
    "crossover_prob": float,
    "mutation_prob": float,
    "selection_sizes": str,
    "augment_fraction": float,
    "robustness_partitions": int,
    "robustness_fraction": float,
    "seed": int,
    "out_dir": str,
}


def _add_run_flags(p: argparse.ArgumentParser):
    # --data stays optional at the argparse level so a config file can supply
    # data_path instead; build_config errors when neither does
    p.add_argument("--data", dest="data_path", default=None, help="input CSV path")
    p.add_argument("--label-column", dest="label_column", default=None)
    p.add_argument(
        "--hint",
        dest="hints",
        action="append",
        default=[],
        metavar="NAME=KIND",
        help="force a column kind (numeric or categorical); repeatable",
    )
    p.add_argument("--schema-hints", dest="schema_hints_file", default=None,
                   help="JSON file mapping feature name to numeric/categorical")
    p.add_argument("--oracle", dest="oracle_kind", choices=["tree", "forest", "external"], default=None)
    p.add_argument("--oracle-cmd", dest="oracle_command", default=None,
                   help="external oracle command line (shlex-split)")
    p.add_argument("--class-labels", dest="class_labels", default=None,
                   help="comma-separated class labels (required for external oracles)")
    p.add_argument("--oracle-depth", dest="oracle_depth", type=int, default=None)
    p.add_argument("--forest-trees", dest="forest_trees", type=int, default=None)
    p.add_argument("--miner", dest="miner", choices=["local", "frequent"], default=None)
    p.add_argument("--support", dest="support_threshold", type=float, default=None)
    p.add_argument("--samples", dest="samples", type=int, default=None)
    p.add_argument("--top-k", dest="top_k", type=int, default=None)
    p.add_argument("--kernel-width", dest="kernel_width", type=float, default=None)
    p.add_argument("--ridge-lambda", dest="ridge_lambda", type=float, default=None)
    p.add_argument("--max-bins", dest="max_bins", type=int, default=None)
    p.add_argument("--generations", dest="generations", type=int, default=None)
    p.add_argument("--population", dest="population_size", type=int, default=None)
    p.add_argument("--crossover", dest="crossover_prob", type=float, default=None)
    p.add_argument("--mutation", dest="mutation_prob", type=float, default=None)
    p.add_argument("--sizes", dest="selection_sizes", default=None,
                   help="comma-separated interpretation sizes, e.g. 5,10,15,20")
    p.add_argument("--augment-fraction", dest="augment_fraction", type=float, default=None)
    p.add_argument("--partitions", dest="robustness_partitions", type=int, default=None)
    p.add_argument("--fraction", dest="robustness_fraction", type=float, default=None)
    p.add_argument("--seed", dest="seed", type=int, default=None)
    p.add_argument("--out", dest="out_dir", default=None, help="output directory")
    p.add_argument("--config", dest="config_file", default=None,
                   help="JSON config file; explicit flags override its values")


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


def build_config(args, extra: dict | None = None) -> RunConfig:
    values: dict = {}
    if getattr(args, "config_file", None):
        with open(args.config_file, encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    hints = {}
    if getattr(args, "schema_hints_file", None):
        with open(args.schema_hints_file, encoding="utf-8") as fh:
            hints.update(json.load(fh))
    for item in getattr(args, "hints", []) or []:
        if "=" not in item:
            raise ValueError(f"bad --hint {item!r}, expected NAME=KIND")
        name, kind = item.split("=", 1)
        hints[name.strip()] = kind.strip()
    if hints:
        values["schema_hints"] = hints
    if isinstance(values.get("oracle_command"), str):
        values["oracle_command"] = tuple(shlex.split(values["oracle_command"]))
    if isinstance(values.get("class_labels"), str):
        values["class_labels"] = tuple(
            t.strip() for t in values["class_labels"].split(",") if t.strip()
        )
    if isinstance(values.get("selection_sizes"), str):
        values["selection_sizes"] = _parse_ints(values["selection_sizes"])
    elif isinstance(values.get("selection_sizes"), list):
        values["selection_sizes"] = tuple(int(k) for k in values["selection_sizes"])
    if extra:
        values.update(extra)
    if "data_path" not in values:
        raise ValueError("no input data: pass --data or put data_path in the config")
    return RunConfig(**values)


def cmd_explain(args) -> int:
    cfg = build_config(args)
    result = explain_run(cfg, ga_logs=args.ga_logs)
    try:
        for k in sorted(result.interpretations):
            print(
                f"top {k}: validation Set-Score {result.validation_scores[k]:.2f}, "
                f"scoring Set-Score {result.scoring_scores[k]:.2f}"
            )
        if cfg.out_dir:
            print(f"wrote interpretations and report.md to {cfg.out_dir}")
    finally:
        result.prepared.oracle.close()
    return 0


def cmd_compare(args) -> int:
    extra = {}
    grids = {}
    if args.dt_depths:
        grids["dt_depth_grid"] = _parse_ints(args.dt_depths)
    if args.apriori_supports:
        grids["apriori_support_grid"] = _parse_floats(args.apriori_supports)
    if args.max_clause_len is not None:
        grids["apriori_max_clause_len"] = args.max_clause_len
    if grids:
        extra["baselines"] = BaselineConfig(**grids)
    cfg = build_config(args, extra)
    result = compare_run(cfg)
    try:
        sizes = sorted({k for row in result.matrix.values() for k in row})
        for approach in sorted(result.matrix):
            cells = ", ".join(
                f"top {k}: {result.matrix[approach][k]:.2f}"
                for k in sizes
                if k in result.matrix[approach]
            )
            print(f"{approach}: {cells or 'no rules'}")
        if cfg.out_dir:
            print(f"wrote comparison.json and comparison.md to {cfg.out_dir}")
    finally:
        result.prepared.oracle.close()
    return 0


def cmd_robustness(args) -> int:
    cfg = build_config(args)
    interps = {}
    for path in args.interpretation:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        interp, schema, _ = interpretation_from_json(doc)
        approach = interp.metadata.get("approach") or "evolved"
        key = approach
        suffix = 2
        while key in interps:
            key = f"{approach}-{suffix}"
            suffix += 1
        interps[key] = (interp, schema)
    report = robustness_run(cfg, interps)
    print(robustness_markdown(report))
    if cfg.out_dir:
        print(f"wrote robustness.json and robustness.md to {cfg.out_dir}")
    return 0


def cmd_predict(args) -> int:
    with open(args.interpretation, encoding="utf-8") as fh:
        doc = json.load(fh)
    interp, schema, _ = interpretation_from_json(doc)
    hints = {f.name: f.kind for f in schema}
    table = load_csv(args.data_path, {n: k for n, k in hints.items()})
    data = conform_to_schema(table, schema)
    binned = data.binned_matrix()
    lines = []
    for i in range(len(binned)):
        label = predict_with_rules(interp, binned[i])
        lines.append(label if label is not None else "abstain")
    text = "\n".join(lines) + "\n"
    if args.out_file:
        with open(args.out_file, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evorules",
        description="Global IF-THEN explanations of black-box classifiers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explain", help="mine, evolve and select rules for a model")
    _add_run_flags(p)
    p.add_argument("--ga-logs", action="store_true", help="write per-generation JSONL logs")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("robustness", help="score saved interpretations under distribution shift")
    _add_run_flags(p)
    p.add_argument("--interpretation", action="append", required=True,
                   help="interpretation JSON file; repeatable")
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("compare", help="evolved rules vs dt-surrogate and apriori baselines")
    _add_run_flags(p)
    p.add_argument("--dt-depths", default=None, help="comma-separated surrogate depth grid")
    p.add_argument("--apriori-supports", default=None, help="comma-separated support grid")
    p.add_argument("--max-clause-len", type=int, default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("predict", help="apply a saved interpretation to new rows")
    p.add_argument("--interpretation", required=True)
    p.add_argument("--data", dest="data_path", required=True)
    p.add_argument("--out", dest="out_file", default=None)
    p.set_defaults(func=cmd_predict)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, OracleError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

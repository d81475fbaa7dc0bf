"""End-to-end runs: load, split, label, discretize, mine, evolve, select.

Every stage draws its randomness from a seed derived off the single run seed
by stage name (sha256 of "master|part|part|..."), so one integer reproduces
an entire run byte-for-byte regardless of which stages execute.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .baselines import BaselineConfig, apriori_rules, dt_surrogate_rules
from .data import (
    NUMERIC,
    Dataset,
    SplitAssignment,
    conform_to_schema,
    entropy_bin,
    load_csv,
    split,
)
from .ga import EvolvedRuleSet, GaConfig, evolve_rules
from .mining import LocalExplainConfig, mine_conditions_frequent, mine_conditions_local
from .oracle import Oracle, connect_external, fit_builtin_forest, fit_builtin_tree
from .reports import (
    comparison_markdown,
    comparison_to_json,
    explain_markdown,
    interpretation_to_json,
    robustness_markdown,
    robustness_to_json,
    write_json,
)
from .rules import Rule
from .scoring import Interpretation, greedy_select, set_score
from .shift import ShiftMethod, augment, uncertainty_analysis

APPROACH_EVOLVED = "evolved"
APPROACH_DT = "dt-surrogate"
APPROACH_APRIORI = "apriori"


def derive_seed(master: int, *parts) -> int:
    """Stable per-stage sub-seed: sha256 over the master seed and stage labels."""
    text = "|".join([str(int(master))] + [str(p) for p in parts])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % (2**63)


@dataclass(frozen=True)
class RunConfig:
    data_path: str
    label_column: str | None = None
    schema_hints: dict[str, str] = field(default_factory=dict)
    oracle_kind: str = "tree"  # tree | forest | external
    oracle_command: tuple[str, ...] = ()
    class_labels: tuple[str, ...] = ()  # required for external oracles
    oracle_depth: int = 8
    forest_trees: int = 25
    miner: str = "local"  # local | frequent
    support_threshold: float = 0.05
    samples: int = 5000
    top_k: int = 10
    kernel_width: float | None = None
    ridge_lambda: float = 1.0
    max_bins: int = 4
    generations: int = 1000
    population_size: int = 600
    crossover_prob: float = 0.25
    mutation_prob: float = 0.2
    selection_sizes: tuple[int, ...] = (5, 10, 15, 20)
    augment_fraction: float = 0.0
    robustness_partitions: int = 10
    robustness_fraction: float = 0.10
    baselines: BaselineConfig = field(default_factory=BaselineConfig)
    seed: int = 0
    out_dir: str | None = None

    def __post_init__(self):
        if self.oracle_kind not in ("tree", "forest", "external"):
            raise ValueError(f"unknown oracle kind {self.oracle_kind!r}")
        if self.oracle_kind == "external" and not self.oracle_command:
            raise ValueError("external oracle needs a command")
        if self.oracle_kind == "external" and not self.class_labels:
            raise ValueError("external oracle needs explicit class labels")
        if self.miner not in ("local", "frequent"):
            raise ValueError(f"unknown miner {self.miner!r}")
        if not self.selection_sizes or any(k < 1 for k in self.selection_sizes):
            raise ValueError("selection_sizes must be positive")

    def config_hash(self) -> str:
        """Hash of the semantically meaningful fields (output paths excluded)."""
        d = asdict(self)
        d.pop("out_dir")
        blob = json.dumps(d, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def ga_config(self, seed: int) -> GaConfig:
        return GaConfig(
            generations=self.generations,
            population_size=self.population_size,
            crossover_prob=self.crossover_prob,
            mutation_prob=self.mutation_prob,
            seed=seed,
        )

    def miner_config(self) -> LocalExplainConfig:
        return LocalExplainConfig(
            samples=self.samples,
            top_k=self.top_k,
            kernel_width=self.kernel_width,
            ridge_lambda=self.ridge_lambda,
        )


@dataclass
class PreparedRun:
    """Everything downstream stages need, computed once."""

    config: RunConfig
    features: Dataset  # cuts attached
    assignment: SplitAssignment
    oracle: Oracle
    model_labels: list[str]
    train_data: Dataset  # possibly augmented, cuts attached
    train_labels: list[str]
    X_train: np.ndarray
    X_valid: np.ndarray
    X_score: np.ndarray
    valid_labels: list[str]
    score_labels: list[str]


@dataclass
class ExplainResult:
    prepared: PreparedRun
    rule_sets: dict[str, EvolvedRuleSet]
    candidates: list[tuple[Rule, float]]
    interpretations: dict[int, Interpretation]
    validation_scores: dict[int, float]
    scoring_scores: dict[int, float]


def _build_oracle(cfg: RunConfig, train_raw: Dataset, target: list[str] | None) -> Oracle:
    if cfg.oracle_kind == "external":
        return connect_external(list(cfg.oracle_command), cfg.class_labels)
    if target is None:
        raise ValueError(f"builtin oracle {cfg.oracle_kind!r} needs a label column")
    if cfg.oracle_kind == "tree":
        return fit_builtin_tree(train_raw, target, max_depth=cfg.oracle_depth)
    return fit_builtin_forest(
        train_raw,
        target,
        n_trees=cfg.forest_trees,
        max_depth=cfg.oracle_depth,
        seed=derive_seed(cfg.seed, "forest"),
    )


def prepare(cfg: RunConfig, oracle: Oracle | None = None) -> PreparedRun:
    """Load, split, label everything with the oracle, augment, discretize."""
    hints = dict(cfg.schema_hints)
    if cfg.label_column is not None:
        hints.setdefault(cfg.label_column, "categorical")
    table = load_csv(cfg.data_path, hints)
    if cfg.label_column is not None:
        target_all = table.column_strings(cfg.label_column)
        features = table.drop(cfg.label_column)
    else:
        target_all = None
        features = table

    assignment = split(features.n_rows, derive_seed(cfg.seed, "split"))
    train_raw = features.subset(assignment.train)
    if oracle is None:
        target_train = (
            [target_all[int(i)] for i in assignment.train] if target_all is not None else None
        )
        oracle = _build_oracle(cfg, train_raw, target_train)

    model_labels = oracle.predict_batch(features.rows())

    if cfg.augment_fraction > 0.0:
        train_data, train_labels = augment(
            train_raw, oracle, cfg.augment_fraction, seed=derive_seed(cfg.seed, "augment")
        )
    else:
        train_data = train_raw
        train_labels = [model_labels[int(i)] for i in assignment.train]

    cuts: dict[str, tuple[float, ...]] = {}
    for j, f in enumerate(train_data.schema):
        if f.kind == NUMERIC:
            cuts[f.name] = entropy_bin(train_data.columns[j], train_labels, cfg.max_bins)
    features = features.with_cuts(cuts)
    train_data = train_data.with_cuts(cuts)

    X_all = features.binned_matrix()
    return PreparedRun(
        config=cfg,
        features=features,
        assignment=assignment,
        oracle=oracle,
        model_labels=model_labels,
        train_data=train_data,
        train_labels=train_labels,
        X_train=train_data.binned_matrix(),
        X_valid=X_all[assignment.valid],
        X_score=X_all[assignment.score],
        valid_labels=[model_labels[int(i)] for i in assignment.valid],
        score_labels=[model_labels[int(i)] for i in assignment.score],
    )


def evolve_candidates(prep: PreparedRun, ga_log_dir: str | None = None) -> dict[str, EvolvedRuleSet]:
    """Mine a pool and run the GA once per class present in the training labels."""
    cfg = prep.config
    present = set(prep.train_labels)
    rule_sets: dict[str, EvolvedRuleSet] = {}
    for class_label in prep.oracle.class_labels:
        if class_label not in present:
            continue
        if cfg.miner == "local":
            pool = mine_conditions_local(
                class_label,
                prep.train_data,
                prep.train_labels,
                prep.oracle,
                cfg.miner_config(),
                seed=derive_seed(cfg.seed, "mine", class_label),
            )
        else:
            pool = mine_conditions_frequent(
                class_label, prep.train_data, prep.train_labels, cfg.support_threshold
            )
        if not pool.conditions:
            continue
        log_stream = None
        if ga_log_dir is not None:
            os.makedirs(ga_log_dir, exist_ok=True)
            log_stream = open(
                os.path.join(ga_log_dir, f"ga_{_slug(class_label)}.jsonl"), "w", encoding="utf-8"
            )
        try:
            rule_sets[class_label] = evolve_rules(
                pool,
                class_label,
                prep.X_train,
                prep.train_labels,
                cfg.ga_config(seed=derive_seed(cfg.seed, "ga", class_label)),
                log_stream=log_stream,
            )
        finally:
            if log_stream is not None:
                log_stream.close()
    if not rule_sets:
        raise ValueError("no class had a non-empty condition pool; nothing to evolve")
    return rule_sets


def _slug(text: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in text)


def merge_candidates(rule_sets: dict[str, EvolvedRuleSet]) -> list[tuple[Rule, float]]:
    out: list[tuple[Rule, float]] = []
    for class_label in sorted(rule_sets):
        out.extend(rule_sets[class_label].rules)
    return out


def select_interpretations(
    prep: PreparedRun,
    candidates: list[tuple[Rule, float]],
    approach: str = APPROACH_EVOLVED,
) -> tuple[dict[int, Interpretation], dict[int, float], dict[int, float]]:
    cfg = prep.config
    interps: dict[int, Interpretation] = {}
    valid_scores: dict[int, float] = {}
    score_scores: dict[int, float] = {}
    for k in cfg.selection_sizes:
        meta = {
            "approach": approach,
            "selection_size": k,
            "reference_split": "validation",
            "seed": cfg.seed,
            "config_hash": cfg.config_hash(),
        }
        interp = greedy_select(candidates, k, prep.X_valid, prep.valid_labels, metadata=meta)
        interps[k] = interp
        valid_scores[k] = set_score(interp, prep.X_valid, prep.valid_labels)
        score_scores[k] = set_score(interp, prep.X_score, prep.score_labels)
    return interps, valid_scores, score_scores


def explain_run(cfg: RunConfig, oracle: Oracle | None = None, ga_logs: bool = False) -> ExplainResult:
    prep = prepare(cfg, oracle=oracle)
    log_dir = os.path.join(cfg.out_dir, "logs") if (ga_logs and cfg.out_dir) else None
    rule_sets = evolve_candidates(prep, ga_log_dir=log_dir)
    candidates = merge_candidates(rule_sets)
    interps, valid_scores, score_scores = select_interpretations(prep, candidates)
    result = ExplainResult(prep, rule_sets, candidates, interps, valid_scores, score_scores)
    if cfg.out_dir:
        write_explain_outputs(result, cfg.out_dir)
    return result


def write_explain_outputs(result: ExplainResult, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    prep = result.prepared
    for k, interp in result.interpretations.items():
        doc = interpretation_to_json(
            interp,
            prep.features.schema,
            prep.oracle.class_labels,
            scores={
                "validation": result.validation_scores[k],
                "scoring": result.scoring_scores[k],
            },
        )
        write_json(os.path.join(out_dir, f"interpretation_top{k}.json"), doc)
    md = explain_markdown(
        prep.features.schema,
        result.interpretations,
        result.validation_scores,
        result.scoring_scores,
    )
    with open(os.path.join(out_dir, "report.md"), "w", encoding="utf-8") as fh:
        fh.write(md + "\n")


# --- comparison ----------------------------------------------------------------


@dataclass
class ComparisonResult:
    prepared: PreparedRun
    matrix: dict[str, dict[int, float]]  # approach -> size -> scoring Set-Score
    interpretations: dict[str, dict[int, Interpretation]]
    chosen_params: dict[str, dict]


def _grid_select(
    prep: PreparedRun,
    grids: list[tuple[dict, list[tuple[Rule, float]]]],
) -> tuple[dict, list[tuple[Rule, float]]]:
    """Pick the grid entry whose greedy interpretation scores best on the
    validation split at the largest requested size (ties: earlier entry)."""
    cfg = prep.config
    k_max = max(cfg.selection_sizes)
    best = None
    for params, cands in grids:
        if not cands:
            continue
        interp = greedy_select(cands, k_max, prep.X_valid, prep.valid_labels)
        score = set_score(interp, prep.X_valid, prep.valid_labels)
        if best is None or score > best[0] + 1e-12:
            best = (score, params, cands)
    if best is None:
        return {}, []
    return best[1], best[2]


def compare_run(cfg: RunConfig, oracle: Oracle | None = None) -> ComparisonResult:
    prep = prepare(cfg, oracle=oracle)
    rule_sets = evolve_candidates(prep)
    evolved = merge_candidates(rule_sets)

    dt_grid = [
        ({"max_depth": d}, dt_surrogate_rules(prep.train_data, prep.train_labels, d))
        for d in cfg.baselines.dt_depth_grid
    ]
    ap_grid = [
        (
            {"support": s, "max_clause_len": cfg.baselines.apriori_max_clause_len},
            apriori_rules(
                prep.train_data,
                prep.train_labels,
                s,
                max_clause_len=cfg.baselines.apriori_max_clause_len,
            ),
        )
        for s in cfg.baselines.apriori_support_grid
    ]
    dt_params, dt_cands = _grid_select(prep, dt_grid)
    ap_params, ap_cands = _grid_select(prep, ap_grid)

    matrix: dict[str, dict[int, float]] = {}
    interpretations: dict[str, dict[int, Interpretation]] = {}
    chosen: dict[str, dict] = {
        APPROACH_EVOLVED: {"miner": cfg.miner},
        APPROACH_DT: dt_params,
        APPROACH_APRIORI: ap_params,
    }
    for approach, cands in (
        (APPROACH_EVOLVED, evolved),
        (APPROACH_DT, dt_cands),
        (APPROACH_APRIORI, ap_cands),
    ):
        if not cands:
            matrix[approach] = {}
            interpretations[approach] = {}
            continue
        interps, _, score_scores = select_interpretations(prep, cands, approach=approach)
        matrix[approach] = score_scores
        interpretations[approach] = interps

    result = ComparisonResult(prep, matrix, interpretations, chosen)
    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
        write_json(
            os.path.join(cfg.out_dir, "comparison.json"),
            comparison_to_json(matrix, chosen),
        )
        with open(os.path.join(cfg.out_dir, "comparison.md"), "w", encoding="utf-8") as fh:
            fh.write(comparison_markdown(matrix) + "\n")
    return result


# --- robustness -----------------------------------------------------------------


def robustness_methods(cfg: RunConfig) -> list[ShiftMethod]:
    return [
        ShiftMethod(
            kind,
            partitions=cfg.robustness_partitions,
            fraction=cfg.robustness_fraction,
            seed=derive_seed(cfg.seed, "shift", kind),
        )
        for kind in ("bootstrap", "marginal", "uniform")
    ]


def robustness_run(
    cfg: RunConfig,
    interps: dict[str, tuple[Interpretation, list]],
    oracle: Oracle | None = None,
):
    """Score interpretations (approach -> (interpretation, its schema)) on
    synthetic partitions of the scoring split.

    Each interpretation's own schema governs the discretization of the
    partitions, so rules keep meaning the bins they were built over even when
    this run's binning would differ."""
    prep = prepare(cfg, oracle=oracle)
    report = None
    for approach in sorted(interps):
        interp, schema = interps[approach]
        source = conform_to_schema(prep.features, schema).subset(prep.assignment.score)
        one = uncertainty_analysis(
            interp, prep.oracle, source, robustness_methods(cfg), approach=approach
        )
        report = one if report is None else report.merged_with(one)
    if cfg.out_dir and report is not None:
        os.makedirs(cfg.out_dir, exist_ok=True)
        write_json(os.path.join(cfg.out_dir, "robustness.json"), robustness_to_json(report))
        with open(os.path.join(cfg.out_dir, "robustness.md"), "w", encoding="utf-8") as fh:
            fh.write(robustness_markdown(report) + "\n")
    return report

"""Global IF-THEN explanations of black-box classifiers on tabular data.

Rules over discretized features are mined locally, evolved globally under a
signed mutual-information fitness, greedily selected by Set-Score, and
stress-tested under synthetic distribution shift.
"""

from .baselines import BaselineConfig, apriori_rules, dt_surrogate_rules
from .data import (
    CATEGORICAL,
    NUMERIC,
    Dataset,
    FeatureSchema,
    SplitAssignment,
    conform_to_schema,
    entropy_bin,
    load_csv,
    split,
)
from .ga import EvolvedRuleSet, GaConfig, decode, evaluate, evolve_rules
from .mining import (
    ConditionPool,
    LocalExplainConfig,
    WeightedCondition,
    local_explain,
    mine_conditions_frequent,
    mine_conditions_local,
)
from .oracle import (
    ExternalOracle,
    ForestOracle,
    Oracle,
    OracleError,
    TreeOracle,
    connect_external,
    fit_builtin_forest,
    fit_builtin_tree,
    oracle_to_artifact,
)
from .pipeline import (
    ComparisonResult,
    ExplainResult,
    RunConfig,
    compare_run,
    derive_seed,
    evolve_candidates,
    explain_run,
    merge_candidates,
    prepare,
    robustness_run,
    select_interpretations,
)
from .reports import (
    comparison_markdown,
    comparison_to_json,
    dump_json,
    explain_markdown,
    interpretation_from_json,
    interpretation_to_json,
    robustness_markdown,
    robustness_to_json,
    rules_markdown,
    write_json,
)
from .rules import (
    EMPTY_RULE_FITNESS,
    Condition,
    ContingencyTable,
    Rule,
    contingency,
    cover_mask,
    covers,
    describe_rule,
    f1,
    fitness,
    mutual_information,
    precision_coverage,
    rule_from_json,
    rule_to_json,
)
from .scoring import Interpretation, SelectedRule, greedy_select, predict_with_rules, set_score
from .shift import RobustnessReport, ShiftMethod, augment, perturb, uncertainty_analysis

__version__ = "0.1.0"

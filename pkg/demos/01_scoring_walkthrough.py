"""A worked tour of the rule math: contingency tables, signed fitness, Set-Score.

Everything downstream (mining, evolution, selection) rests on three numbers
computed from a 2x2 contingency table: mutual information between "rule
fires" and "model predicts the rule's class", an F1 score for reference, and
a signed fitness that flips negative when the rule fires on the wrong rows.
This script builds those tables by hand on a small weather toy so the
numbers can be checked with a pocket calculator.

Run: python3 demos/01_scoring_walkthrough.py
"""

from __future__ import annotations

import numpy as np

from evorules import (
    CATEGORICAL,
    Condition,
    ContingencyTable,
    Dataset,
    FeatureSchema,
    Interpretation,
    Rule,
    SelectedRule,
    contingency,
    describe_rule,
    f1,
    fitness,
    mutual_information,
    precision_coverage,
    set_score,
)

# ----------------------------------------------------------------------------
# A 12-day weather log. The "model" we are explaining predicts whether a
# match gets played; its verdicts are listed alongside.
# ----------------------------------------------------------------------------

SKY = ["sun", "sun", "sun", "rain", "rain", "rain", "cloud", "cloud", "sun", "rain", "cloud", "sun"]
WIND = ["calm", "calm", "gust", "calm", "gust", "gust", "calm", "gust", "calm", "calm", "calm", "gust"]
VERDICT = ["play", "play", "skip", "play", "skip", "skip", "play", "skip", "play", "play", "play", "skip"]

schema = [
    FeatureSchema("sky", CATEGORICAL, categories=("sun", "rain", "cloud")),
    FeatureSchema("wind", CATEGORICAL, categories=("calm", "gust")),
]
data = Dataset(
    tuple(schema),
    [
        np.array([("sun", "rain", "cloud").index(s) for s in SKY], dtype=np.int32),
        np.array([("calm", "gust").index(w) for w in WIND], dtype=np.int32),
    ],
)
binned = data.binned_matrix()
labels = list(VERDICT)

print("Twelve days, two features, and a black-box verdict per day:")
print()
print("  day  sky    wind   verdict")
for i, (s, w, v) in enumerate(zip(SKY, WIND, VERDICT)):
    print(f"  {i:3d}  {s:<6} {w:<6} {v}")
print()

# ----------------------------------------------------------------------------
# One rule, one table. A condition is a set of allowed bins for a feature;
# a rule conjoins conditions and predicts a class.
# ----------------------------------------------------------------------------

calm_rule = Rule(
    clause=(Condition(feature=1, values=frozenset({0}), domain_size=2),),
    prediction="play",
)
print("Rule A:", describe_rule(calm_rule, schema, class_name="verdict"))

table = contingency(calm_rule, binned, labels)
print(f"  covered and play     (n11) = {table.n11}")
print(f"  covered and skip     (n12) = {table.n12}")
print(f"  uncovered and play   (n21) = {table.n21}")
print(f"  uncovered and skip   (n22) = {table.n22}")
print(f"  mutual information = {mutual_information(table):.4f} bits")
print(f"  f1                 = {f1(table):.4f}")
print(f"  fitness            = {fitness(table):+.4f}")
print()

# ----------------------------------------------------------------------------
# The sign test. Fitness is MI when the rule beats independence
# (n11 * N >= row1 * col1) and -MI when it fires on the wrong rows. An
# anti-rule has exactly as much information as its complement, so the sign
# is what separates "useful" from "useful if negated".
# ----------------------------------------------------------------------------

gust_plays = Rule(
    clause=(Condition(feature=1, values=frozenset({1}), domain_size=2),),
    prediction="play",
)
print("Rule B:", describe_rule(gust_plays, schema, class_name="verdict"))
anti = contingency(gust_plays, binned, labels)
print(f"  table = ({anti.n11}, {anti.n12}, {anti.n21}, {anti.n22})")
print(f"  mutual information = {mutual_information(anti):.4f} bits (same magnitude as Rule A)")
print(f"  fitness            = {fitness(anti):+.4f} (negative: it fires on skip days)")
print()

# ----------------------------------------------------------------------------
# Hand-checkable golden triple. With 2000 rows split as n11=600, n12=0,
# n21=1000, n22=400 the mutual information lands on 0.118 bits. Log base 2
# matters: the same table in natural log would read 0.082.
# ----------------------------------------------------------------------------

golden = ContingencyTable(600, 0, 1000, 400)
print("A larger table where the arithmetic is worth checking by hand:")
print("  (n11, n12, n21, n22) = (600, 0, 1000, 400)")
print(f"  mutual information = {mutual_information(golden):.3f} bits (0.118 expected)")
print(f"  f1                 = {f1(golden):.3f} (0.545 expected)")
print(f"  fitness            = {fitness(golden):+.3f}")
print()

# ----------------------------------------------------------------------------
# From rules to an interpretation. Prediction walks the rule list: among
# rules that cover the instance, highest precision wins, coverage breaks
# ties, then list order. Instances no rule covers are abstentions and count
# against the Set-Score.
# ----------------------------------------------------------------------------

sunny_calm = Rule(
    clause=(
        Condition(feature=0, values=frozenset({0}), domain_size=3),
        Condition(feature=1, values=frozenset({0}), domain_size=2),
    ),
    prediction="play",
)
gusty_skip = Rule(
    clause=(Condition(feature=1, values=frozenset({1}), domain_size=2),),
    prediction="skip",
)


def selected(rule: Rule) -> SelectedRule:
    t = contingency(rule, binned, labels)
    p, c = precision_coverage(t)
    return SelectedRule(rule=rule, precision=p, coverage=c, fitness=fitness(t))


interp = Interpretation(rules=[selected(calm_rule), selected(sunny_calm), selected(gusty_skip)])
print("A three-rule interpretation of the verdict model:")
for k, sel in enumerate(interp.rules, 1):
    print(f"  {k}. {describe_rule(sel.rule, schema, class_name='verdict')}")
score = set_score(interp, binned, labels)
print(f"  Set-Score on the twelve days = {score:.2f} (percent predicted exactly)")
print()
print("The pipeline automates what this script did by hand: propose rules,")
print("score them on contingency tables, and keep a small set that imitates")
print("the model. The remaining demos run that pipeline end to end.")

"""Explaining a model that lives in another process, over the line protocol.

The pipeline never needs to import the model it explains. Any executable
that answers prediction batches on its standard streams can be the oracle:

    parent -> child:   N\\n  followed by N CSV rows (schema order)
    child  -> parent:  N lines, one class label each

This script demonstrates the boundary twice. First it writes a ten-line
Python child from scratch, to show there is no hidden handshake. Then, if
the TypeScript adapter has been built (adapter/dist/cli.js), it exports a
built-in forest to a JSON artifact, serves it from node, and checks that
the out-of-process predictions match the in-process ones exactly.

Run: python3 demos/05_external_oracle.py
"""

from __future__ import annotations

import os
import shutil
import sys
import tempfile
import textwrap

import numpy as np

from evorules import (
    CATEGORICAL,
    NUMERIC,
    Dataset,
    FeatureSchema,
    connect_external,
    dump_json,
    fit_builtin_forest,
    oracle_to_artifact,
)

workdir = tempfile.mkdtemp(prefix="evorules-ext-")

# ----------------------------------------------------------------------------
# Part 1: a minimal child process. It grades servings by sugar content,
# reading rows of (name, sugar_grams).
# ----------------------------------------------------------------------------

child_src = textwrap.dedent(
    """
    import sys

    def main():
        while True:
            header = sys.stdin.readline()
            if header == "":
                return
            for _ in range(int(header)):
                name, sugar = sys.stdin.readline().rstrip("\\n").split(",")
                print("sweet" if float(sugar) >= 20.0 else "plain")
            sys.stdout.flush()

    main()
    """
).strip()

child_path = os.path.join(workdir, "grader.py")
with open(child_path, "w") as fh:
    fh.write(child_src + "\n")

print("A complete external oracle, in its entirety:")
print()
for line in child_src.splitlines():
    print(f"    {line}")
print()

grader = connect_external([sys.executable, child_path], class_labels=["plain", "sweet"])
servings = [["espresso", 0.0], ["cola", 35.0], ["oat milk", 19.0], ["syrup", 52.5]]
verdicts = grader.predict_batch(servings)
grader.close()

for (name, sugar), verdict in zip(servings, verdicts):
    print(f"  {name:<10} {sugar:>5} g  ->  {verdict}")
print()

# ----------------------------------------------------------------------------
# Part 2: the TypeScript adapter serving an exported forest. The artifact
# captures split thresholds, categories, and vote order, so the adapter's
# answers must be bit-identical to the in-process oracle's.
# ----------------------------------------------------------------------------

adapter_cli = os.path.join(os.path.dirname(__file__), "..", "adapter", "dist", "cli.js")
if shutil.which("node") is None or not os.path.exists(adapter_cli):
    print("TypeScript adapter not built; run 'npm install && npm run build' in")
    print("adapter/ and rerun this script to see the cross-language half.")
    raise SystemExit(0)

rng = np.random.default_rng(5)
n = 300
size = rng.uniform(0.0, 8.0, size=n)
roast = rng.choice(["light", "dark"], size=n)
data = Dataset(
    (
        FeatureSchema("size", NUMERIC),
        FeatureSchema("roast", CATEGORICAL, categories=("light", "dark")),
    ),
    [size, np.array([("light", "dark").index(r) for r in roast], dtype=np.int32)],
)
labels = np.where((size >= 4.0) & (roast == "dark"), "bold", "mild").tolist()
forest = fit_builtin_forest(data, labels, n_trees=9, max_depth=4, seed=2)

artifact_path = os.path.join(workdir, "roaster.json")
with open(artifact_path, "w") as fh:
    fh.write(dump_json(oracle_to_artifact(forest)) + "\n")
print(f"Exported the forest to {artifact_path}")

served = connect_external(
    ["node", adapter_cli, "--model", artifact_path], class_labels=forest.class_labels
)
probe = [[float(rng.uniform(0, 8)), str(rng.choice(["light", "dark"]))] for _ in range(200)]
remote = served.predict_batch(probe)
served.close()
local = forest.predict_batch(probe)

agreement = sum(1 for a, b in zip(remote, local) if a == b)
print(f"Adapter vs in-process forest on {len(probe)} probes: {agreement} identical.")
assert remote == local
print("The explanation pipeline treats both ends of the pipe the same way:")
print("pass oracle_command=('node', 'adapter/dist/cli.js', '--model', ...) in a")
print("RunConfig, or --oracle-cmd on the command line, and everything else holds.")

import numpy as np
import pytest

from evorules import CATEGORICAL, NUMERIC, Dataset, FeatureSchema


def make_dataset(spec: list[tuple[str, str, list]], cuts: dict[str, tuple] | None = None) -> Dataset:
    """Build a dataset from (name, kind, raw values) triples."""
    schema = []
    columns = []
    for name, kind, values in spec:
        if kind == NUMERIC:
            schema.append(FeatureSchema(name, NUMERIC))
            columns.append(np.asarray(values, dtype=np.float64))
        else:
            cats: list[str] = []
            seen: dict[str, int] = {}
            codes = []
            for v in values:
                if v not in seen:
                    seen[v] = len(cats)
                    cats.append(v)
                codes.append(seen[v])
            schema.append(FeatureSchema(name, CATEGORICAL, categories=tuple(cats)))
            columns.append(np.asarray(codes, dtype=np.int32))
    ds = Dataset(schema, columns)
    if cuts:
        ds = ds.with_cuts(cuts)
    return ds


@pytest.fixture
def credit_table():
    """Four-row age/state toy with its model predictions."""
    data = make_dataset(
        [
            ("age", NUMERIC, [27.0, 22.0, 31.0, 21.0]),
            ("state", CATEGORICAL, ["California", "Texas", "California", "Texas"]),
        ],
        cuts={"age": (24.5,)},
    )
    labels = ["not-default", "default", "not-default", "default"]
    return data, labels


@pytest.fixture(scope="session")
def demo_csv(tmp_path_factory):
    """Small labeled CSV: pos iff x >= 5 and color is red."""
    path = tmp_path_factory.mktemp("data") / "demo.csv"
    rng = np.random.default_rng(7)
    n = 120
    x = np.round(rng.random(n) * 10.0, 3)
    color = rng.choice(["red", "blue"], size=n)
    label = np.where((x >= 5.0) & (color == "red"), "pos", "neg")
    lines = ["x,color,label"]
    lines += [f"{xi},{c},{l}" for xi, c, l in zip(x, color, label)]
    path.write_text("\n".join(lines) + "\n")
    return str(path)

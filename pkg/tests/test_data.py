import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evorules import (
    CATEGORICAL,
    NUMERIC,
    Dataset,
    FeatureSchema,
    conform_to_schema,
    entropy_bin,
    load_csv,
    split,
)

from conftest import make_dataset


def write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


CREDIT_CSV = "age,state,label\n27,California,not-default\n22,Texas,default\n31,California,not-default\n21,Texas,default\n"


def test_load_csv_infers_kinds(tmp_path):
    ds = load_csv(write(tmp_path, CREDIT_CSV))
    assert [f.name for f in ds.schema] == ["age", "state", "label"]
    assert [f.kind for f in ds.schema] == [NUMERIC, CATEGORICAL, CATEGORICAL]
    assert ds.schema[1].categories == ("California", "Texas")
    assert ds.n_rows == 4
    assert ds.row(0) == (27.0, "California", "not-default")
    assert ds.row(3) == (21.0, "Texas", "default")


def test_load_csv_single_row(tmp_path):
    ds = load_csv(write(tmp_path, "a,b\n1,x\n"))
    assert ds.n_rows == 1


def test_load_csv_ragged_row_names_row_number(tmp_path):
    path = write(tmp_path, "a,b\n1,2,3\n")
    with pytest.raises(ValueError, match="row 1"):
        load_csv(path)


def test_load_csv_empty_cell_rejected(tmp_path):
    path = write(tmp_path, "a,b\n1,x\n2,\n")
    with pytest.raises(ValueError, match="row 2"):
        load_csv(path)


def test_load_csv_empty_inputs(tmp_path):
    with pytest.raises(ValueError, match="empty file"):
        load_csv(write(tmp_path, ""))
    with pytest.raises(ValueError, match="no data rows"):
        load_csv(write(tmp_path, "a,b\n"))


def test_load_csv_hints(tmp_path):
    path = write(tmp_path, "a,b\n1,2\n3,4\n")
    ds = load_csv(path, {"b": CATEGORICAL})
    assert ds.schema[1].kind == CATEGORICAL
    assert ds.schema[1].categories == ("2", "4")
    with pytest.raises(ValueError, match="not numeric"):
        load_csv(write(tmp_path, "a\nx\n", name="o.csv"), {"a": NUMERIC})
    with pytest.raises(ValueError, match="unknown column"):
        load_csv(path, {"zzz": NUMERIC})
    with pytest.raises(ValueError, match="bad schema hint"):
        load_csv(path, {"a": "float"})


def test_duplicate_header_rejected(tmp_path):
    with pytest.raises(ValueError, match="duplicate"):
        load_csv(write(tmp_path, "a,a\n1,2\n"))


def test_dataset_helpers(credit_table):
    data, _ = credit_table
    assert data.n_features == 2
    sub = data.subset([1, 3])
    assert sub.rows() == [(22.0, "Texas"), (21.0, "Texas")]
    dropped = data.drop("age")
    assert [f.name for f in dropped.schema] == ["state"]
    both = sub.concat(sub)
    assert both.n_rows == 4
    with pytest.raises(KeyError):
        data.feature_index("nope")


def test_column_strings_requires_categorical(credit_table):
    data, _ = credit_table
    assert data.column_strings("state") == ["California", "Texas", "California", "Texas"]
    with pytest.raises(ValueError):
        data.column_strings("age")


def test_binned_matrix_and_bin_rows(credit_table):
    data, _ = credit_table
    X = data.binned_matrix()
    assert X.tolist() == [[1, 0], [0, 1], [1, 0], [0, 1]]
    again = data.bin_rows(data.rows())
    assert (again == X).all()
    unknown = data.bin_rows([(25.0, "Nevada")])
    assert unknown.tolist() == [[1, -1]]


def test_with_cuts_validation(credit_table):
    data, _ = credit_table
    with pytest.raises(ValueError):
        data.with_cuts({"state": (1.0,)})
    with pytest.raises(ValueError):
        data.with_cuts({"age": (3.0, 3.0)})


def test_conform_to_schema(credit_table):
    data, _ = credit_table
    reference = [
        FeatureSchema("state", CATEGORICAL, categories=("Texas", "Nevada", "California")),
        FeatureSchema("age", NUMERIC, cuts=(30.0,)),
    ]
    out = conform_to_schema(data, reference)
    assert [f.name for f in out.schema] == ["state", "age"]
    assert out.column_strings("state") == ["California", "Texas", "California", "Texas"]
    assert out.binned_matrix()[:, 1].tolist() == [0, 0, 1, 0]
    bad = [FeatureSchema("state", CATEGORICAL, categories=("Texas",))]
    with pytest.raises(ValueError, match="California"):
        conform_to_schema(data, bad)
    with pytest.raises(ValueError, match="numeric"):
        conform_to_schema(data, [FeatureSchema("age", CATEGORICAL, categories=("x",))])


# --- splits -------------------------------------------------------------------


def test_split_sizes():
    s = split(10, seed=1)
    assert (len(s.train), len(s.valid), len(s.score)) == (6, 2, 2)
    s = split(100, seed=1)
    assert (len(s.train), len(s.valid), len(s.score)) == (60, 20, 20)


def test_split_partition_and_determinism():
    a = split(57, seed=42)
    b = split(57, seed=42)
    for x, y in zip((a.train, a.valid, a.score), (b.train, b.valid, b.score)):
        assert (x == y).all()
    all_idx = np.concatenate([a.train, a.valid, a.score])
    assert sorted(all_idx.tolist()) == list(range(57))
    c = split(57, seed=43)
    assert not (np.concatenate([c.train, c.valid, c.score]) == all_idx).all()


def test_split_too_small():
    with pytest.raises(ValueError):
        split(4, seed=0)


# --- entropy binning ------------------------------------------------------------


def brute_force_best_cut(values, labels):
    """Oracle: scan every midpoint; return (cut, gain, accepted) or None."""
    order = np.argsort(values, kind="stable")
    v = np.asarray(values, dtype=float)[order]
    y = np.asarray(labels)[order]
    n = len(v)

    def ent(lab):
        total = len(lab)
        if total == 0:
            return 0.0
        out = 0.0
        for c in set(lab.tolist()):
            p = (lab == c).sum() / total
            out -= p * math.log2(p)
        return out

    base = ent(y)
    best = None
    for i in range(1, n):
        if v[i] == v[i - 1]:
            continue
        left, right = y[:i], y[i:]
        w = (i / n) * ent(left) + ((n - i) / n) * ent(right)
        if best is None or w < best[1] - 1e-12:
            best = ((v[i - 1] + v[i]) / 2.0, w, i)
    if best is None:
        return None
    cut, w, i = best
    gain = base - w
    left, right = y[:i], y[i:]
    k = len(set(y.tolist()))
    k1 = len(set(left.tolist()))
    k2 = len(set(right.tolist()))
    delta = math.log2(3**k - 2) - (k * base - k1 * ent(left) - k2 * ent(right))
    accepted = gain > (math.log2(n - 1) + delta) / n
    return cut, gain, accepted


def test_entropy_bin_separable():
    values = [1, 2, 3, 10, 11, 12]
    labels = ["A", "A", "A", "B", "B", "B"]
    oracle = brute_force_best_cut(values, labels)
    assert oracle is not None and oracle[2], "oracle says this split must be accepted"
    cuts = entropy_bin(values, labels)
    assert len(cuts) == 1
    assert cuts[0] == oracle[0] == 6.5
    assert 3 < cuts[0] <= 10


def test_entropy_bin_rejects_interleaved():
    values = [1, 2, 3, 4]
    labels = ["A", "B", "A", "B"]
    oracle = brute_force_best_cut(values, labels)
    assert oracle is not None and not oracle[2], "oracle says MDL must reject"
    assert entropy_bin(values, labels) == ()


def test_entropy_bin_constant_column():
    assert entropy_bin([5.0] * 10, ["A", "B"] * 5) == ()


def test_entropy_bin_max_bins_cap():
    rng = np.random.default_rng(0)
    values = np.concatenate([rng.normal(c, 0.1, 50) for c in (0.0, 10.0, 20.0, 30.0)])
    labels = np.repeat(["a", "b", "c", "d"], 50)
    assert len(entropy_bin(values, labels, max_bins=8)) == 3
    capped = entropy_bin(values, labels, max_bins=2)
    assert len(capped) == 1


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(0, 9), min_size=2, max_size=60),
    st.integers(2, 5),
    st.integers(0, 2**31),
)
def test_entropy_bin_properties(vals, max_bins, label_seed):
    rng = np.random.default_rng(label_seed)
    labels = rng.choice(["u", "v", "w"], size=len(vals))
    cuts = entropy_bin([float(v) for v in vals], labels, max_bins=max_bins)
    assert len(cuts) <= max_bins - 1
    assert all(b > a for a, b in zip(cuts, cuts[1:]))
    if cuts:
        assert min(vals) < cuts[0] and cuts[-1] <= max(vals)
    # every value lands in exactly one bin index within range
    idx = np.searchsorted(np.asarray(cuts), np.asarray(vals, dtype=float), side="right")
    assert ((0 <= idx) & (idx <= len(cuts))).all()

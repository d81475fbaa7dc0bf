import json

import pytest

from evorules.cli import build_config, build_parser, main

FAST = [
    "--label-column", "label",
    "--miner", "frequent",
    "--generations", "20",
    "--population", "16",
    "--sizes", "3",
    "--seed", "0",
]


def run_explain(demo_csv, out_dir):
    argv = ["explain", "--data", demo_csv, *FAST, "--out", str(out_dir)]
    return main(argv)


def test_no_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2
    assert "usage" in capsys.readouterr().err.lower()


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["explain", "--frobnicate"])
    assert e.value.code == 2


def test_explain_subcommand(demo_csv, tmp_path, capsys):
    rc = run_explain(demo_csv, tmp_path / "out")
    out = capsys.readouterr().out
    assert rc == 0
    assert "top 3: validation Set-Score" in out
    assert (tmp_path / "out" / "interpretation_top3.json").exists()
    assert (tmp_path / "out" / "report.md").exists()


def test_explain_missing_data_exits_1(capsys):
    rc = main(["explain", "--data", "/nonexistent/nothing.csv", *FAST])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


def test_explain_bad_hint_exits_1(demo_csv, capsys):
    rc = main(["explain", "--data", demo_csv, *FAST, "--hint", "nonsense"])
    assert rc == 1
    assert "hint" in capsys.readouterr().err


def test_predict_subcommand(demo_csv, tmp_path, capsys):
    assert run_explain(demo_csv, tmp_path / "out") == 0
    capsys.readouterr()
    interp = tmp_path / "out" / "interpretation_top3.json"
    pred_file = tmp_path / "pred.txt"
    rc = main([
        "predict",
        "--interpretation", str(interp),
        "--data", demo_csv,
        "--out", str(pred_file),
    ])
    assert rc == 0
    lines = pred_file.read_text().splitlines()
    assert len(lines) == 120
    assert set(lines) <= {"pos", "neg", "abstain"}
    # without --out the labels go to stdout
    rc = main(["predict", "--interpretation", str(interp), "--data", demo_csv])
    assert rc == 0
    assert capsys.readouterr().out.splitlines() == lines


def test_robustness_subcommand(demo_csv, tmp_path, capsys):
    assert run_explain(demo_csv, tmp_path / "out") == 0
    capsys.readouterr()
    interp = tmp_path / "out" / "interpretation_top3.json"
    rb_out = tmp_path / "rb"
    rc = main([
        "robustness",
        "--data", demo_csv,
        *FAST,
        "--interpretation", str(interp),
        "--interpretation", str(interp),
        "--partitions", "3",
        "--fraction", "0.25",
        "--out", str(rb_out),
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "Method 1 (bootstrap)" in out
    # the same approach loaded twice gets a -2 suffix instead of clobbering
    assert "evolved-2" in out
    doc = json.loads((rb_out / "robustness.json").read_text())
    assert set(doc["approaches"]) == {"evolved", "evolved-2"}
    assert (rb_out / "robustness.md").exists()


def test_compare_subcommand(demo_csv, tmp_path, capsys):
    cmp_out = tmp_path / "cmp"
    rc = main([
        "compare",
        "--data", demo_csv,
        *FAST,
        "--dt-depths", "2,3",
        "--apriori-supports", "0.1",
        "--out", str(cmp_out),
    ])
    out = capsys.readouterr().out
    assert rc == 0
    for approach in ("evolved", "dt-surrogate", "apriori"):
        assert approach in out
    assert (cmp_out / "comparison.json").exists()
    assert (cmp_out / "comparison.md").exists()


def test_config_file_with_flag_override(demo_csv, tmp_path):
    cfg_file = tmp_path / "run.json"
    cfg_file.write_text(json.dumps({
        "data_path": demo_csv,
        "label_column": "label",
        "generations": 5,
        "selection_sizes": [3, 5],
        "miner": "frequent",
    }))
    parser = build_parser()
    args = parser.parse_args(["explain", "--config", str(cfg_file), "--generations", "10"])
    cfg = build_config(args)
    assert cfg.data_path == demo_csv
    assert cfg.generations == 10  # flag beats file
    assert cfg.selection_sizes == (3, 5)
    assert cfg.miner == "frequent"


def test_config_file_unknown_key_exits_1(demo_csv, tmp_path, capsys):
    cfg_file = tmp_path / "bad.json"
    cfg_file.write_text(json.dumps({"data_path": demo_csv, "bogus_knob": 1}))
    rc = main(["explain", "--config", str(cfg_file)])
    assert rc == 1
    assert "bogus_knob" in capsys.readouterr().err


def test_missing_data_everywhere_exits_1(capsys):
    rc = main(["explain", "--label-column", "label"])
    assert rc == 1
    assert "no input data" in capsys.readouterr().err


def test_hint_flags_merge(demo_csv, tmp_path):
    hints_file = tmp_path / "hints.json"
    hints_file.write_text(json.dumps({"x": "numeric"}))
    parser = build_parser()
    args = parser.parse_args([
        "explain", "--data", demo_csv,
        "--schema-hints", str(hints_file),
        "--hint", "color=categorical",
        "--label-column", "label",
    ])
    cfg = build_config(args)
    assert cfg.schema_hints == {"x": "numeric", "color": "categorical"}


def test_external_oracle_flags_roundtrip(demo_csv):
    parser = build_parser()
    args = parser.parse_args([
        "explain", "--data", demo_csv,
        "--oracle", "external",
        "--oracle-cmd", "python3 adapter.py --model m.json",
        "--class-labels", "pos, neg",
    ])
    cfg = build_config(args)
    assert cfg.oracle_kind == "external"
    assert cfg.oracle_command == ("python3", "adapter.py", "--model", "m.json")
    assert cfg.class_labels == ("pos", "neg")

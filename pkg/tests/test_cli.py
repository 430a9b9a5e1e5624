import csv
import json

import pytest

from bloomclock.cli import PAIR_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fpr_worked_example(capsys):
    code, out, _ = run(capsys, "fpr", "--m", "6", "--a-sum", "7", "--b-sum", "10")
    assert code == 0 and out.strip() == "0.2914"


def test_fpr_empty_a(capsys):
    assert run(capsys, "fpr", "--m", "6", "--a-sum", "0", "--b-sum", "10")[1].strip() == "1.0000"


def test_fpr_rejects_reversed_sums(capsys):
    code, out, err = run(capsys, "fpr", "--m", "6", "--a-sum", "10", "--b-sum", "7")
    assert code == 1 and out == "" and "b-sum" in err


def test_fpr_montecarlo(capsys):
    code, out, _ = run(capsys, "fpr", "--m", "2", "--a-sum", "2", "--b-sum", "3", "--montecarlo", "20000")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "0.7656"
    assert lines[1].startswith("montecarlo 0.6")


def test_bad_flags_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--no-such-flag"])
    assert exc.value.code == 2


def test_simulate_invalid_config(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", "--drop", "1.5", "--out-dir", str(tmp_path))
    assert code == 1 and "drop_rate" in err


def _simulate(capsys, out_dir, *extra):
    return run(
        capsys, "simulate", "--nodes", "8", "--m", "64", "--k", "3", "--events", "400",
        "--drop", "0.2", "--seed", "7", "--pair-cap", "300", "--out-dir", str(out_dir), *extra,
    )


def test_simulate_outputs(capsys, tmp_path):
    code, out, _ = _simulate(capsys, tmp_path)
    assert code == 0 and "false_negatives=0" in out
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["n_nodes"] == 8 and manifest["seed"] == 7
    assert manifest["config"]["delay"] == "uniform:1,5"
    metrics = json.loads((tmp_path / "metrics.json").read_text())
    assert metrics["schema_version"] == 1
    assert metrics["false_negative_count"] == 0
    assert metrics["n_pairs"] == 400 * 399 // 2
    with open(tmp_path / "pairs.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert tuple(rows[0]) == PAIR_COLUMNS and len(rows) == 300
    for r in rows:
        if r["bloom_verdict"] == "concurrent":
            assert r["fp_predicted"] == "" and r["accepted"] == ""
        else:
            assert r["accepted"] == str(float(r["fp_predicted"]) <= 0.05).lower()


def test_simulate_is_byte_identical(capsys, tmp_path):
    _simulate(capsys, tmp_path)
    first = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    _simulate(capsys, tmp_path)
    assert first == {p.name: p.read_bytes() for p in tmp_path.iterdir()}


def test_simulate_empty(capsys, tmp_path):
    code, _, _ = run(capsys, "simulate", "--nodes", "2", "--events", "0", "--out-dir", str(tmp_path))
    assert code == 0
    assert json.loads((tmp_path / "metrics.json").read_text())["n_pairs"] == 0


def test_manifest_replays_run(capsys, tmp_path):
    from bloomclock import DelayModel, SimConfig, run_simulation

    _simulate(capsys, tmp_path)
    cfg = json.loads((tmp_path / "manifest.json").read_text())["config"]
    cfg["delay"] = DelayModel.parse(cfg["delay"])
    _, metrics = run_simulation(SimConfig(**cfg))
    saved = json.loads((tmp_path / "metrics.json").read_text())
    assert saved["crosstab"] == metrics.crosstab
